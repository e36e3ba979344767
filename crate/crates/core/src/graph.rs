//! Multi-digraphs with a global sink, their reduced Laplacian and the
//! strongly connected component structure of the non-sink part.
//!
//! Vertices carry 1-based labels `1..=n+1` in graph files. Internally the
//! non-sink vertices occupy positions `0..n` in increasing label order and
//! the sink sits at position `n`; configurations and scripts are indexed by
//! these positions.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// A multi-digraph whose sink has out-degree zero and is reachable from
/// every other vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    /// `labels[p]` is the file label of internal position `p`; the sink is last.
    labels: Vec<usize>,
    /// `mult[u][v]` is the number of edges `u -> v`, internal positions.
    mult: Vec<Vec<u64>>,
    laplacian: ReducedLaplacian,
    scc: SccDecomposition,
}

impl Digraph {
    /// Builds and validates a graph from labelled edges `(u, v, multiplicity)`.
    /// Repeated `(u, v)` pairs accumulate; zero multiplicities are ignored.
    pub fn new<I>(vertex_count: usize, sink: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        if vertex_count < 2 {
            return Err(Error::NoVertices);
        }
        check_label(sink, vertex_count)?;
        let labels: Vec<usize> = (1..=vertex_count)
            .filter(|&v| v != sink)
            .chain(std::iter::once(sink))
            .collect();
        let mut position = vec![0; vertex_count + 1];
        for (p, &l) in labels.iter().enumerate() {
            position[l] = p;
        }

        let mut mult = vec![vec![0u64; vertex_count]; vertex_count];
        for (u, v, m) in edges {
            check_label(u, vertex_count)?;
            check_label(v, vertex_count)?;
            if m == 0 {
                continue;
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u == sink {
                return Err(Error::SinkHasOutEdge(sink));
            }
            mult[position[u]][position[v]] += m;
        }
        Self::from_parts(labels, mult)
    }

    fn from_parts(labels: Vec<usize>, mult: Vec<Vec<u64>>) -> Result<Self> {
        let total = labels.len();
        let sink = total - 1;

        // reverse BFS from the sink
        let mut reached = vec![false; total];
        reached[sink] = true;
        let mut queue = VecDeque::from([sink]);
        while let Some(v) = queue.pop_front() {
            for u in 0..total {
                if !reached[u] && mult[u][v] > 0 {
                    reached[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if let Some(u) = (0..total).filter(|&u| !reached[u]).min_by_key(|&u| labels[u]) {
            return Err(Error::SinkUnreachable(labels[u]));
        }

        let laplacian = laplacian_from_multiplicities(&mult);
        let scc = decompose(&mult);
        Ok(Digraph { labels, mult, laplacian, scc })
    }

    /// Number of non-sink vertices.
    pub fn n(&self) -> usize {
        self.labels.len() - 1
    }

    /// Number of vertices including the sink.
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn sink_label(&self) -> usize {
        self.labels[self.n()]
    }

    /// File label of the internal position `p` (the sink is position `n`).
    pub fn label(&self, p: usize) -> usize {
        self.labels[p]
    }

    /// Internal position of a file label.
    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Number of edges between two internal positions (sink = `n`).
    pub fn multiplicity(&self, from: usize, to: usize) -> u64 {
        self.mult[from][to]
    }

    pub fn out_degree(&self, v: usize) -> u64 {
        self.mult[v].iter().sum()
    }

    /// In-degree of a non-sink vertex; only non-sink vertices have out-edges.
    pub fn in_degree(&self, v: usize) -> u64 {
        (0..self.n()).map(|u| self.mult[u][v]).sum()
    }

    pub fn sink_edges(&self, v: usize) -> u64 {
        self.mult[v][self.n()]
    }

    pub fn out_degrees(&self) -> Vec<i64> {
        (0..self.n()).map(|v| self.out_degree(v) as i64).collect()
    }

    /// The maximum stable configuration `d^+ - 1`.
    pub fn a_max(&self) -> Vec<i64> {
        self.out_degrees().into_iter().map(|d| d - 1).collect()
    }

    /// Number of stable configurations, `prod d^+_i`.
    pub fn stable_count(&self) -> u128 {
        (0..self.n()).map(|v| self.out_degree(v) as u128).product()
    }

    pub fn laplacian(&self) -> &ReducedLaplacian {
        &self.laplacian
    }

    pub fn scc(&self) -> &SccDecomposition {
        &self.scc
    }

    /// Edge list `(u, v, multiplicity)` with file labels, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, u64)> {
        let mut edges = Vec::new();
        for u in 0..self.vertex_count() {
            for v in 0..self.vertex_count() {
                if self.mult[u][v] > 0 {
                    edges.push((self.labels[u], self.labels[v], self.mult[u][v]));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Serializes the graph in the text format accepted by [`parse_graph`].
    pub fn to_graph_file(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {}", self.vertex_count());
        let _ = writeln!(out, "sink {}", self.sink_label());
        for (u, v, m) in self.edges() {
            let _ = writeln!(out, "edge {u} {v} {m}");
        }
        out
    }
}

fn check_label(label: usize, max: usize) -> Result<()> {
    if label == 0 || label > max {
        Err(Error::IndexOutOfRange { index: label, max })
    } else {
        Ok(())
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertices 4
/// sink 4
/// edge 1 2 3
/// ```
///
/// `edge` lines may repeat a pair; multiplicities add up.
pub fn parse_graph(text: &str) -> Result<Digraph> {
    let mut vertices: Option<usize> = None;
    let mut sink: Option<usize> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line: line_no, message };
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();
        let number = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| syntax(format!("expected a non-negative integer, found `{s}`")))
        };

        match (keyword, vertices, sink) {
            ("vertices", None, None) => {
                if args.len() != 1 {
                    return Err(syntax("expected `vertices <count>`".into()));
                }
                vertices = Some(number(args[0])? as usize);
            }
            ("sink", Some(_), None) => {
                if args.len() != 1 {
                    return Err(syntax("expected `sink <index>`".into()));
                }
                sink = Some(number(args[0])? as usize);
            }
            ("edge", Some(_), Some(_)) => {
                if args.len() != 3 {
                    return Err(syntax("expected `edge <u> <v> <mult>`".into()));
                }
                let m = number(args[2])?;
                if m == 0 {
                    return Err(syntax("edge multiplicity must be at least 1".into()));
                }
                edges.push((number(args[0])? as usize, number(args[1])? as usize, m));
            }
            (_, None, _) => return Err(syntax("first line must be `vertices <count>`".into())),
            (_, Some(_), None) => return Err(syntax("second line must be `sink <index>`".into())),
            _ => return Err(syntax(format!("unexpected `{keyword}`"))),
        }
    }

    match (vertices, sink) {
        (Some(v), Some(s)) => Digraph::new(v, s, edges),
        _ => Err(Error::Syntax {
            line: text.lines().count().max(1),
            message: "missing `vertices` or `sink` line".into(),
        }),
    }
}

/// The `n x n` matrix with `d^+_i` on the diagonal and `-e_ij` elsewhere,
/// sink row and column removed. Firing vertex `i` subtracts row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedLaplacian {
    n: usize,
    entries: Vec<i64>,
}

impl ReducedLaplacian {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "laplacian rows must be square");
        ReducedLaplacian { n, entries: rows.concat() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row vector times matrix: `script * Δ`.
    pub fn apply(&self, script: &[i64]) -> Vec<i64> {
        debug_assert_eq!(script.len(), self.n);
        let mut out = vec![0i64; self.n];
        for (i, &s) in script.iter().enumerate() {
            if s != 0 {
                for (o, &d) in out.iter_mut().zip(self.row(i)) {
                    *o += s * d;
                }
            }
        }
        out
    }

    /// Principal submatrix on the given positions.
    pub fn restrict(&self, positions: &[usize]) -> ReducedLaplacian {
        let rows: Vec<Vec<i64>> = positions
            .iter()
            .map(|&i| positions.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        ReducedLaplacian::from_rows(&rows)
    }

    pub fn to_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(&self.rows()).expect("laplacian is non-empty")
    }
}

fn laplacian_from_multiplicities(mult: &[Vec<u64>]) -> ReducedLaplacian {
    let n = mult.len() - 1;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        mult[i].iter().sum::<u64>() as i64
                    } else {
                        -(mult[i][j] as i64)
                    }
                })
                .collect()
        })
        .collect();
    ReducedLaplacian::from_rows(&rows)
}

/// Reduced Laplacian of a validated graph.
pub fn reduced_laplacian(g: &Digraph) -> ReducedLaplacian {
    laplacian_from_multiplicities(&g.mult)
}

/// Maximal strongly connected components of the non-sink subgraph, ordered
/// by their minimum vertex, each with its level in the condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<Vec<usize>>,
    levels: Vec<usize>,
    component_of: Vec<usize>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &[usize] {
        &self.components[k]
    }

    pub fn level(&self, k: usize) -> usize {
        self.levels[k]
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Index of the component containing vertex `v`.
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Component indices grouped by level, ascending.
    pub fn by_level(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.max_level() + 1];
        for (k, &l) in self.levels.iter().enumerate() {
            out[l].push(k);
        }
        out
    }
}

/// Computes the strongly connected components of the non-sink subgraph and
/// their levels.
pub fn scc_levels(g: &Digraph) -> SccDecomposition {
    decompose(&g.mult)
}

fn decompose(mult: &[Vec<u64>]) -> SccDecomposition {
    let n = mult.len() - 1;
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| mult[u][v] > 0).collect())
        .collect();

    let mut components = tarjan(&adj);
    for c in &mut components {
        c.sort_unstable();
    }
    components.sort_unstable_by_key(|c| c[0]);

    let mut component_of = vec![0; n];
    for (k, c) in components.iter().enumerate() {
        for &v in c {
            component_of[v] = k;
        }
    }

    // longest-path depth over the condensation, Kahn order
    let k = components.len();
    let mut succ = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    for u in 0..n {
        for &v in &adj[u] {
            let (cu, cv) = (component_of[u], component_of[v]);
            if cu != cv && !succ[cu].contains(&cv) {
                succ[cu].push(cv);
                indeg[cv] += 1;
            }
        }
    }
    let mut levels = vec![0usize; k];
    let mut queue: VecDeque<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
    while let Some(c) = queue.pop_front() {
        for &d in &succ[c] {
            levels[d] = levels[d].max(levels[c] + 1);
            indeg[d] -= 1;
            if indeg[d] == 0 {
                queue.push_back(d);
            }
        }
    }

    SccDecomposition { components, levels, component_of }
}

/// Iterative Tarjan.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, next edge to explore)
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*next) {
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// The graph `G[C]`: the vertices of `component` plus a fresh sink that
/// receives every edge leaving the component. Component vertices are
/// relabelled `1..=k` in the order given; the new sink is `k + 1`.
pub fn extended_graph(g: &Digraph, component: &[usize]) -> Result<Digraph> {
    let k = component.len();
    if k == 0 {
        return Err(Error::NoVertices);
    }
    let mut local = vec![None; g.n()];
    for (i, &v) in component.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::IndexOutOfRange { index: v + 1, max: g.n() });
        }
        local[v] = Some(i);
    }
    let mut mult = vec![vec![0u64; k + 1]; k + 1];
    for (i, &v) in component.iter().enumerate() {
        for u in 0..g.vertex_count() {
            let m = g.mult[v][u];
            if m == 0 {
                continue;
            }
            let target = if u < g.n() { local[u].unwrap_or(k) } else { k };
            mult[i][target] += m;
        }
    }
    let labels: Vec<usize> = (1..=k + 1).collect();
    Digraph::from_parts(labels, mult)
}
