//! Golden cases for the worked example graph, shared by the golden test and
//! the acceptance run.

use std::path::PathBuf;

pub const CASES: &[(&str, &[&str], i32)] = &[
    ("validate", &["validate"], 0),
    ("laplacian", &["laplacian"], 0),
    ("stabilize", &["stabilize", "-c", "4,3,2"], 0),
    ("sigma_min", &["sigma-min"], 0),
    ("sigma_min_json", &["sigma-min", "--format", "json"], 0),
    ("is_critical_zero", &["is-critical", "-c", "0,0,0"], 1),
    ("is_critical_top", &["is-critical", "-c", "4,1,1"], 0),
    ("is_critical_inverse_script", &["is-critical", "-c", "2,0,1", "--script", "3,12,11"], 0),
    ("is_critical_nonstability", &["is-critical", "-c", "1,1,1", "--method", "nonstability"], 1),
    ("is_critical_oracle", &["is-critical", "-c", "3,1,0", "--method", "oracle"], 0),
    ("is_superstable_yes", &["is-superstable", "-c", "2,1,0"], 0),
    ("is_superstable_no", &["is-superstable", "-c", "3,0,0"], 1),
    ("critical_rep", &["critical-rep", "-c", "3,0,0"], 0),
    ("superstable_rep", &["superstable-rep", "-c", "4,0,0"], 0),
    ("enumerate_critical", &["enumerate", "--kind", "critical"], 0),
    ("enumerate_superstable", &["enumerate", "--kind", "superstable"], 0),
    ("enumerate_classes", &["enumerate", "--kind", "classes"], 0),
    ("enumerate_classes_json", &["enumerate", "--kind", "classes", "--format", "json"], 0),
    ("equivalent", &["equivalent", "-c", "3,0,0", "-c", "2,1,1"], 0),
    ("not_equivalent", &["equivalent", "-c", "3,0,0", "-c", "2,0,1"], 1),
    ("check", &["check"], 0),
    ("unstable_input", &["is-critical", "-c", "5,0,0"], 2),
];

pub fn graph_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs/g_star.cfg")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// argv with the graph file inserted after the subcommand.
pub fn argv(args: &[&str]) -> Vec<String> {
    let mut v = vec!["chipfire".to_string(), args[0].to_string()];
    v.push(graph_path().to_string_lossy().into_owned());
    v.extend(args[1..].iter().map(|s| s.to_string()));
    v
}
