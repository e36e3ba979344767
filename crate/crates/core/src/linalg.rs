//! Exact dense linear algebra over arbitrary-precision integers and rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rectangular matrix of big integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::NoVertices);
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::LengthMismatch { expected: c, got: bad.len() });
        }
        Ok(IntegerMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::from_rows(rows).expect("identity of positive size")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn to_grid(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }
}

/// Exact rational vector, every entry in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RationalVector(entries)
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The integer entries, if every entry is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    /// Integer entries as `i64`; `None` if any entry is fractional.
    pub fn to_i64s(&self) -> Result<Option<Vec<i64>>> {
        match self.to_integers() {
            None => Ok(None),
            Some(v) => v
                .iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    pub fn scale(&self, k: &BigInt) -> RationalVector {
        let k = BigRational::from_integer(k.clone());
        RationalVector(self.0.iter().map(|q| q * &k).collect())
    }
}

/// Determinant by fraction-free (Bareiss) elimination. Pivot: first nonzero
/// entry at or below the diagonal.
pub fn determinant(m: &IntegerMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.to_grid();
    let mut negate = false;
    let mut prev = BigInt::one();

    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // exact by Sylvester's identity
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }

    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Solves `tau * m = v` for the row vector `tau` by rational Gauss-Jordan
/// elimination.
pub fn solve_row(v: &[BigInt], m: &IntegerMatrix) -> Result<RationalVector> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if v.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: v.len() });
    }

    // Augmented system m^T | v^T.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(m.get(j, i).clone()))
                .chain(std::iter::once(BigRational::from_integer(v[i].clone())))
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..=n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Ok(RationalVector(a.into_iter().map(|row| row[n].clone()).collect()))
}

/// Convenience for `i64` right-hand sides.
pub fn solve_row_i64(v: &[i64], m: &IntegerMatrix) -> Result<RationalVector> {
    let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    solve_row(&v, m)
}

/// `tau * m` for a rational row vector; used to verify solutions.
pub fn mul_row(tau: &RationalVector, m: &IntegerMatrix) -> Vec<BigRational> {
    (0..m.cols)
        .map(|j| {
            tau.0
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (i, t)| acc + t * BigRational::from_integer(m.get(i, j).clone()))
        })
        .collect()
}

pub(crate) fn abs_u128(x: &BigInt) -> Result<u128> {
    x.abs().to_u128().ok_or(Error::Overflow)
}
