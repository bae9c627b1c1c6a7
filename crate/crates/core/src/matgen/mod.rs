//! Exact construction of the Mandelbrot matrix family and its relatives.
//!
//! `M_1 = [1]` and `M_{n+1}` is assembled from two copies of `M_n` around a
//! new middle vertex with three connecting unit entries. Everything else
//! (`S_n = M_n J`, the Jordan–Wielandt matrix, the homotopy family `T(ε)`)
//! is derived from the same block recursion.

mod exact;
mod graph;
mod sparse;

use nalgebra::DMatrix;

pub use exact::{determinant, unit_hessenberg_inverse};
pub use graph::{digraph, is_strongly_connected, period, strongly_connected_components, DigraphEdgeList};
pub use sparse::{Entry, SparseIntMatrix};

use crate::error::{Error, Result};

/// Orders above this need more than double precision for the eigenvector.
pub const CONDITIONING_CEILING: usize = 26;

/// `d_n = 2^n - 1`.
pub fn dimension(n: usize) -> usize {
    (1usize << n) - 1
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    if n > 40 {
        return Err(Error::Domain(format!("order {n} is far beyond any addressable size")));
    }
    if n > CONDITIONING_CEILING {
        eprintln!(
            "warning: n = {n} exceeds {CONDITIONING_CEILING}; double precision results are unreliable"
        );
    }
    Ok(())
}

/// The Mandelbrot matrix `M_n` (unit upper Hessenberg, binary).
///
/// Built row by row in order, so no sort is needed: the new `(1, d_{n+1})`
/// entry closes row 1 and `(d_n + 2, d_n + 1)` opens the lower copy.
pub fn mandelbrot_matrix(n: usize) -> Result<SparseIntMatrix> {
    check_order(n)?;
    let mut m = SparseIntMatrix::identity(1);
    for _ in 1..n {
        m = double_mandelbrot(&m);
    }
    Ok(m)
}

fn double_mandelbrot(m: &SparseIntMatrix) -> SparseIntMatrix {
    let d = m.dim();
    let big = 2 * d + 1;
    let one = |row, col| Entry { row, col, value: 1 };
    let mut out = Vec::with_capacity(2 * m.nnz() + 3);
    for i in 1..=d {
        out.extend_from_slice(m.row(i));
        if i == 1 {
            out.push(one(1, big));
        }
    }
    out.push(one(d + 1, d));
    for i in 1..=d {
        if i == 1 {
            out.push(one(d + 2, d + 1));
        }
        out.extend(m.row(i).iter().map(|e| Entry {
            row: e.row + d + 1,
            col: e.col + d + 1,
            value: e.value,
        }));
    }
    SparseIntMatrix::from_sorted(big, out)
}

/// The reversal permutation `J` of size `d`.
pub fn anti_identity(d: usize) -> Result<SparseIntMatrix> {
    if d == 0 {
        return Err(Error::Domain("anti-identity needs d >= 1".into()));
    }
    Ok(SparseIntMatrix::from_sorted(
        d,
        (1..=d)
            .map(|i| Entry {
                row: i,
                col: d + 1 - i,
                value: 1,
            })
            .collect(),
    ))
}

/// `S_n = M_n J`, built by its own block recursion
/// `S_{n+1} = [[e1 e1ᵀ, 0, S_n], [0, 0, e1ᵀ], [S_n, e1, 0]]`.
pub fn s_matrix(n: usize) -> Result<SparseIntMatrix> {
    check_order(n)?;
    let mut s = SparseIntMatrix::identity(1);
    for _ in 1..n {
        s = s_step(&s, 1);
    }
    Ok(s)
}

/// One level of the `S` recursion with `scale` on the three new entries.
/// `scale = 1` is the plain recursion; `scale = 0` drops them.
fn s_step(s: &SparseIntMatrix, scale: i64) -> SparseIntMatrix {
    let d = s.dim();
    let mut triples: Vec<(usize, usize, i64)> = Vec::with_capacity(2 * s.nnz() + 3);
    triples.push((1, 1, scale));
    triples.extend(s.shifted(0, d + 1));
    triples.push((d + 1, d + 2, scale));
    triples.extend(s.shifted(d + 1, 0));
    triples.push((d + 2, d + 1, scale));
    SparseIntMatrix::from_triples(2 * d + 1, triples)
}

/// `[[0, M_n], [M_nᵀ, 0]]`.
pub fn jordan_wielandt(n: usize) -> Result<SparseIntMatrix> {
    let m = mandelbrot_matrix(n)?;
    let d = m.dim();
    let triples = m
        .shifted(0, d)
        .chain(m.entries().iter().map(|e| (e.col + d, e.row, e.value)));
    Ok(SparseIntMatrix::from_triples(2 * d, triples))
}

/// The exact inverse of `M_n`, entries in `{-1, 0, 1}`.
pub fn mandelbrot_inverse(n: usize) -> Result<SparseIntMatrix> {
    unit_hessenberg_inverse(&mandelbrot_matrix(n)?)
}

/// The symmetric family
/// `T(ε) = [[ε e1 e1ᵀ, 0, S_n], [0, 0, ε e1ᵀ], [S_n, ε e1, 0]]`
/// linking `{0} ∪ ±eig(S_n)` at `ε = 0` to `eig(S_{n+1})` at `ε = 1`.
#[derive(Clone, Debug)]
pub struct HomotopyMatrix {
    n: usize,
    /// The ε-independent part (both copies of `S_n`).
    base: SparseIntMatrix,
    /// 1-based positions carrying coefficient ε.
    eps_pattern: Vec<(usize, usize)>,
}

impl HomotopyMatrix {
    pub fn new(n: usize) -> Result<Self> {
        let s = s_matrix(n)?;
        let d = s.dim();
        Ok(Self {
            n,
            base: s_step(&s, 0),
            eps_pattern: vec![(1, 1), (d + 1, d + 2), (d + 2, d + 1)],
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &SparseIntMatrix {
        &self.base
    }

    pub fn eps_pattern(&self) -> &[(usize, usize)] {
        &self.eps_pattern
    }

    fn check_eps(eps: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::Domain(format!("eps = {eps} outside [0, 1]")));
        }
        Ok(())
    }

    pub fn assemble(&self, eps: f64) -> Result<DMatrix<f64>> {
        Self::check_eps(eps)?;
        let mut t = self.base.to_dense();
        for &(i, j) in &self.eps_pattern {
            t[(i - 1, j - 1)] += eps;
        }
        Ok(t)
    }

    /// `y = T(ε) x`.
    pub fn matvec(&self, eps: f64, x: &[f64], y: &mut [f64]) {
        self.base.matvec(x, y);
        for &(i, j) in &self.eps_pattern {
            y[i - 1] += eps * x[j - 1];
        }
    }

    /// `xᵀ T'(ε) x`; `T'` is constant.
    pub fn derivative_form(&self, x: &[f64]) -> f64 {
        self.eps_pattern
            .iter()
            .map(|&(i, j)| x[i - 1] * x[j - 1])
            .sum()
    }

    /// Integer assembly at ε = 1 (equals `S_{n+1}`).
    pub fn at_one(&self) -> SparseIntMatrix {
        let d = self.base.dim();
        let triples = self
            .base
            .entries()
            .iter()
            .map(|e| (e.row, e.col, e.value))
            .chain(self.eps_pattern.iter().map(|&(i, j)| (i, j, 1)));
        SparseIntMatrix::from_triples(d, triples)
    }
}

pub fn homotopy_matrix(n: usize) -> Result<HomotopyMatrix> {
    HomotopyMatrix::new(n)
}
