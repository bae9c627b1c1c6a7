//! Singular values of `M_n` through the symmetric `S_n = M_n J`.
//!
//! `S_n` is symmetric and its eigenvalues are `±σ_i` with signs alternating
//! by magnitude, so the dominant singular triple is the Perron pair of a
//! nonnegative symmetric matrix and plain power iteration finds it.

use std::cmp::Ordering;

use nalgebra::linalg::SymmetricEigen;
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matgen::{
    anti_identity, check_order, determinant, jordan_wielandt, mandelbrot_matrix, s_matrix,
    SparseIntMatrix,
};

pub const DENSE_SVD_CEILING: usize = 10;
pub const LARGE_SVD_CEILING: usize = 13;

pub const POWER_MAX_ITER: usize = 100_000;
/// Relative Rayleigh-quotient change required on two consecutive steps.
pub const RAYLEIGH_TOL: f64 = 1e-14;
pub const DEFAULT_TRIPLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularTriple {
    pub n: usize,
    pub sigma: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub iterations: usize,
    /// `‖M v − σ u‖∞`.
    pub residual: f64,
}

/// Dominant triple of `M_n` by power iteration on `S_n`.
pub fn dominant_singular_triple(n: usize, tol: f64) -> Result<SingularTriple> {
    check_order(n)?;
    let mut t = dominant_triple_of(&mandelbrot_matrix(n)?, tol)?;
    t.n = n;
    Ok(t)
}

/// Dominant triple of any square integer matrix `A` for which `A J` is
/// symmetric and entrywise nonnegative (`M_n` and `M_nᵀ` both qualify).
pub fn dominant_triple_of(a: &SparseIntMatrix, tol: f64) -> Result<SingularTriple> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let d = a.dim();
    let s = a.mul(&anti_identity(d)?)?;
    if !s.is_symmetric() || s.entries().iter().any(|e| e.value < 0) {
        return Err(Error::StructureViolation(
            "A J must be symmetric and nonnegative".into(),
        ));
    }
    let mut u = vec![1.0 / (d as f64).sqrt(); d];
    let mut w = vec![0.0; d];
    let mut history = Vec::new();
    let mut calm_steps = 0;
    let mut iterations = 0;
    let mut sigma = 0.0;
    while iterations < POWER_MAX_ITER {
        s.matvec(&u, &mut w);
        iterations += 1;
        let rq: f64 = dot(&u, &w);
        let norm = dot(&w, &w).sqrt();
        let prev = history.last().copied();
        history.push(rq);
        sigma = rq;
        let residual = u
            .iter()
            .zip(&w)
            .map(|(ui, wi)| (wi - rq * ui).abs())
            .fold(0.0, f64::max);
        for (ui, wi) in u.iter_mut().zip(&w) {
            *ui = wi / norm;
        }
        if let Some(p) = prev {
            if ((rq - p) / rq).abs() <= RAYLEIGH_TOL {
                calm_steps += 1;
            } else {
                calm_steps = 0;
            }
        }
        if calm_steps >= 2 && residual <= tol {
            break;
        }
    }
    let mut su = vec![0.0; d];
    s.matvec(&u, &mut su);
    let residual = su
        .iter()
        .zip(&u)
        .map(|(a, b)| (a - sigma * b).abs())
        .fold(0.0, f64::max);
    if iterations >= POWER_MAX_ITER || residual > tol {
        let tail = history.len().saturating_sub(10);
        return Err(Error::NonConvergence {
            what: "power iteration on S_n",
            iterations,
            history: history[tail..].to_vec(),
        });
    }
    let v: Vec<f64> = u.iter().rev().copied().collect();
    // M v = M J u = S u; measured separately so v is checked, not assumed.
    let mut mv = vec![0.0; d];
    a.matvec(&v, &mut mv);
    let residual = mv
        .iter()
        .zip(&u)
        .map(|(a, b)| (a - sigma * b).abs())
        .fold(0.0, f64::max);
    Ok(SingularTriple {
        n: 0,
        sigma,
        u,
        v,
        iterations,
        residual,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularSpectrum {
    pub n: usize,
    /// Descending.
    pub sigmas: Vec<f64>,
    /// Eigenvalues of `S_n`, descending by magnitude.
    pub s_eigs: Vec<f64>,
}

impl SingularSpectrum {
    pub fn count_above(&self, threshold: f64) -> usize {
        self.sigmas.iter().filter(|&&s| s > threshold).count()
    }

    /// Smallest gap between consecutive singular values.
    pub fn min_gap(&self) -> f64 {
        self.sigmas
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn product(&self) -> f64 {
        self.sigmas.iter().map(|s| s.ln()).sum::<f64>().exp()
    }
}

fn ceiling(allow_large: bool) -> usize {
    if allow_large {
        LARGE_SVD_CEILING
    } else {
        DENSE_SVD_CEILING
    }
}

/// Dense symmetric eigensolve of `S_n`.
pub fn all_singular_values(n: usize, allow_large: bool) -> Result<SingularSpectrum> {
    check_order(n)?;
    let max = ceiling(allow_large);
    if n > max {
        return Err(Error::SizeLimit { n, max });
    }
    let mut s_eigs = dense_symmetric_eigenvalues(&s_matrix(n)?)?;
    s_eigs.sort_by(by_magnitude_desc);
    let sigmas = s_eigs.iter().map(|e| e.abs()).collect();
    Ok(SingularSpectrum { n, sigmas, s_eigs })
}

/// Eigenvalues of a symmetric integer matrix through faer's blocked
/// tridiagonalization, which is several times faster than nalgebra's
/// from d ≈ 2000 on.
fn dense_symmetric_eigenvalues(a: &SparseIntMatrix) -> Result<Vec<f64>> {
    let d = a.dim();
    let mut m = faer::Mat::<f64>::zeros(d, d);
    for e in a.entries() {
        m[(e.row - 1, e.col - 1)] = e.value as f64;
    }
    m.self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|_| Error::NonConvergence {
            what: "dense symmetric eigenvalues",
            iterations: 0,
            history: Vec::new(),
        })
}

fn by_magnitude_desc(a: &f64, b: &f64) -> Ordering {
    b.abs().total_cmp(&a.abs())
}

/// Signs alternate `+, −, +, …` by descending magnitude, ending positive.
/// Magnitudes closer than `tol` make the order ambiguous and fail the check.
pub fn sign_alternation(eigs: &[f64], tol: f64) -> bool {
    let mut sorted = eigs.to_vec();
    sorted.sort_by(by_magnitude_desc);
    let distinct = sorted.windows(2).all(|w| w[0].abs() - w[1].abs() > tol);
    let alternates = sorted
        .iter()
        .enumerate()
        .all(|(i, &e)| if i % 2 == 0 { e > 0.0 } else { e < 0.0 });
    distinct && alternates && sorted.last().is_some_and(|&e| e > 0.0)
}

pub const ALTERNATION_TOL: f64 = 1e-9;

pub fn sign_alternation_check(n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::Domain("sign alternation is stated for n >= 2".into()));
    }
    Ok(sign_alternation(&all_singular_values(n, false)?.s_eigs, ALTERNATION_TOL))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SFacts {
    pub n: usize,
    pub det: BigInt,
    pub trace: i64,
    pub trace_of_square: i64,
    pub square_is_m_mt: bool,
}

/// Exact integer facts about `S_n`; any mismatch is an error.
pub fn s_facts_check(n: usize) -> Result<SFacts> {
    check_order(n)?;
    let m = mandelbrot_matrix(n)?;
    let s = s_matrix(n)?;
    let det = determinant(&s)?;
    let square = s.mul(&s)?;
    let facts = SFacts {
        n,
        det,
        trace: s.trace(),
        trace_of_square: square.trace(),
        square_is_m_mt: square == m.mul(&m.transpose())?,
    };
    let expected_det = BigInt::from(if n == 1 { 1 } else { -1 });
    let expected_sq = (1i64 << (n + 1)) - 3;
    if facts.det != expected_det
        || facts.trace != 1
        || facts.trace_of_square != expected_sq
        || !facts.square_is_m_mt
    {
        return Err(Error::StructureViolation(format!("S_{n} facts fail: {facts:?}")));
    }
    Ok(facts)
}

pub const JW_TOL: f64 = 1e-10;

/// Spectrum of `[[0, M], [Mᵀ, 0]]` is `±σ_i`.
pub fn jw_pairing_check(n: usize) -> Result<bool> {
    let spectrum = all_singular_values(n, false)?;
    let jw = jordan_wielandt(n)?.to_dense();
    let mut eigs: Vec<f64> = SymmetricEigen::new(jw).eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    let k = eigs.len();
    let symmetric = (0..k).all(|i| (eigs[i] + eigs[k - 1 - i]).abs() <= JW_TOL);
    let matches = eigs[..k / 2]
        .iter()
        .zip(&spectrum.sigmas)
        .all(|(e, s)| (e - s).abs() <= JW_TOL * s.max(1.0));
    Ok(symmetric && matches)
}
