//! The dominant (Perron) eigenvector of `M_n`.
//!
//! Two independent constructions: back-substitution on rows `2..d` of
//! `M_n − ρI`, and the block recursion
//! `x_{k+1} = [ρ C_k(ρ) x_k; C_k(ρ); x_k]` with `ρ` fixed. Both put `1` in the
//! last slot. The remaining functions check structural facts about the
//! vector: the half-scaling, the middle entry, the integer-sequence limits of
//! the tail and head, and the growth of the leading entry.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::matgen::{check_order, dimension, mandelbrot_matrix};
use crate::polyeval::{eval_c, perron_root_default};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    LastEntryOne,
    FirstEntryOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigvecMethod {
    Solve,
    Recursive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigvecResult {
    pub n: usize,
    pub rho: f64,
    /// `components[i]` is `x_{i+1}`.
    pub components: Vec<f64>,
    pub normalization: Normalization,
    pub method: EigvecMethod,
}

impl EigvecResult {
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// 1-based component access.
    pub fn x(&self, j: usize) -> f64 {
        self.components[j - 1]
    }

    pub fn is_positive(&self) -> bool {
        self.components.iter().all(|&c| c > 0.0)
    }

    /// `‖M x − ρ x‖∞ / ‖x‖∞`.
    pub fn residual(&self) -> Result<f64> {
        let m = mandelbrot_matrix(self.n)?;
        let mut y = vec![0.0; self.dim()];
        m.matvec(&self.components, &mut y);
        let num = y
            .iter()
            .zip(&self.components)
            .map(|(yi, xi)| (yi - self.rho * xi).abs())
            .fold(0.0, f64::max);
        Ok(num / inf_norm(&self.components))
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Back-substitution: `x_d = 1`, then row `i` of `(M − ρI) x = 0` gives
/// `x_{i−1} = ρ x_i − Σ_{j ≥ i} M_{ij} x_j` for `i = d, …, 2`.
pub fn eigenvector_solve(n: usize, rho: f64) -> Result<EigvecResult> {
    check_order(n)?;
    let m = mandelbrot_matrix(n)?;
    let d = m.dim();
    let mut x = vec![0.0; d];
    x[d - 1] = 1.0;
    for i in (2..=d).rev() {
        let mut acc = rho * x[i - 1];
        let mut pivot = 0;
        for e in m.row(i) {
            if e.col >= i {
                acc -= e.value as f64 * x[e.col - 1];
            } else if e.col == i - 1 {
                pivot = e.value;
            }
        }
        assert_eq!(pivot, 1, "M_{n} lost its unit subdiagonal at row {i}");
        x[i - 2] = acc;
    }
    Ok(EigvecResult {
        n,
        rho,
        components: x,
        normalization: Normalization::LastEntryOne,
        method: EigvecMethod::Solve,
    })
}

/// Solve-based eigenvector at the Perron root.
pub fn dominant_eigenvector(n: usize) -> Result<EigvecResult> {
    let rho = perron_root_default(n)?.rho;
    eigenvector_solve(n, rho)
}

/// Block recursion at the Perron root of `M_n`.
pub fn eigenvector_recursive(n: usize) -> Result<EigvecResult> {
    check_order(n)?;
    let rho = perron_root_default(n)?.rho;
    eigenvector_recursive_at(n, rho)
}

/// Block recursion at an arbitrary `ρ`. Rows `2..d` of `(M_n − ρI) x = 0`
/// hold for any `ρ`; only row 1 needs `C_n(ρ) = 0`.
pub fn eigenvector_recursive_at(n: usize, rho: f64) -> Result<EigvecResult> {
    check_order(n)?;
    let mut x = Vec::with_capacity(dimension(n));
    x.push(1.0);
    let mut c = 1.0;
    for _ in 1..n {
        c = rho * c * c - 1.0;
        let head = rho * c;
        let mut next = Vec::with_capacity(2 * x.len() + 1);
        next.extend(x.iter().map(|v| head * v));
        next.push(c);
        next.extend_from_slice(&x);
        x = next;
    }
    Ok(EigvecResult {
        n,
        rho,
        components: x,
        normalization: Normalization::LastEntryOne,
        method: EigvecMethod::Recursive,
    })
}

/// Perron root Newton-polished in double-double arithmetic.
pub fn refined_rho(n: usize) -> Result<TwoFloat> {
    let mut rho = TwoFloat::from(perron_root_default(n)?.rho);
    for _ in 0..4 {
        let e = eval_c(n, rho);
        if e.value == TwoFloat::from(0.0) {
            break;
        }
        rho -= e.value / e.derivative;
    }
    Ok(rho)
}

/// Block recursion carried out in double-double at the polished root, then
/// rounded. An f64 root perturbs `C_k(ρ)` by roughly `4^k` ulps, which shows
/// up in the middle entry and the half-scaling ratio from n ≈ 10 on.
pub fn eigenvector_recursive_precise(n: usize) -> Result<EigvecResult> {
    check_order(n)?;
    let rho = refined_rho(n)?;
    let one = TwoFloat::from(1.0);
    let mut x = vec![one];
    let mut c = one;
    for _ in 1..n {
        c = rho * c * c - one;
        let head = rho * c;
        let mut next = Vec::with_capacity(2 * x.len() + 1);
        next.extend(x.iter().map(|&v| head * v));
        next.push(c);
        next.extend_from_slice(&x);
        x = next;
    }
    Ok(EigvecResult {
        n,
        rho: rho.hi(),
        components: x.iter().map(|v| v.hi()).collect(),
        normalization: Normalization::LastEntryOne,
        method: EigvecMethod::Recursive,
    })
}

pub fn renormalize(v: &EigvecResult, target: Normalization) -> EigvecResult {
    let pivot = match target {
        Normalization::LastEntryOne => *v.components.last().expect("non-empty"),
        Normalization::FirstEntryOne => v.components[0],
    };
    let components = v.components.iter().map(|c| c / pivot).collect();
    EigvecResult {
        components,
        normalization: target,
        ..v.clone()
    }
}

/// `max_j |a_j − b_j| / |b_j|`.
pub fn max_relative_deviation(a: &EigvecResult, b: &EigvecResult) -> f64 {
    a.components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max)
}

/// Allowed solve-vs-recursive deviation: five times `8·10⁻¹⁸ d²`.
pub fn cross_method_bound(n: usize) -> f64 {
    let d = dimension(n) as f64;
    5.0 * 8e-18 * d * d
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfScaling {
    /// Least-squares ratio `x_j / x_{j+h}`, `h = 2^{n−1}`.
    pub factor: f64,
    /// `max_j |x_j / x_{j+h} − factor| / factor`.
    pub max_deviation: f64,
    pub expected: f64,
}

/// Relative spread tolerated by [`half_scaling_factor`].
pub const HALF_SCALING_TOL: f64 = 1e-10;

/// Ratio between the upper half `x_1..x_{h−1}` and the lower half
/// `x_{h+1}..x_{d}` with `h = 2^{n−1}`. The recursion makes it `ρ C_{n−1}(ρ)`,
/// which equals `√ρ` at the Perron root.
pub fn half_scaling_factor(v: &EigvecResult) -> Result<HalfScaling> {
    if v.n < 2 {
        return Err(Error::Domain("half-scaling needs n >= 2".into()));
    }
    let h = 1usize << (v.n - 1);
    let (mut num, mut den) = (0.0, 0.0);
    for j in 1..h {
        let (a, b) = (v.x(j), v.x(j + h));
        num += a * b;
        den += b * b;
    }
    let factor = num / den;
    let max_deviation = (1..h)
        .map(|j| (v.x(j) / v.x(j + h) - factor).abs() / factor)
        .fold(0.0, f64::max);
    if max_deviation > HALF_SCALING_TOL {
        return Err(Error::StructureViolation(format!(
            "half ratios spread by {max_deviation:e} around {factor}"
        )));
    }
    Ok(HalfScaling {
        factor,
        max_deviation,
        expected: v.rho.sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MiddleEntry {
    pub value: f64,
    pub expected: f64,
    pub relative_error: f64,
    /// Index (1-based) of the smallest component.
    pub argmin: usize,
    pub is_minimum: bool,
}

/// Component `x_{2^{n−1}} = C_{n−1}(ρ)` against `1/√ρ`, and whether it is
/// the smallest entry.
pub fn middle_entry_check(v: &EigvecResult) -> Result<MiddleEntry> {
    if v.n < 2 {
        return Err(Error::Domain("middle entry needs n >= 2".into()));
    }
    let v = renormalize(v, Normalization::LastEntryOne);
    let mid = 1usize << (v.n - 1);
    let value = v.x(mid);
    let expected = 1.0 / v.rho.sqrt();
    let argmin = v
        .components
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i + 1)
        .expect("non-empty");
    Ok(MiddleEntry {
        value,
        expected,
        relative_error: ((value - expected) / expected).abs(),
        argmin,
        is_minimum: v.components.iter().all(|&c| c >= value),
    })
}

/// Limit of the eigenvector tail as `ρ → 2`: `w_1 = [1]`,
/// `w_{k+1} = [2 w_k; 1; w_k]`, last `m` entries read bottom-up.
pub fn tail_limit_sequence(m: usize) -> Vec<u64> {
    let mut w: Vec<u64> = vec![1];
    while w.len() < m {
        let mut next: Vec<u64> = w.iter().map(|v| 2 * v).collect();
        next.push(1);
        next.extend_from_slice(&w);
        w = next;
    }
    w.iter().rev().take(m).copied().collect()
}

/// Gould's sequence `2^{popcount(j−1)}`, `j = 1..=m`.
pub fn gould_sequence(m: usize) -> Vec<u64> {
    (0..m as u64).map(|j| 1u64 << j.count_ones()).collect()
}

/// Rounding window for integer-sequence matches.
pub const ROUNDING_TOL: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceMatch {
    pub observed: Vec<f64>,
    pub expected: Vec<u64>,
    /// Largest distance from an observed value to its nearest integer.
    pub max_deviation: f64,
    /// Rounded values equal `expected` and `max_deviation < 0.01`.
    pub matches: bool,
}

fn compare_to_integers(observed: Vec<f64>, expected: Vec<u64>) -> SequenceMatch {
    let max_deviation = observed
        .iter()
        .map(|x| (x - x.round()).abs())
        .fold(0.0, f64::max);
    let rounded_equal = observed.len() == expected.len()
        && observed
            .iter()
            .zip(&expected)
            .all(|(x, &e)| x.round() == e as f64);
    SequenceMatch {
        observed,
        expected,
        max_deviation,
        matches: rounded_equal && max_deviation < ROUNDING_TOL,
    }
}

/// Bottom `m` entries (last entry one), bottom-up, against
/// [`tail_limit_sequence`].
pub fn tail_convergence(v: &EigvecResult, m: usize) -> Result<SequenceMatch> {
    if m == 0 || m > v.dim() {
        return Err(Error::Domain(format!("tail length {m} outside 1..={}", v.dim())));
    }
    let v = renormalize(v, Normalization::LastEntryOne);
    let observed = v.components.iter().rev().take(m).copied().collect();
    Ok(compare_to_integers(observed, tail_limit_sequence(m)))
}

/// [`tail_convergence`] on the solve-based eigenvector of `M_n`.
pub fn tail_convergence_check(n: usize, m: usize) -> Result<SequenceMatch> {
    if n >= 1 && m > 1usize << (n - 1) {
        return Err(Error::Domain(format!("tail length {m} exceeds 2^(n-1) for n = {n}")));
    }
    tail_convergence(&dominant_eigenvector(n)?, m)
}

/// Topmost `m` entries reversed and divided by `x_m`, against Gould's
/// sequence. Scale-free: no absolute power-of-two factor is assumed.
pub fn gould_head(v: &EigvecResult, m: usize) -> Result<SequenceMatch> {
    if m == 0 || !m.is_power_of_two() || m > v.dim() {
        return Err(Error::Domain(format!("head length {m} must be a power of two <= {}", v.dim())));
    }
    let scale = v.x(m);
    let observed = (1..=m).rev().map(|j| v.x(j) / scale).collect();
    Ok(compare_to_integers(observed, gould_sequence(m)))
}

pub fn gould_head_check(n: usize, m: usize) -> Result<bool> {
    if n >= 1 && m > 1usize << (n - 1) {
        return Err(Error::Domain(format!("head length {m} exceeds 2^(n-1) for n = {n}")));
    }
    Ok(gould_head(&eigenvector_recursive(n)?, m)?.matches)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PiCheck {
    pub n: usize,
    /// Leading entry under last-entry-one normalization.
    pub x1: f64,
    /// `|x_1 π / 2^n − 1|`.
    pub relative_error: f64,
}

/// Leading entry `x_1 = ρ^{n−1} Π_{k<n} C_k(ρ)` against `2^n/π`.
///
/// Evaluated in double-double: `C_k` amplifies an error in `ρ` by roughly
/// `4^k`, so in plain `f64` the relative error bottoms out near `10⁻⁸` by
/// `n ≈ 14` and hides the true `4^{−n}` decay. `ρ` is refined by Newton in
/// the same arithmetic.
pub fn leading_entry_pi_check(n: usize) -> Result<PiCheck> {
    check_order(n)?;
    if n < 2 {
        return Err(Error::Domain("leading-entry check needs n >= 2".into()));
    }
    let rho = refined_rho(n)?;
    let one = TwoFloat::from(1.0);
    let mut c = one;
    let mut x1 = one;
    for _ in 1..n {
        c = rho * c * c - one;
        x1 *= rho * c;
    }
    let scaled = x1 * twofloat::consts::PI / TwoFloat::from(2f64.powi(n as i32));
    let err = scaled - one;
    Ok(PiCheck {
        n,
        x1: x1.hi(),
        relative_error: err.hi().abs(),
    })
}

/// Row 1 of `(M_n − ρI) x`, which the recursion leaves unused:
/// returns `|C_n(ρ) + Σ_j M_{1j} x_j − ρ x_1| / (ρ x_1)`.
pub fn first_row_balance(v: &EigvecResult) -> Result<f64> {
    let m = mandelbrot_matrix(v.n)?;
    let v = renormalize(v, Normalization::LastEntryOne);
    let row: f64 = m.row(1).iter().map(|e| e.value as f64 * v.x(e.col)).sum();
    let c = eval_c(v.n, v.rho).value;
    let lhs = c + row;
    let rhs = v.rho * v.x(1);
    Ok((lhs - rhs).abs() / rhs.abs())
}
