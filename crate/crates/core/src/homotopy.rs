//! Eigenvalue continuation along `T(ε)`, the bound on `σ_{1,n}`, and exact
//! characteristic polynomials and discriminants of `T(ε)`.
//!
//! `T(0)` has eigenvalues `{0} ∪ {±λ_i(S_n)}` and `T(1) = S_{n+1}`, so
//! following each eigenvalue from `ε = 0` to `ε = 1` connects the singular
//! values of `M_n` to those of `M_{n+1}`.

use nalgebra::linalg::{SymmetricEigen, SymmetricTridiagonal};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{all_coefficients_positive, bareiss_determinant, discriminant, ExactRing, IntPoly, Poly};
use crate::matgen::{check_order, dimension, homotopy_matrix, HomotopyMatrix};
use crate::spectra::{dominant_singular_triple, DEFAULT_TRIPLE_TOL};

pub const TRACK_CEILING: usize = 6;
pub const LARGE_TRACK_CEILING: usize = 8;
pub const DEFAULT_STEPS: usize = 256;
pub const DEFAULT_TRACK_TOL: f64 = 1e-10;
/// Halvings of one grid interval before a step is declared a collision.
const MAX_HALVINGS: u32 = 30;
const MAX_INVERSE_ITERS: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPath {
    pub n: usize,
    pub start_value: f64,
    /// `(ε, λ)`, strictly increasing in `ε`, starting at `ε = 0`.
    pub samples: Vec<(f64, f64)>,
    pub converged_end: f64,
}

impl EigenPath {
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, &(_, l)| m.max(l.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackResult {
    pub n: usize,
    /// Sorted by starting value.
    pub paths: Vec<EigenPath>,
    /// Smallest distance between two paths at a common sample point.
    pub min_separation: f64,
    /// Step halvings taken by the crossing guard.
    pub refinements: usize,
    /// Largest `‖T(ε)x − λx‖∞` over all accepted samples.
    pub max_residual: f64,
}

impl TrackResult {
    /// End magnitudes, descending.
    pub fn end_magnitudes(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.paths.iter().map(|p| p.converged_end.abs()).collect();
        m.sort_by(|a, b| b.total_cmp(a));
        m
    }

    /// The path that starts at `λ = 0`.
    pub fn zero_path(&self) -> &EigenPath {
        self.paths
            .iter()
            .min_by(|a, b| a.start_value.abs().total_cmp(&b.start_value.abs()))
            .expect("at least one path")
    }

    /// Distance from 1 of the closest end magnitude.
    pub fn gap_near_one(&self) -> f64 {
        self.paths
            .iter()
            .map(|p| (p.converged_end.abs() - 1.0).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn track_paths(n: usize, steps: usize, tol: f64) -> Result<TrackResult> {
    track_paths_with(n, steps, tol, false)
}

/// Predictor–corrector continuation of all `2^{n+1} − 1` eigenvalues.
///
/// Predictor: `λ' = xᵀ T' x`. Corrector: inverse iteration on the
/// tridiagonal form of `T(ε)` shifted by the predicted value, started from
/// the previous eigenvector. A step is halved when a correction moves more
/// than half the local gap, swaps the order of two paths, or loses the
/// previous eigenvector; too many halvings is a [`Error::PathCollision`].
pub fn track_paths_with(n: usize, steps: usize, tol: f64, allow_large: bool) -> Result<TrackResult> {
    check_order(n)?;
    let max = if allow_large {
        LARGE_TRACK_CEILING
    } else {
        TRACK_CEILING
    };
    if n > max {
        return Err(Error::SizeLimit { n, max });
    }
    if steps == 0 || !(tol > 0.0) {
        return Err(Error::Domain(format!("need steps >= 1 and tol > 0, got {steps}, {tol}")));
    }
    let t = homotopy_matrix(n)?;
    let (mut lams, mut xs) = initial_pairs(&t)?;
    let mut paths: Vec<EigenPath> = lams
        .iter()
        .map(|&l| EigenPath {
            n,
            start_value: l,
            samples: vec![(0.0, l)],
            converged_end: l,
        })
        .collect();
    let mut min_separation = min_sorted_gap(&lams);
    let mut refinements = 0;
    let mut max_residual = 0.0f64;

    for k in 0..steps {
        let target = (k + 1) as f64 / steps as f64;
        let mut eps = k as f64 / steps as f64;
        let mut h = target - eps;
        let mut halvings = 0;
        while eps < target {
            let next = if eps + h >= target { target } else { eps + h };
            match corrector_step(&t, eps, next, &lams, &xs, tol) {
                Ok(step) => {
                    eps = next;
                    lams = step.lams;
                    xs = step.xs;
                    max_residual = max_residual.max(step.max_residual);
                    min_separation = min_separation.min(min_sorted_gap(&lams));
                    for (p, &l) in paths.iter_mut().zip(&lams) {
                        p.samples.push((eps, l));
                    }
                }
                Err(culprit) => {
                    halvings += 1;
                    refinements += 1;
                    if halvings > MAX_HALVINGS {
                        return Err(Error::PathCollision {
                            path: culprit.0,
                            other: culprit.1,
                            eps,
                        });
                    }
                    h = (next - eps) / 2.0;
                }
            }
        }
    }
    for (p, &l) in paths.iter_mut().zip(&lams) {
        p.converged_end = l;
    }
    Ok(TrackResult {
        n,
        paths,
        min_separation,
        refinements,
        max_residual,
    })
}

/// Eigenpairs of `T(0)` from those of `S_n`: `[u; 0; ±u]/√2` and `e_{d+1}`,
/// sorted by eigenvalue.
fn initial_pairs(t: &HomotopyMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let d = dimension(t.order());
    let dim = t.dim();
    let s = crate::matgen::s_matrix(t.order())?.to_dense();
    let eig = SymmetricEigen::new(s);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim);
    for (i, &mu) in eig.eigenvalues.iter().enumerate() {
        let u = eig.eigenvectors.column(i);
        for sign in [1.0, -1.0] {
            let mut x = vec![0.0; dim];
            for k in 0..d {
                x[k] = r * u[k];
                x[d + 1 + k] = sign * r * u[k];
            }
            pairs.push((sign * mu, x));
        }
    }
    let mut e = vec![0.0; dim];
    e[d] = 1.0;
    pairs.push((0.0, e));
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

fn min_sorted_gap(sorted: &[f64]) -> f64 {
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

struct Step {
    lams: Vec<f64>,
    xs: Vec<Vec<f64>>,
    max_residual: f64,
}

/// One predictor–corrector step; on rejection returns the offending pair of
/// path indices.
fn corrector_step(
    t: &HomotopyMatrix,
    eps0: f64,
    eps1: f64,
    lams: &[f64],
    xs: &[Vec<f64>],
    tol: f64,
) -> std::result::Result<Step, (usize, usize)> {
    let count = lams.len();
    let h = eps1 - eps0;
    let pred: Vec<f64> = lams
        .iter()
        .zip(xs)
        .map(|(l, x)| l + h * t.derivative_form(x))
        .collect();
    let dense = t.assemble(eps1).expect("eps1 in [0, 1]");
    let (q, diag, off) = SymmetricTridiagonal::new(dense).unpack();
    let diag: Vec<f64> = diag.iter().copied().collect();
    let off: Vec<f64> = off.iter().copied().collect();
    let scale = diag.iter().chain(&off).fold(1.0f64, |m, v| m.max(v.abs()));

    let mut new_lams = Vec::with_capacity(count);
    let mut new_xs = Vec::with_capacity(count);
    let mut max_residual = 0.0f64;
    let mut tx = vec![0.0; t.dim()];
    for i in 0..count {
        let gap = (0..count)
            .filter(|&j| j != i)
            .map(|j| (pred[i] - pred[j]).abs())
            .fold(f64::INFINITY, f64::min);
        let neighbour = if i + 1 < count { i + 1 } else { i.saturating_sub(1) };

        let x_old = nalgebra::DVector::from_column_slice(&xs[i]);
        let mut y: Vec<f64> = (q.transpose() * &x_old).iter().copied().collect();
        let mut mu = pred[i];
        for _ in 0..MAX_INVERSE_ITERS {
            tridiagonal_solve(&diag, &off, pred[i], scale, &mut y);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= norm);
            mu = tridiagonal_rayleigh(&diag, &off, &y);
            if tridiagonal_residual(&diag, &off, mu, &y) <= 0.1 * tol {
                break;
            }
        }
        let mut x: Vec<f64> = (&q * nalgebra::DVector::from_column_slice(&y)).iter().copied().collect();
        let overlap: f64 = x.iter().zip(&xs[i]).map(|(a, b)| a * b).sum();
        if overlap < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        if (mu - pred[i]).abs() > 0.5 * gap || overlap.abs() < 0.5 {
            return Err((i, neighbour));
        }
        t.matvec(eps1, &x, &mut tx);
        let residual = tx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - mu * b).abs())
            .fold(0.0, f64::max);
        if residual > tol {
            return Err((i, neighbour));
        }
        max_residual = max_residual.max(residual);
        new_lams.push(mu);
        new_xs.push(x);
    }
    // Simple eigenvalues of a symmetric family keep their order.
    for i in 1..count {
        if new_lams[i] - new_lams[i - 1] <= 1e3 * f64::EPSILON * scale {
            return Err((i - 1, i));
        }
    }
    Ok(Step {
        lams: new_lams,
        xs: new_xs,
        max_residual,
    })
}

/// Solves `(A − σI) z = b` in place for symmetric tridiagonal `A`, Gaussian
/// elimination with partial pivoting. Exact zero pivots are nudged so that
/// solving at an eigenvalue still yields the eigenvector direction.
fn tridiagonal_solve(diag: &[f64], off: &[f64], shift: f64, scale: f64, b: &mut [f64]) {
    let n = diag.len();
    let tiny = f64::EPSILON * scale;
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut du: Vec<f64> = off.to_vec();
    let dl: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

fn tridiagonal_apply(diag: &[f64], off: &[f64], y: &[f64], i: usize) -> f64 {
    let mut v = diag[i] * y[i];
    if i > 0 {
        v += off[i - 1] * y[i - 1];
    }
    if i + 1 < y.len() {
        v += off[i] * y[i + 1];
    }
    v
}

fn tridiagonal_rayleigh(diag: &[f64], off: &[f64], y: &[f64]) -> f64 {
    (0..y.len()).map(|i| y[i] * tridiagonal_apply(diag, off, y, i)).sum()
}

fn tridiagonal_residual(diag: &[f64], off: &[f64], mu: f64, y: &[f64]) -> f64 {
    (0..y.len())
        .map(|i| (tridiagonal_apply(diag, off, y, i) - mu * y[i]).abs())
        .fold(0.0, f64::max)
}

pub const BOUND_SLOPE: f64 = 2.0193;
pub const BOUND_INTERCEPT: f64 = 0.7914;

/// Conjectured bound on `σ_{1,n}²`, linear in the order.
pub fn squared_bound(t: f64) -> f64 {
    BOUND_SLOPE * t - BOUND_INTERCEPT
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundSlack {
    pub n: usize,
    pub sigma: f64,
    pub bound: f64,
    /// `(bound − σ) / σ`.
    pub slack: f64,
    /// `(bound² − σ²) / σ²`.
    pub squared_slack: f64,
    pub violated: bool,
}

/// Compares `σ_{1,n}` with `√(2.0193 n − 0.7914)`. A negative slack is
/// reported through `violated`, not as an error.
pub fn sigma_bound_check(n: usize) -> Result<BoundSlack> {
    if n < 2 {
        return Err(Error::Domain("the bound is fitted for n >= 2".into()));
    }
    let sigma = dominant_singular_triple(n, DEFAULT_TRIPLE_TOL)?.sigma;
    let b2 = squared_bound(n as f64);
    let bound = b2.sqrt();
    let slack = (bound - sigma) / sigma;
    Ok(BoundSlack {
        n,
        sigma,
        bound,
        slack,
        squared_slack: (b2 - sigma * sigma) / (sigma * sigma),
        violated: slack < 0.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainRow {
    pub stage: usize,
    pub path_id: usize,
    /// `stage + ε`.
    pub t: f64,
    pub abs_lambda: f64,
    pub lambda_squared: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageSummary {
    pub n: usize,
    pub paths: usize,
    pub above_one_at_end: usize,
    /// Largest distance between this stage's starting values and the
    /// re-seeded set `{0} ∪ ±(previous ends)`; zero for the first stage.
    pub continuity_error: f64,
    pub refinements: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainedData {
    pub rows: Vec<ChainRow>,
    pub stages: Vec<StageSummary>,
    /// Samples with `λ² > 2.0193 t − 0.7914`.
    pub bound_violations: usize,
}

/// Stages `n = 1..n_max−1` tracked one after another.
pub fn chained_figure_data(n_max: usize, steps: usize, tol: f64) -> Result<ChainedData> {
    if n_max < 2 {
        return Err(Error::Domain("chained data needs n_max >= 2".into()));
    }
    let mut rows = Vec::new();
    let mut stages = Vec::new();
    let mut bound_violations = 0;
    let mut previous_ends: Option<Vec<f64>> = None;
    for stage in 1..n_max {
        let tr = track_paths(stage, steps, tol)?;
        let continuity_error = match &previous_ends {
            None => 0.0,
            Some(ends) => {
                let mut seeded: Vec<f64> = ends.iter().flat_map(|&e| [e, -e]).collect();
                seeded.push(0.0);
                seeded.sort_by(f64::total_cmp);
                let starts: Vec<f64> = tr.paths.iter().map(|p| p.start_value).collect();
                if seeded.len() != starts.len() {
                    f64::INFINITY
                } else {
                    seeded
                        .iter()
                        .zip(&starts)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                }
            }
        };
        for (id, p) in tr.paths.iter().enumerate() {
            for &(eps, l) in &p.samples {
                let t = stage as f64 + eps;
                let row = ChainRow {
                    stage,
                    path_id: id,
                    t,
                    abs_lambda: l.abs(),
                    lambda_squared: l * l,
                    bound: squared_bound(t),
                };
                if row.lambda_squared > row.bound {
                    bound_violations += 1;
                }
                rows.push(row);
            }
        }
        let ends: Vec<f64> = tr.paths.iter().map(|p| p.converged_end).collect();
        stages.push(StageSummary {
            n: stage,
            paths: tr.paths.len(),
            above_one_at_end: ends.iter().filter(|e| e.abs() > 1.0).count(),
            continuity_error,
            refinements: tr.refinements,
        });
        previous_ends = Some(ends);
    }
    Ok(ChainedData {
        rows,
        stages,
        bound_violations,
    })
}

/// Polynomial in `λ` whose coefficients are integer polynomials in `ε`.
pub type BivariatePoly = Poly<IntPoly>;

pub const CHAR_POLY_CEILING: usize = 3;
pub const DISCRIMINANT_CEILING: usize = 2;

/// `det(λI − T(ε))` by fraction-free elimination over `Z[ε][λ]`.
pub fn char_poly_t(n: usize) -> Result<BivariatePoly> {
    check_order(n)?;
    if n > CHAR_POLY_CEILING {
        return Err(Error::SizeLimit {
            n,
            max: CHAR_POLY_CEILING,
        });
    }
    let t = homotopy_matrix(n)?;
    let dim = t.dim();
    let int = |v: i64| BigInt::from(v);
    let matrix: Vec<Vec<BivariatePoly>> = (1..=dim)
        .map(|i| {
            (1..=dim)
                .map(|j| {
                    let eps_coeff = i64::from(t.eps_pattern().contains(&(i, j)));
                    let constant = IntPoly::new(vec![int(-t.base().get(i, j)), int(-eps_coeff)]);
                    let lambda = if i == j { IntPoly::one() } else { IntPoly::zero() };
                    Poly::new(vec![constant, lambda])
                })
                .collect()
        })
        .collect();
    Ok(bareiss_determinant(matrix))
}

/// Substitutes an integer `ε`.
pub fn specialize_eps(f: &BivariatePoly, eps: i64) -> IntPoly {
    let e = BigInt::from(eps);
    Poly::new(f.coeffs().iter().map(|c| c.eval(&e)).collect())
}

/// Floating-point value of an integer polynomial.
pub fn eval_int_poly(p: &IntPoly, x: f64) -> f64 {
    use num_traits::ToPrimitive;
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

/// `disc_λ F_n(λ, ε)` as an integer polynomial in `ε`.
pub fn discriminant_in_eps(n: usize, allow_long: bool) -> Result<IntPoly> {
    let max = if allow_long {
        CHAR_POLY_CEILING
    } else {
        DISCRIMINANT_CEILING
    };
    if n > max {
        return Err(Error::SizeLimit { n, max });
    }
    let f = char_poly_t(n)?;
    discriminant(&f).ok_or_else(|| Error::Domain("characteristic polynomial has degree 0".into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminantReport {
    pub n: usize,
    pub discriminant: IntPoly,
    /// Every odd power of `ε` has coefficient zero.
    pub even_in_eps: bool,
    /// Every coefficient in the `ε` basis, zeros included, is positive.
    pub literal_positive: bool,
    /// Coefficients strictly positive in the natural variable: `ε²` when
    /// the discriminant is even, `ε` otherwise.
    pub positive: bool,
}

/// Discriminant positivity. `T(−ε)` is similar to `T(ε)`, so the
/// discriminant is a polynomial `P(ε²)`; the check is that `P` has strictly
/// positive coefficients with no gaps.
pub fn discriminant_report(n: usize, allow_long: bool) -> Result<DiscriminantReport> {
    let disc = discriminant_in_eps(n, allow_long)?;
    let even_in_eps = disc
        .coeffs()
        .iter()
        .skip(1)
        .step_by(2)
        .all(ExactRing::is_zero);
    let positive = if even_in_eps {
        let reduced = IntPoly::new(disc.coeffs().iter().step_by(2).cloned().collect());
        all_coefficients_positive(&reduced)
    } else {
        all_coefficients_positive(&disc)
    };
    Ok(DiscriminantReport {
        n,
        literal_positive: all_coefficients_positive(&disc),
        discriminant: disc,
        even_in_eps,
        positive,
    })
}

pub fn discriminant_positivity(n: usize, allow_long: bool) -> Result<bool> {
    Ok(discriminant_report(n, allow_long)?.positive)
}

/// Dense eigenvalues of `T(ε)`, ascending. Test and diagnostics helper.
pub fn dense_eigenvalues(n: usize, eps: f64) -> Result<Vec<f64>> {
    let t = homotopy_matrix(n)?;
    let a: DMatrix<f64> = t.assemble(eps)?;
    let mut e: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgen::mandelbrot_matrix;
    use crate::spectra::all_singular_values;

    fn dense_svd(n: usize) -> Vec<f64> {
        let mut s: Vec<f64> = mandelbrot_matrix(n)
            .unwrap()
            .to_dense()
            .singular_values()
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    #[test]
    fn tridiagonal_solver_matches_dense() {
        let diag = [2.0, -1.0, 0.5, 3.0, 1.0];
        let off = [1.0, 4.0, -2.0, 0.5];
        let shift = 0.3;
        let mut a = DMatrix::zeros(5, 5);
        for i in 0..5 {
            a[(i, i)] = diag[i] - shift;
            if i < 4 {
                a[(i, i + 1)] = off[i];
                a[(i + 1, i)] = off[i];
            }
        }
        let b = [1.0, -2.0, 0.5, 3.0, 1.5];
        let mut x = b;
        tridiagonal_solve(&diag, &off, shift, 4.0, &mut x);
        let ax = &a * nalgebra::DVector::from_column_slice(&x);
        for i in 0..5 {
            assert!((ax[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn start_values_n1() {
        let tr = track_paths(1, 64, DEFAULT_TRACK_TOL).unwrap();
        let starts: Vec<f64> = tr.paths.iter().map(|p| p.start_value).collect();
        assert_eq!(starts.len(), 3);
        for (a, b) in starts.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoints_match_next_order() {
        for n in 1..=4 {
            let tr = track_paths(n, DEFAULT_STEPS, DEFAULT_TRACK_TOL).unwrap();
            let oracle = dense_svd(n + 1);
            let ends = tr.end_magnitudes();
            assert_eq!(ends.len(), oracle.len());
            for (a, b) in ends.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "n={n}: {a} vs {b}");
            }
            assert!(tr.max_residual <= DEFAULT_TRACK_TOL);
            let zero = tr.zero_path();
            assert!(zero.converged_end.abs() < 1.0);
            assert!(zero.max_abs() < 1.0);
            let above = ends.iter().filter(|&&m| m > 1.0).count();
            assert_eq!(above, 1 << n);
            assert_eq!(ends.len() - above, (1 << n) - 1);
        }
    }

    #[test]
    fn samples_increase_and_stay_apart() {
        let tr = track_paths(3, 128, DEFAULT_TRACK_TOL).unwrap();
        assert!(tr.min_separation > 0.0);
        for p in &tr.paths {
            assert!(p.samples.windows(2).all(|w| w[0].0 < w[1].0));
            assert_eq!(p.samples.last().unwrap().0, 1.0);
        }
    }

    #[test]
    fn hellmann_feynman_matches_finite_difference() {
        let n = 3;
        let t = homotopy_matrix(n).unwrap();
        let h = 1e-5;
        for eps in [0.1, 0.5, 0.9] {
            let eig = SymmetricEigen::new(t.assemble(eps).unwrap());
            let lo = dense_eigenvalues(n, eps - h).unwrap();
            let hi = dense_eigenvalues(n, eps + h).unwrap();
            for (i, &l) in eig.eigenvalues.iter().enumerate() {
                let x: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                let nearest = |v: &[f64]| {
                    *v.iter().min_by(|a, b| (*a - l).abs().total_cmp(&(*b - l).abs())).unwrap()
                };
                let fd = (nearest(&hi) - nearest(&lo)) / (2.0 * h);
                assert!((t.derivative_form(&x) - fd).abs() <= 1e-6, "eps={eps} l={l}");
            }
        }
    }

    #[test]
    fn tracking_rejects_bad_arguments() {
        assert!(matches!(track_paths(7, 16, 1e-10), Err(Error::SizeLimit { .. })));
        assert!(track_paths(2, 0, 1e-10).is_err());
        assert!(track_paths(2, 16, 0.0).is_err());
    }

    #[test]
    fn chained_bookkeeping() {
        let data = chained_figure_data(4, 128, DEFAULT_TRACK_TOL).unwrap();
        assert_eq!(data.stages.len(), 3);
        for w in data.stages.windows(2) {
            assert_eq!(w[1].paths, 2 * w[0].paths + 1);
            assert!(w[1].continuity_error < 1e-8);
        }
        for s in &data.stages {
            assert_eq!(s.above_one_at_end, 1 << s.n);
        }
        assert_eq!(data.bound_violations, 0);
    }

    #[test]
    fn bound_slack_small_orders() {
        for n in [2, 3] {
            let b = sigma_bound_check(n).unwrap();
            assert!(b.slack >= 0.0 && b.slack <= 1e-3, "{b:?}");
        }
        assert!(sigma_bound_check(1).is_err());
    }

    #[test]
    fn char_poly_n1() {
        let f = char_poly_t(1).unwrap();
        assert_eq!(f.degree(), Some(3));
        let at0 = specialize_eps(&f, 0);
        let expect = IntPoly::new([0, -1, 0, 1].map(BigInt::from).to_vec());
        assert_eq!(at0, expect);
        let at1 = specialize_eps(&f, 1);
        assert_eq!(at1.coeff(0), BigInt::from(1));
        for s in dense_svd(2) {
            let v = [eval_int_poly(&at1, s), eval_int_poly(&at1, -s)];
            assert!(v.iter().any(|r| r.abs() < 1e-10), "sigma {s} not a root magnitude");
        }
    }

    #[test]
    fn char_poly_n2_structure() {
        let f = char_poly_t(2).unwrap();
        assert_eq!(f.degree(), Some(7));
        let at0 = specialize_eps(&f, 0);
        // λ times an even polynomial
        for (k, c) in at0.coeffs().iter().enumerate() {
            if k % 2 == 0 {
                assert_eq!(*c, BigInt::from(0), "coefficient of λ^{k}");
            }
        }
        assert_eq!(specialize_eps(&f, 1).coeff(0), BigInt::from(1));
        let s3 = all_singular_values(3, false).unwrap();
        let at1 = specialize_eps(&f, 1);
        for e in s3.s_eigs {
            assert!(eval_int_poly(&at1, e).abs() < 1e-8);
        }
    }

    #[test]
    fn discriminants_positive() {
        // independent symbolic computation of disc_λ det(λI − T(ε)) for n = 1
        let r1 = discriminant_report(1, false).unwrap();
        assert_eq!(r1.discriminant, IntPoly::new([4, 0, 13, 0, 32].map(BigInt::from).to_vec()));
        assert!(r1.even_in_eps && r1.positive && !r1.literal_positive);
        let r2 = discriminant_report(2, false).unwrap();
        assert_eq!(r2.discriminant.degree(), Some(24));
        assert_eq!(r2.discriminant.coeff(0), BigInt::from(153664));
        assert_eq!(r2.discriminant.coeff(24), BigInt::from(512));
        assert!(discriminant_positivity(1, false).unwrap());
        assert!(discriminant_positivity(2, false).unwrap());
        assert!(matches!(discriminant_in_eps(3, false), Err(Error::SizeLimit { .. })));
    }
}
