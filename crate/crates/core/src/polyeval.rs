//! Characteristic and Mandelbrot polynomials, evaluated only through their
//! recurrences.
//!
//! `C_0 = 1`, `C_{k+1}(z) = z C_k(z)² − 1` is `det(zI − M_k)`, and
//! `p_0 = 0`, `p_{k+1}(z) = z p_k(z)² + 1` is the Mandelbrot polynomial, with
//! `C_k(z) = −p_{k+1}(−z)`. Expanded monomial coefficients grow doubly
//! exponentially, so this module never forms them.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use nalgebra::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matgen::{check_order, mandelbrot_matrix};

/// Default dense ceiling for [`spectrum_small`].
pub const DENSE_SPECTRUM_CEILING: usize = 8;
/// Ceiling with `allow_large`.
pub const LARGE_SPECTRUM_CEILING: usize = 12;

/// Default relative step tolerance for Newton: four unit roundoffs.
pub const NEWTON_TOL: f64 = 4.0 * (f64::EPSILON / 2.0);
pub const NEWTON_MAX_ITER: usize = 50;
/// Below this residual an increase in `|C_n|` means rounding noise has won.
const STAGNATION_RESIDUAL: f64 = 1e-10;

/// Value and derivative of a polynomial at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyEval<T> {
    pub value: T,
    pub derivative: T,
}

/// Scalars the recurrences run over (`f64`, `Complex<f64>`).
pub trait RecurrenceScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Zero + One
{
}

impl<T> RecurrenceScalar for T where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Zero + One
{
}

/// `C_n(z)` and `C_n'(z)` in `O(n)` operations.
pub fn eval_c<T: RecurrenceScalar>(n: usize, z: T) -> PolyEval<T> {
    let mut c = T::one();
    let mut dc = T::zero();
    for _ in 0..n {
        let two_c = c + c;
        dc = c * c + z * two_c * dc;
        c = z * c * c - T::one();
    }
    PolyEval {
        value: c,
        derivative: dc,
    }
}

/// `p_n(z)` and `p_n'(z)`.
pub fn eval_p<T: RecurrenceScalar>(n: usize, z: T) -> PolyEval<T> {
    let mut p = T::zero();
    let mut dp = T::zero();
    for _ in 0..n {
        let two_p = p + p;
        dp = p * p + z * two_p * dp;
        p = z * p * p + T::one();
    }
    PolyEval {
        value: p,
        derivative: dp,
    }
}

/// Asymptotic estimate `2 − (3/8) π² 4^{−n}` of the Perron root.
pub fn perron_seed(n: usize) -> f64 {
    2.0 - 0.375 * std::f64::consts::PI.powi(2) * 4f64.powi(-(n as i32))
}

/// Newton iteration on the `C_n` recurrence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronResult {
    pub n: usize,
    pub rho: f64,
    /// Newton updates applied.
    pub iterations: usize,
    /// `|C_n(rho)|`.
    pub residual: f64,
    pub seed: f64,
    /// Iterates, starting with the seed.
    pub history: Vec<f64>,
}

/// The Perron root `ρ_n` of `M_n`, Newton-seeded from [`perron_seed`].
pub fn perron_root(n: usize, tol: f64, max_iter: usize) -> Result<PerronResult> {
    check_order(n)?;
    newton_from(n, perron_seed(n), tol, max_iter)
}

/// `perron_root` with the default tolerance and cap.
pub fn perron_root_default(n: usize) -> Result<PerronResult> {
    perron_root(n, NEWTON_TOL, NEWTON_MAX_ITER)
}

/// Newton from an arbitrary seed. A poor seed (such as `2.0` for large `n`)
/// is reported as non-convergence rather than silently landing elsewhere.
pub fn newton_from(n: usize, seed: f64, tol: f64, max_iter: usize) -> Result<PerronResult> {
    check_order(n)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut rho = seed;
    let mut history = vec![seed];
    let mut prev_residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let PolyEval { value, derivative } = eval_c(n, rho);
        let residual = value.abs();
        if residual == 0.0 {
            converged = true;
            break;
        }
        if prev_residual < STAGNATION_RESIDUAL && residual > prev_residual {
            // Undo the last step: it made things worse.
            history.pop();
            rho = *history.last().expect("seed is never popped");
            iterations -= 1;
            converged = true;
            break;
        }
        prev_residual = residual;
        let step = value / derivative;
        if !step.is_finite() {
            break;
        }
        rho -= step;
        iterations += 1;
        history.push(rho);
        if step.abs() <= tol * rho.abs() {
            converged = true;
            break;
        }
    }
    if !converged || !(1.0..2.0).contains(&rho) {
        return Err(Error::NonConvergence {
            what: "Newton iteration for the Perron root",
            iterations,
            history,
        });
    }
    Ok(PerronResult {
        n,
        rho,
        iterations,
        residual: eval_c(n, rho).value.abs(),
        seed,
        history,
    })
}

/// All eigenvalues of `M_n` from a dense nonsymmetric (Schur) eigensolve,
/// sorted by real part then imaginary part.
pub fn spectrum_small(n: usize, allow_large: bool) -> Result<Vec<Complex<f64>>> {
    check_order(n)?;
    let max = if allow_large {
        LARGE_SPECTRUM_CEILING
    } else {
        DENSE_SPECTRUM_CEILING
    };
    if n > max {
        return Err(Error::SizeLimit { n, max });
    }
    let dense = mandelbrot_matrix(n)?.to_dense();
    let mut eigs: Vec<Complex<f64>> = dense.complex_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
    Ok(eigs)
}

/// Iterates `z ← z² + c` from `z = 0` with `c = −λ` for `n + 1` steps and
/// reports whether the orbit is back at the origin within `tol`.
pub fn periodic_orbit_check(n: usize, lambda: Complex<f64>, tol: f64) -> bool {
    let c = -lambda;
    let mut z = Complex::new(0.0, 0.0);
    for _ in 0..=n {
        z = z * z + c;
    }
    z.norm() <= tol
}

/// Smallest pairwise distance in a point set (brute force).
pub fn min_pairwise_distance(points: &[Complex<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const RHO7: f64 = 1.99977404869373;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        assert!(f(lo) * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn cubic(z: f64) -> f64 {
        z * z * z - 2.0 * z * z + z - 1.0
    }

    #[test]
    fn c_recurrence_base_values() {
        let e = eval_c(0, 3.7);
        assert_eq!((e.value, e.derivative), (1.0, 0.0));
        assert_eq!(eval_c(2, 1.0).value, -1.0);
        for z in [-1.3, 0.2, 1.7, 2.5] {
            assert!((eval_c(2, z).value - cubic(z)).abs() < 1e-12);
            assert!((eval_c(1, z).value - (z - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn p_recurrence_base_values() {
        assert_eq!(eval_p(0, 0.4).value, 0.0);
        assert_eq!(eval_p(2, 3.0).value, 4.0);
    }

    #[test]
    fn reflection_identity() {
        // deterministic spread over [-2, 2]
        for n in 1..=8 {
            for k in 0..20 {
                let z = -2.0 + 4.0 * ((k as f64 * 0.618_033_988_75) % 1.0);
                let c = eval_c(n, z).value;
                let p = eval_p(n + 1, -z).value;
                assert!((c + p).abs() <= 1e-12 * c.abs().max(1.0), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn seed_values() {
        assert!((perron_seed(7) - 1.99977410268247).abs() < 5e-15);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((perron_seed(1) - (2.0 - 3.0 * pi2 / 32.0)).abs() < 1e-15);
        for n in 1..24 {
            assert!(perron_seed(n) < perron_seed(n + 1));
            assert!(perron_seed(n) < 2.0);
        }
        // the correction drops below half an ulp of 2 eventually
        assert!(perron_seed(40) <= 2.0);
    }

    #[test]
    fn perron_root_n7() {
        let r = perron_root_default(7).unwrap();
        assert!((r.rho - RHO7).abs() < 5e-15);
        assert!(r.iterations <= 3);
        // two Newton steps already land on the converged value
        assert!((r.history[2] - r.rho).abs() <= 2.0 * f64::EPSILON);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn perron_root_n2_matches_bisection() {
        let oracle = bisect(cubic, 1.0, 2.0);
        let r = perron_root_default(2).unwrap();
        assert!((r.rho - oracle).abs() < 1e-14);
        assert!((r.rho - 1.754877666).abs() < 1e-9);
    }

    #[test]
    fn perron_root_n1_is_one() {
        assert_eq!(perron_root_default(1).unwrap().rho, 1.0);
    }

    #[test]
    fn newton_cap_reports_history() {
        match newton_from(7, perron_seed(7), NEWTON_TOL, 1) {
            Err(Error::NonConvergence { iterations, history, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(history.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
        assert!(perron_root(7, 0.0, 10).is_err());
        assert!(perron_root(0, NEWTON_TOL, 10).is_err());
    }

    #[test]
    fn spectrum_of_small_orders() {
        let s1 = spectrum_small(1, false).unwrap();
        assert_eq!(s1.len(), 1);
        assert!((s1[0] - Complex::new(1.0, 0.0)).norm() < 1e-14);

        let s2 = spectrum_small(2, false).unwrap();
        let real = bisect(cubic, 1.0, 2.0);
        // deflate the cubic: z^2 + (real - 2) z + (real^2 - 2 real + 1)
        let b = real - 2.0;
        let c = real * real - 2.0 * real + 1.0;
        let disc = b * b - 4.0 * c;
        assert!(disc < 0.0);
        let pair = Complex::new(-b / 2.0, (-disc).sqrt() / 2.0);
        let expect = [pair, pair.conj(), Complex::new(real, 0.0)];
        for e in expect {
            assert!(s2.iter().any(|z| (z - e).norm() < 1e-12), "{e} missing from {s2:?}");
        }
    }

    #[test]
    fn spectrum_respects_ceiling() {
        assert!(matches!(spectrum_small(9, false), Err(Error::SizeLimit { .. })));
        assert!(spectrum_small(0, false).is_err());
    }

    #[test]
    fn spectrum_conjugate_closed_with_one_dominant_root() {
        for n in [4, 6, 8] {
            let eigs = spectrum_small(n, false).unwrap();
            assert_eq!(eigs.len(), (1 << n) - 1);
            for z in &eigs {
                assert!(eigs.iter().any(|w| (w - z.conj()).norm() < 1e-8), "n={n} {z}");
            }
            let mut by_modulus = eigs.clone();
            by_modulus.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
            let top = by_modulus[0];
            assert!(top.im.abs() < 1e-10);
            assert!(by_modulus[1].norm() < top.norm());
            assert!((top.re - perron_root_default(n).unwrap().rho).abs() < 1e-8);
            assert!(min_pairwise_distance(&eigs) > 0.0);
        }
    }

    #[test]
    fn perron_root_bracketed_and_increasing() {
        let mut prev = 0.0;
        for n in 1..=26 {
            let r = perron_root_default(n).unwrap().rho;
            assert!(r > prev || n > 24, "n={n}");
            assert!(r < 2.0);
            // the seed overshoots by 1.37e-3 at n = 3, so the 1e-3 bracket starts at n = 4
            if n >= 4 {
                assert!(r > perron_seed(n) - 1e-3 && r < 2.0);
            }
            prev = r;
        }
    }

    #[test]
    fn seed_gap_at_n3() {
        let gap = perron_seed(3) - perron_root_default(3).unwrap().rho;
        assert!((gap - 1.370480182882287e-3).abs() < 1e-14);
    }

    #[test]
    fn seed_gap_shrinks_like_sixteen() {
        // compare only while the gap is far above rounding level
        let gap = |n: usize| (perron_root_default(n).unwrap().rho - perron_seed(n)).abs();
        for n in 3..=8 {
            let ratio = gap(n) / gap(n + 1);
            assert!(ratio >= 8.0, "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn every_root_of_c6_is_periodic() {
        let eigs = spectrum_small(6, false).unwrap();
        assert_eq!(eigs.len(), 63);
        for z in eigs {
            assert!(periodic_orbit_check(6, z, 1e-6), "{z}");
        }
    }

    #[test]
    fn orbit_check_controls() {
        assert!(periodic_orbit_check(1, Complex::new(1.0, 0.0), 1e-12));
        assert!(!periodic_orbit_check(6, Complex::new(0.3, 0.0), 1e-6));
    }
}
