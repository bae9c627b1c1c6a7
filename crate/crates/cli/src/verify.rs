//! The `verify` table. Rows carry no timings, and each worker handles one
//! order with its results joined in order, so two runs print identical bytes.

use std::fmt::Write as _;
use std::thread;

use mandelmat::homotopy::{
    discriminant_report, sigma_bound_check, track_paths, DEFAULT_STEPS, DEFAULT_TRACK_TOL,
};
use mandelmat::matgen::{
    determinant, digraph, dimension, is_strongly_connected, mandelbrot_inverse,
    mandelbrot_matrix, period,
};
use mandelmat::perronvec::{
    cross_method_bound, dominant_eigenvector, eigenvector_recursive,
    eigenvector_recursive_precise, half_scaling_factor, leading_entry_pi_check,
    max_relative_deviation, middle_entry_check, tail_convergence, tail_limit_sequence,
};
use mandelmat::polyeval::{perron_root_default, periodic_orbit_check, spectrum_small};
use mandelmat::spectra::{
    all_singular_values, dominant_singular_triple, jw_pairing_check, s_facts_check,
    sign_alternation_check,
};
use num_bigint::BigInt;

/// Largest `--max-n` accepted without `--allow-large`.
pub const DEFAULT_CEILING: usize = 14;

const EXACT_CEILING: usize = 12;
const DENSE_CEILING: usize = 10;
const JW_CEILING: usize = 8;
const ORBIT_CEILING: usize = 6;
const TRACK_CEILING: usize = 4;
const DISC_CEILING: usize = 2;

pub struct Row {
    pub n: Option<usize>,
    pub module: &'static str,
    pub check: String,
    pub statistic: String,
    pub tolerance: String,
    pub pass: bool,
}

pub struct Report {
    pub rows: Vec<Row>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3}  {:<10} {:<36} {:<28} {:<12} result",
            "n", "module", "check", "statistic", "tolerance"
        );
        for r in &self.rows {
            let n = r.n.map_or_else(|| "-".to_string(), |n| n.to_string());
            let _ = writeln!(
                out,
                "{n:>3}  {:<10} {:<36} {:<28} {:<12} {}",
                r.module,
                r.check,
                r.statistic,
                r.tolerance,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        let passed = self.rows.iter().filter(|r| r.pass).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.rows.len());
        out
    }
}

struct Rows {
    n: usize,
    rows: Vec<Row>,
}

impl Rows {
    fn push(&mut self, module: &'static str, check: &str, statistic: String, tolerance: &str, pass: bool) {
        self.rows.push(Row {
            n: Some(self.n),
            module,
            check: check.to_string(),
            statistic,
            tolerance: tolerance.to_string(),
            pass,
        });
    }

    /// Records a library error as a failed row.
    fn fail(&mut self, module: &'static str, check: &str, err: impl std::fmt::Display) {
        self.push(module, check, format!("error: {err}"), "-", false);
    }
}

pub fn run(max_n: usize, tol: f64) -> Report {
    let per_n: Vec<Vec<Row>> = thread::scope(|s| {
        let handles: Vec<_> = (1..=max_n).map(|n| s.spawn(move || rows_for(n, tol))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut rows: Vec<Row> = per_n.into_iter().flatten().collect();
    rows.extend(pi_rows(max_n));
    Report { rows }
}

fn rows_for(n: usize, tol: f64) -> Vec<Row> {
    let mut r = Rows { n, rows: Vec::new() };
    matgen_rows(&mut r);
    polyeval_rows(&mut r);
    perronvec_rows(&mut r);
    spectra_rows(&mut r, tol);
    homotopy_rows(&mut r);
    r.rows
}

fn matgen_rows(r: &mut Rows) {
    let n = r.n;
    let k = n as i64;
    let (m, inv) = match (mandelbrot_matrix(n), mandelbrot_inverse(n)) {
        (Ok(m), Ok(inv)) => (m, inv),
        (Err(e), _) | (_, Err(e)) => return r.fail("matgen", "construction", e),
    };
    let nnz = m.nnz();
    r.push("matgen", "nnz = 2d-1", nnz.to_string(), "exact", nnz == 2 * dimension(n) - 1);
    r.push(
        "matgen",
        "norm_1 = norm_inf = n",
        format!("{}/{}", m.norm_1(), m.norm_inf()),
        "exact",
        m.norm_1() == k && m.norm_inf() == k,
    );
    let unit = inv.entries().iter().all(|e| e.value.abs() == 1);
    r.push(
        "matgen",
        "inverse entries +-1, norms 2n-1",
        format!("{}/{}", inv.norm_1(), inv.norm_inf()),
        "exact",
        unit && inv.norm_1() == 2 * k - 1 && inv.norm_inf() == 2 * k - 1,
    );
    if n <= EXACT_CEILING {
        match determinant(&m) {
            Ok(d) => r.push("matgen", "det M_n = 1", d.to_string(), "exact", d == BigInt::from(1)),
            Err(e) => r.fail("matgen", "det M_n = 1", e),
        }
        match digraph(n) {
            Ok(g) => {
                let p = period(&g).unwrap_or(0);
                let sc = is_strongly_connected(&g);
                r.push("matgen", "digraph strongly connected, period", format!("sc={sc} period={p}"), "period 1", sc && p == 1);
            }
            Err(e) => r.fail("matgen", "digraph", e),
        }
    }
}

fn polyeval_rows(r: &mut Rows) {
    let n = r.n;
    match perron_root_default(n) {
        Ok(p) => r.push(
            "polyeval",
            "Newton Perron root in [1,2)",
            format!("rho={:.14} it={}", p.rho, p.iterations),
            "converged",
            (1.0..2.0).contains(&p.rho),
        ),
        Err(e) => r.fail("polyeval", "Newton Perron root", e),
    }
    if n <= ORBIT_CEILING {
        match spectrum_small(n, false) {
            Ok(roots) => {
                let periodic = roots.iter().filter(|&&z| periodic_orbit_check(n, z, 1e-6)).count();
                r.push(
                    "polyeval",
                    "roots of C_n are periodic",
                    format!("{periodic}/{}", roots.len()),
                    "1e-6",
                    periodic == roots.len() && roots.len() == dimension(n),
                );
            }
            Err(e) => r.fail("polyeval", "roots of C_n", e),
        }
    }
}

fn perronvec_rows(r: &mut Rows) {
    let n = r.n;
    let (a, b) = match (dominant_eigenvector(n), eigenvector_recursive(n)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return r.fail("perronvec", "eigenvectors", e),
    };
    let dev = max_relative_deviation(&a, &b);
    let bound = cross_method_bound(n);
    r.push("perronvec", "solve vs recursive deviation", format!("{dev:.3e}"), &format!("{bound:.1e}"), dev <= bound);
    let d = dimension(n) as f64;
    match (a.residual(), b.residual()) {
        (Ok(ra), Ok(rb)) => {
            let res = ra.max(rb);
            r.push("perronvec", "residual |Mx-rho x|/|x|", format!("{res:.3e}"), &format!("{:.1e}", 1e-10 * d), res <= 1e-10 * d);
        }
        (Err(e), _) | (_, Err(e)) => r.fail("perronvec", "residual", e),
    }
    r.push("perronvec", "components positive", format!("{}", a.is_positive() && b.is_positive()), "-", a.is_positive() && b.is_positive());
    if n < 2 {
        return;
    }
    let precise = match eigenvector_recursive_precise(n) {
        Ok(v) => v,
        Err(e) => return r.fail("perronvec", "double-double eigenvector", e),
    };
    match middle_entry_check(&precise) {
        Ok(m) => r.push(
            "perronvec",
            "middle entry = 1/sqrt(rho), minimum",
            format!("{:.3e} argmin={}", m.relative_error, m.argmin),
            "1e-12",
            m.relative_error <= 1e-12 && m.is_minimum,
        ),
        Err(e) => r.fail("perronvec", "middle entry", e),
    }
    match half_scaling_factor(&precise) {
        Ok(h) => {
            let err = ((h.factor - h.expected) / h.expected).abs().max(h.max_deviation);
            r.push("perronvec", "half-scaling ratio = sqrt(rho)", format!("{err:.3e}"), "1e-10", err <= 1e-10);
        }
        Err(e) => r.fail("perronvec", "half-scaling ratio", e),
    }
    if n >= 10 {
        let expected = tail_limit_sequence(31);
        match tail_convergence(&a, 31) {
            Ok(t) => r.push(
                "perronvec",
                "bottom 31 entries round to A048896",
                format!("dev={:.3e}", t.max_deviation),
                "exact",
                t.matches && t.expected == expected,
            ),
            Err(e) => r.fail("perronvec", "tail sequence", e),
        }
    }
}

fn spectra_rows(r: &mut Rows, tol: f64) {
    let n = r.n;
    match dominant_singular_triple(n, tol) {
        Ok(t) => r.push(
            "spectra",
            "dominant triple residual",
            format!("{:.3e} it={}", t.residual, t.iterations),
            &format!("{tol:.1e}"),
            t.residual <= tol,
        ),
        Err(e) => r.fail("spectra", "dominant triple", e),
    }
    if n >= 2 {
        match sigma_bound_check(n) {
            Ok(s) => r.push(
                "spectra",
                "sigma_1 below sqrt(2.0193n-0.7914)",
                format!("slack={:.4}%", 100.0 * s.slack),
                "> 0",
                !s.violated,
            ),
            Err(e) => r.fail("spectra", "sigma bound", e),
        }
    }
    if n > DENSE_CEILING {
        return;
    }
    match s_facts_check(n) {
        Ok(f) => r.push(
            "spectra",
            "S_n det, trace, trace S^2, S^2=MM^T",
            format!("det={} tr={} tr2={}", f.det, f.trace, f.trace_of_square),
            "exact",
            true,
        ),
        Err(e) => r.fail("spectra", "S_n facts", e),
    }
    if n >= 2 {
        match sign_alternation_check(n) {
            Ok(ok) => r.push("spectra", "eig(S_n) signs alternate", ok.to_string(), "1e-9", ok),
            Err(e) => r.fail("spectra", "sign alternation", e),
        }
    }
    if n <= JW_CEILING {
        match jw_pairing_check(n) {
            Ok(ok) => r.push("spectra", "Jordan-Wielandt pairs = +-sigma", ok.to_string(), "1e-10", ok),
            Err(e) => r.fail("spectra", "Jordan-Wielandt pairing", e),
        }
    }
}

fn homotopy_rows(r: &mut Rows) {
    let n = r.n;
    if n <= TRACK_CEILING {
        let tracked = track_paths(n, DEFAULT_STEPS, DEFAULT_TRACK_TOL);
        let oracle = all_singular_values(n + 1, false);
        match (tracked, oracle) {
            (Ok(tr), Ok(sv)) => {
                let ends = tr.end_magnitudes();
                let worst = ends.iter().zip(&sv.sigmas).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let zero_end = tr.zero_path().converged_end.abs();
                r.push(
                    "homotopy",
                    "path ends = singular values",
                    format!("{worst:.3e} zero-end={zero_end:.4}"),
                    "1e-8",
                    ends.len() == sv.sigmas.len() && worst <= 1e-8 && zero_end < 1.0,
                );
            }
            (Err(e), _) | (_, Err(e)) => r.fail("homotopy", "path tracking", e),
        }
    }
    if n <= DISC_CEILING {
        match discriminant_report(n, false) {
            Ok(d) => r.push(
                "homotopy",
                "discriminant positive in eps",
                format!("deg={} even={}", d.discriminant.degree().unwrap_or(0), d.even_in_eps),
                "exact",
                d.positive,
            ),
            Err(e) => r.fail("homotopy", "discriminant", e),
        }
    }
}

/// Leading-entry formula error across consecutive orders from 6 up.
fn pi_rows(max_n: usize) -> Vec<Row> {
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    for n in 6..=max_n.min(15) {
        let row = match leading_entry_pi_check(n) {
            Ok(p) => {
                let ratio = prev.map(|q| p.relative_error / q);
                prev = Some(p.relative_error);
                Row {
                    n: Some(n),
                    module: "perronvec",
                    check: "x_1 pi / 2^n -> 1, error halves".into(),
                    statistic: match ratio {
                        Some(q) => format!("{:.3e} ratio={q:.3}", p.relative_error),
                        None => format!("{:.3e}", p.relative_error),
                    },
                    tolerance: "ratio <= 0.5".into(),
                    pass: ratio.is_none_or(|q| q <= 0.5),
                }
            }
            Err(e) => Row {
                n: Some(n),
                module: "perronvec",
                check: "leading-entry formula".into(),
                statistic: format!("error: {e}"),
                tolerance: "-".into(),
                pass: false,
            },
        };
        rows.push(row);
    }
    rows
}
