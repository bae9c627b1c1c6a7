//! Plot-data summaries against checked-in golden files.
//!
//! `MANDELMAT_UPDATE_GOLDEN=1 cargo test --test golden` rewrites them.

use std::fs;
use std::path::PathBuf;

use mandelmat::homotopy::{chained_figure_data, DEFAULT_STEPS, DEFAULT_TRACK_TOL};
use mandelmat::perronvec::{dominant_eigenvector, renormalize, Normalization};
use mandelmat::plotdata::{
    eigvec_csv, homotopy_csv, render_summaries, singvec_csv, spectrum_csv, summarize_csv,
    svals_csv,
};
use mandelmat::polyeval::spectrum_small;
use mandelmat::spectra::{all_singular_values, dominant_singular_triple, DEFAULT_TRIPLE_TOL};

fn check(name: &str, rendered: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.txt"));
    if std::env::var_os("MANDELMAT_UPDATE_GOLDEN").is_some() || !path.exists() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, rendered).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(rendered, expected, "golden mismatch for {name}");
}

#[test]
fn eigvec_summaries() {
    for n in [2, 3, 4, 12, 13, 14] {
        let v = renormalize(&dominant_eigenvector(n).unwrap(), Normalization::FirstEntryOne);
        let text = eigvec_csv(&v);
        let s = summarize_csv(&text, &["component", "log2_component"]);
        check(&format!("eigvec_n{n}"), &render_summaries(&format!("eigvec n={n}"), &s));
    }
}

#[test]
fn spectrum_summary() {
    let text = spectrum_csv(&spectrum_small(6, false).unwrap());
    let s = summarize_csv(&text, &["re", "im"]);
    check("spectrum_n6", &render_summaries("spectrum n=6", &s));
}

#[test]
fn singvec_summaries() {
    for n in [6, 7, 12] {
        let t = dominant_singular_triple(n, DEFAULT_TRIPLE_TOL).unwrap();
        let s = summarize_csv(&singvec_csv(&t), &["abs_u", "log2_abs_u"]);
        check(&format!("singvec_n{n}"), &render_summaries(&format!("singvec n={n}"), &s));
    }
}

#[test]
fn svals_summary() {
    let spectra: Vec<_> = (7..=10).map(|n| all_singular_values(n, false).unwrap()).collect();
    let s = summarize_csv(&svals_csv(&spectra), &["sigma", "log2_index"]);
    check("svals_n7_10", &render_summaries("svals n=7..10", &s));
}

#[test]
fn homotopy_summary() {
    let data = chained_figure_data(5, DEFAULT_STEPS, DEFAULT_TRACK_TOL).unwrap();
    let s = summarize_csv(&homotopy_csv(&data), &["abs_lambda", "lambda_squared", "bound"]);
    check("homotopy_nmax5", &render_summaries("homotopy n_max=5", &s));
}
