use std::path::Path;

use clap::ValueEnum;
use mandelmat::homotopy::{chained_figure_data, DEFAULT_TRACK_TOL};
use mandelmat::io;
use mandelmat::perronvec::{dominant_eigenvector, renormalize};
use mandelmat::plotdata;
use mandelmat::polyeval::spectrum_small;
use mandelmat::spectra::{all_singular_values, dominant_singular_triple, DEFAULT_TRIPLE_TOL};

use crate::{destination, order_range, positive_tol, usage, ExportArgs, Outcome};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Dominant eigenvector components.
    Eigvec,
    /// |u| of the dominant singular triple.
    Singvec,
    /// Complex eigenvalues.
    Spectrum,
    /// All singular values for orders n..=max-n.
    Svals,
    /// Chained eigenvalue paths up to stage max-n, with bound column.
    Homotopy,
}

fn gnuplot_stub(kind: PlotKind, csv: &Path) -> String {
    let (x, y, extra) = match kind {
        PlotKind::Eigvec => (1, 3, "set xlabel 'index'\nset ylabel 'log2 component'"),
        PlotKind::Singvec => (1, 3, "set xlabel 'index'\nset ylabel 'log2 |u|'"),
        PlotKind::Spectrum => (1, 2, "set xlabel 'Re'\nset ylabel 'Im'\nset size ratio -1"),
        PlotKind::Svals => (3, 4, "set xlabel 'log2 index'\nset ylabel 'sigma'"),
        PlotKind::Homotopy => (3, 5, "set xlabel 't'\nset ylabel 'lambda^2'"),
    };
    let name = csv.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
    format!(
        "set datafile separator ','\n{extra}\nplot '{name}' using {x}:{y} skip 1 with points pointtype 7 pointsize 0.3 notitle\n"
    )
}

pub fn run(a: &ExportArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let (text, default_name) = match a.kind {
        PlotKind::Eigvec => {
            let v = renormalize(&dominant_eigenvector(a.n)?, a.normalization.into());
            (plotdata::eigvec_csv(&v), format!("eigvec_n{}.csv", a.n))
        }
        PlotKind::Singvec => {
            let t = dominant_singular_triple(a.n, positive_tol(a.tol, DEFAULT_TRIPLE_TOL)?)?;
            (plotdata::singvec_csv(&t), format!("singvec_n{}.csv", a.n))
        }
        PlotKind::Spectrum => {
            let eigs = spectrum_small(a.n, a.allow_large)?;
            (plotdata::spectrum_csv(&eigs), format!("spectrum_n{}.csv", a.n))
        }
        PlotKind::Svals => {
            let spectra: Vec<_> = order_range(a.n, a.max_n)?
                .map(|n| all_singular_values(n, a.allow_large))
                .collect::<mandelmat::Result<_>>()?;
            let hi = spectra.last().map_or(a.n, |s| s.n);
            (plotdata::svals_csv(&spectra), format!("svals_n{}_{hi}.csv", a.n))
        }
        PlotKind::Homotopy => {
            if a.steps == 0 {
                return Err(usage("--steps must be positive"));
            }
            let n_max = a.max_n.unwrap_or(a.n);
            let data = chained_figure_data(n_max, a.steps, positive_tol(a.tol, DEFAULT_TRACK_TOL)?)?;
            (plotdata::homotopy_csv(&data), format!("homotopy_nmax{n_max}.csv"))
        }
    };
    match destination(a.out.as_deref(), dir, &default_name) {
        Some(path) => {
            io::atomic_write(&path, text.as_bytes())?;
            println!("wrote {} ({} rows)", path.display(), text.lines().count().saturating_sub(1));
            if a.gnuplot {
                let gp = path.with_extension("gp");
                io::atomic_write(&gp, gnuplot_stub(a.kind, &path).as_bytes())?;
                println!("wrote {}", gp.display());
            }
        }
        None => {
            if a.gnuplot {
                return Err(usage("--gnuplot needs a file destination"));
            }
            print!("{text}");
        }
    }
    Ok(Outcome::Pass)
}
