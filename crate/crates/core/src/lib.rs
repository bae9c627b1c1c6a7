//! Mandelbrot matrices and their spectra.
//!
//! The family `M_n` of binary unit upper Hessenberg matrices whose
//! characteristic polynomials satisfy `C_{n+1} = λ C_n² − 1`, together with:
//!
//! * exact construction, determinants, inverses and digraph checks ([`matgen`]);
//! * recurrence evaluation and the Newton-computed Perron root ([`polyeval`]);
//! * the dominant eigenvector by an `O(d)` solve and by block recursion ([`perronvec`]);
//! * singular spectra through the symmetric `S_n = M_n J` ([`spectra`]);
//! * eigenvalue continuation along `T(ε)` and exact discriminants ([`homotopy`]);
//! * Matrix Market / DOT / JSON files ([`io`]) and CSV plot data ([`plotdata`]).

pub mod error;
pub mod exact;
pub mod homotopy;
pub mod io;
pub mod matgen;
pub mod perronvec;
pub mod plotdata;
pub mod polyeval;
pub mod spectra;

pub use error::{Error, Result};
