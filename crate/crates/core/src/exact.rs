//! Exact integer and polynomial arithmetic: fraction-free determinants,
//! Sylvester resultants and discriminants.
//!
//! Polynomials are dense coefficient vectors, lowest degree first, over any
//! integral domain implementing [`ExactRing`]. Nesting `Poly<Poly<BigInt>>`
//! gives bivariate polynomials; Bareiss elimination then works unchanged
//! because every intermediate division is exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// An integral domain with exact division.
pub trait ExactRing: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `self / other` if `other` divides `self` exactly.
    fn div_exact(&self, other: &Self) -> Option<Self>;
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let q = self / other;
        if &(&q * other) == self {
            Some(q)
        } else {
            None
        }
    }
}

/// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: ExactRing> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let mut acc = R::zero();
            for _ in 0..k {
                acc = acc.plus(c);
            }
            out.push(acc);
        }
        Self::new(out)
    }

    /// Evaluates by Horner's rule in the coefficient ring.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.times(x).plus(c))
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }
}

impl<R: ExactRing> ExactRing for Poly<R> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn one() -> Self {
        Self::constant(R::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).plus(&other.coeff(k))).collect())
    }

    fn minus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).minus(&other.coeff(k))).collect())
    }

    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    fn negated(&self) -> Self {
        Self::new(self.coeffs.iter().map(R::negated).collect())
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        let lead = other.leading()?;
        let dv = other.coeffs.len() - 1;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < other.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![R::zero(); rem.len() - dv];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dv];
            if top.is_zero() {
                continue;
            }
            let q = top.div_exact(lead)?;
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&q.times(b));
            }
            quot[k] = q;
        }
        if rem.iter().all(R::is_zero) {
            Some(Self::new(quot))
        } else {
            None
        }
    }
}

impl<R: ExactRing + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<R: ExactRing> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Integer polynomial in one variable.
pub type IntPoly = Poly<BigInt>;

/// Determinant by fraction-free (Bareiss) elimination with row swaps on zero
/// pivots. The matrix must be square.
pub fn bareiss_determinant<R: ExactRing>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        let pivot = &pivot_row[k];
        for row in lower.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let num = pivot.times(&row[j]).minus(&factor.times(&pivot_row[j]));
                row[j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step is exact over an integral domain");
            }
            row[k] = R::zero();
        }
        prev = pivot.clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.negated()
    } else {
        det
    }
}

/// Sylvester matrix of `f` (degree m) and `g` (degree k), size m + k.
/// Rows hold coefficients from the leading one down.
pub fn sylvester_matrix<R: ExactRing>(f: &Poly<R>, g: &Poly<R>) -> Vec<Vec<R>> {
    let m = f.degree().unwrap_or(0);
    let k = g.degree().unwrap_or(0);
    let size = m + k;
    let mut s = vec![vec![R::zero(); size]; size];
    for i in 0..k {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            s[k + i][i + j] = c.clone();
        }
    }
    s
}

/// `Res(f, g)` as the Sylvester determinant.
pub fn resultant<R: ExactRing>(f: &Poly<R>, g: &Poly<R>) -> R {
    match (f.degree(), g.degree()) {
        (None, _) | (_, None) => R::zero(),
        (Some(0), Some(k)) => power(&f.coeff(0), k),
        (Some(m), Some(0)) => power(&g.coeff(0), m),
        _ => bareiss_determinant(sylvester_matrix(f, g)),
    }
}

fn power<R: ExactRing>(base: &R, exp: usize) -> R {
    (0..exp).fold(R::one(), |acc, _| acc.times(base))
}

/// `disc(f) = (-1)^{m(m-1)/2} Res(f, f') / lc(f)`.
pub fn discriminant<R: ExactRing>(f: &Poly<R>) -> Option<R> {
    let m = f.degree()?;
    if m == 0 {
        return None;
    }
    let res = resultant(f, &f.derivative());
    let res = if (m * (m - 1) / 2) % 2 == 1 {
        res.negated()
    } else {
        res
    };
    res.div_exact(f.leading()?)
}

/// True iff every coefficient of `p` is strictly positive and `p` is nonzero.
pub fn all_coefficients_positive(p: &IntPoly) -> bool {
    !p.coeffs().is_empty() && p.coeffs().iter().all(Signed::is_positive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        Poly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn big_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(bareiss_determinant(big_matrix(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(
            bareiss_determinant(big_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])),
            BigInt::from(-1)
        );
        assert_eq!(
            bareiss_determinant(big_matrix(&[&[1, 2], &[2, 4]])),
            BigInt::from(0)
        );
        assert_eq!(
            bareiss_determinant(big_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
    }

    #[test]
    fn poly_exact_division() {
        let a = ip(&[-1, 0, 1]);
        let b = ip(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(ip(&[-1, 1])));
        assert_eq!(a.div_exact(&ip(&[2, 1])), None);
        assert_eq!(ip(&[2, 4]).div_exact(&ip(&[2])), Some(ip(&[1, 2])));
        assert_eq!(ip(&[3, 4]).div_exact(&ip(&[2])), None);
    }

    #[test]
    fn derivative_and_eval() {
        let p = ip(&[1, -1, 2, -2, 1]);
        assert_eq!(p.derivative(), ip(&[-1, 4, -6, 4]));
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::from(1 - 2 + 8 - 16 + 16));
    }

    #[test]
    fn textbook_discriminants() {
        // x^2 + b x + c -> b^2 - 4c
        assert_eq!(discriminant(&ip(&[3, 5, 1])), Some(BigInt::from(25 - 12)));
        // x^3 + p x + q -> -4p^3 - 27q^2
        assert_eq!(discriminant(&ip(&[2, -3, 0, 1])), Some(BigInt::from(108 - 108)));
        assert_eq!(discriminant(&ip(&[1, 1, 0, 1])), Some(BigInt::from(-4 - 27)));
    }

    #[test]
    fn bivariate_discriminant_in_lambda() {
        // Outer variable λ, inner ε.
        let eps = IntPoly::x();
        let minus_eps = Poly::new(vec![eps.negated(), IntPoly::zero(), IntPoly::one()]);
        assert_eq!(discriminant(&minus_eps), Some(ip(&[0, 4])));
        let plus_eps = Poly::new(vec![eps.clone(), IntPoly::zero(), IntPoly::one()]);
        assert_eq!(discriminant(&plus_eps), Some(ip(&[0, -4])));
    }

    #[test]
    fn resultant_detects_common_root() {
        let f = ip(&[-2, 1]).times(&ip(&[1, 1]));
        let g = ip(&[-2, 1]).times(&ip(&[5, 0, 1]));
        assert_eq!(resultant(&f, &g), BigInt::from(0));
        // Res(x - a, x - b) = b - a up to sign convention: Res(x-1, x-4) = -3
        assert_eq!(resultant(&ip(&[-1, 1]), &ip(&[-4, 1])), BigInt::from(-3));
    }
}
