//! Hilbert polynomials and Bott numbers on `P^n`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monad::Monad;

/// A univariate polynomial in `m` with rational coefficients, lowest degree
/// first. Hilbert polynomials are integer-valued but the coefficients
/// need not be integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigRational>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigRational>) -> IntPoly {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> IntPoly {
        IntPoly::new(vec![c])
    }

    /// The polynomial `m`.
    pub fn m() -> IntPoly {
        IntPoly::from_i64(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, m: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * m + c)
    }

    pub fn eval_i64(&self, m: i64) -> BigRational {
        self.eval(&BigRational::from_integer(m.into()))
    }

    /// Value at an integer, if it is an integer.
    pub fn eval_int(&self, m: i64) -> Option<BigInt> {
        let v = self.eval_i64(m);
        v.is_integer().then(|| v.to_integer())
    }

    /// Checks integer values on `lo..=hi`.
    pub fn is_integer_valued_on(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|m| self.eval_i64(m).is_integer())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// `m ↦ P(-m)`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `m ↦ P(m + a)`.
    pub fn shift(&self, a: i64) -> IntPoly {
        let lin = IntPoly::from_i64(&[a, 1]);
        self.coeffs
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, c| acc.mul(&lin).add(&IntPoly::constant(c.clone())))
    }

    /// The binomial polynomial `C(m + a, k) = (m+a)(m+a-1)…(m+a-k+1) / k!`.
    pub fn binomial(a: i64, k: usize) -> IntPoly {
        let mut p = IntPoly::from_i64(&[1]);
        for i in 0..k as i64 {
            p = p.mul(&IntPoly::from_i64(&[a - i, 1]));
        }
        let mut fact = BigInt::one();
        for i in 1..=k {
            fact *= BigInt::from(i);
        }
        p.scale(&BigRational::new(BigInt::one(), fact))
    }

    /// Coefficients, lowest degree first, as strings (`"3"`, `"-1/2"`).
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_rational).collect()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical form: highest degree first, e.g. `3*m + 1`, `-m^2 + 1/2*m - 4`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => String::from("m"),
                _ => format!("m^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// `C(a, k)` for integers `a >= k >= 0`; zero when `k < 0` or `k > a`.
fn binom(a: i64, k: i64) -> Result<u64> {
    if k < 0 || a < k {
        return Ok(0);
    }
    let k = k.min(a - k);
    let mut r: u128 = 1;
    for i in 0..k as u128 {
        r = r
            .checked_mul(a as u128 - i)
            .ok_or_else(|| Error::OutOfRange(format!("C({a}, {k}) overflows")))?
            / (i + 1);
    }
    r.to_u64().ok_or_else(|| Error::OutOfRange(format!("C({a}, {k}) overflows")))
}

/// `h^q(P^n, Ω^p(t))` by Bott's formula.
pub fn bott_h(n: usize, p: usize, q: usize, t: i64) -> Result<u64> {
    if p > n || q > n {
        return Err(Error::OutOfRange(format!("p = {p}, q = {q} on P^{n}")));
    }
    let (n, p) = (n as i64, p as i64);
    if q == 0 && t > p {
        return Ok(binom(t + n - p, t)? * binom(t - 1, p)?);
    }
    if q as i64 == p && t == 0 {
        return Ok(1);
    }
    if q as i64 == n && t < p - n {
        return Ok(binom(-t + p, -t)? * binom(-t - 1, n - p)?);
    }
    Ok(0)
}

/// `P_{O(e)}(m) = C(m + e + n, n)` on `P^n`.
pub fn line_bundle_hilb(n: usize, e: i64) -> IntPoly {
    IntPoly::binomial(e + n as i64, n)
}

/// Newton interpolation through `values` at `t0, t0 + 1, …`.
///
/// Requires at least `degree_bound + 2` values so that the vanishing of
/// the differences of order `degree_bound + 1` is actually checked.
pub fn interpolate(values: &[i64], t0: i64, degree_bound: usize) -> Result<IntPoly> {
    let needed = degree_bound + 2;
    if values.len() < needed {
        return Err(Error::TooFewValues { needed, got: values.len() });
    }
    let mut table: Vec<Vec<BigInt>> = vec![values.iter().map(|&v| BigInt::from(v)).collect()];
    while table.last().is_some_and(|row| row.len() > 1) {
        let prev = table.last().unwrap();
        let next = prev.windows(2).map(|w| &w[1] - &w[0]).collect();
        table.push(next);
    }
    if table.iter().skip(degree_bound + 1).any(|row| row.iter().any(|v| !v.is_zero())) {
        return Err(Error::NotPolynomial(degree_bound));
    }
    let mut p = IntPoly::zero();
    for (k, row) in table.iter().enumerate().take(degree_bound + 1) {
        let c = BigRational::from_integer(row[0].clone());
        p = p.add(&IntPoly::binomial(-t0, k).scale(&c));
    }
    Ok(p)
}

/// `Σ_i (-1)^(i - pos) P_{C^i}(m)`: the Hilbert polynomial of the
/// cohomology sheaf whenever the complex is exact away from `pos`.
pub fn euler_poly(m: &Monad) -> IntPoly {
    let mut acc = IntPoly::zero();
    for i in m.indices() {
        for &e in m.term(i).unwrap().twists() {
            let p = line_bundle_hilb(m.ambient(), e);
            acc = if (i - m.cohomology_at()).rem_euclid(2) == 0 { acc.add(&p) } else { acc.sub(&p) };
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn display_forms() {
        assert_eq!(IntPoly::from_i64(&[1, 3]).to_string(), "3*m + 1");
        assert_eq!(IntPoly::from_i64(&[-1, 3]).to_string(), "3*m - 1");
        assert_eq!(IntPoly::from_i64(&[1, 1]).to_string(), "m + 1");
        assert_eq!(IntPoly::from_i64(&[0, -1, 0, 2]).to_string(), "2*m^3 - m");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(IntPoly::from_i64(&[-4]).to_string(), "-4");
        assert_eq!(IntPoly::binomial(2, 2).to_string(), "1/2*m^2 + 3/2*m + 1");
    }

    #[test]
    fn bott_examples() {
        for n in 0..=4 {
            for j in 0..=n {
                assert_eq!(bott_h(n, j, j, 0).unwrap(), 1);
                for i in 0..=n as i64 {
                    for q in 0..=n {
                        let v = bott_h(n, j, q, j as i64 - i).unwrap();
                        if q != j || i != j as i64 {
                            assert_eq!(v, 0, "n={n} j={j} q={q} i={i}");
                        }
                    }
                }
            }
        }
        assert_eq!(bott_h(2, 1, 0, 2).unwrap(), 3);
        assert!(bott_h(2, 3, 0, 0).is_err());
        assert!(bott_h(2, 0, 3, 0).is_err());
    }

    #[test]
    fn bott_serre_symmetry() {
        for n in 1..=4 {
            for p in 0..=n {
                for q in 0..=n {
                    for t in -8..=8 {
                        assert_eq!(bott_h(n, p, q, t).unwrap(), bott_h(n, n - p, n - q, -t).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn line_bundle_values() {
        assert_eq!(line_bundle_hilb(3, 0).eval_i64(1), r(4));
        assert_eq!(line_bundle_hilb(1, 0), IntPoly::from_i64(&[1, 1]));
        assert_eq!(line_bundle_hilb(3, -4).eval_i64(0), r(-1));
        assert_eq!(line_bundle_hilb(3, 0).eval_i64(0), r(1));
    }

    #[test]
    fn line_bundle_reflection_identity() {
        for n in 0..=4usize {
            for e in -5..=5 {
                let lhs = line_bundle_hilb(n, -(n as i64) - 1 - e);
                let mut rhs = line_bundle_hilb(n, e).reflect();
                if n % 2 == 1 {
                    rhs = rhs.neg();
                }
                assert_eq!(lhs, rhs, "n={n} e={e}");
            }
        }
    }

    #[test]
    fn line_bundle_matches_form_count() {
        for n in 0..=4usize {
            let p = line_bundle_hilb(n, 0);
            for m in 0..=8 {
                assert_eq!(p.eval_int(m).unwrap(), BigInt::from(crate::polymat::forms_dim(n, m)));
            }
        }
    }

    #[test]
    fn interpolation() {
        assert_eq!(interpolate(&[1, 4, 7], 0, 1).unwrap(), IntPoly::from_i64(&[1, 3]));
        assert_eq!(interpolate(&[5, 5, 5, 5], 3, 2).unwrap(), IntPoly::from_i64(&[5]));
        assert_eq!(interpolate(&[1, 2, 4], 0, 1), Err(Error::NotPolynomial(1)));
        assert!(matches!(interpolate(&[1, 2], 0, 1), Err(Error::TooFewValues { .. })));
        // 3m + 1 sampled from t0 = 7
        let vals: Vec<i64> = (7..12).map(|t| 3 * t + 1).collect();
        assert_eq!(interpolate(&vals, 7, 2).unwrap(), IntPoly::from_i64(&[1, 3]));
    }

    #[test]
    fn shift_and_reflect() {
        let p = IntPoly::from_i64(&[1, 2, 3]);
        for m in -4..=4 {
            assert_eq!(p.shift(2).eval_i64(m), p.eval_i64(m + 2));
            assert_eq!(p.reflect().eval_i64(m), p.eval_i64(-m));
        }
    }
}
