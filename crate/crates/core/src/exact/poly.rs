use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

/// Dense univariate polynomial with exact rational coefficients, lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has an
/// empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactPoly {
    coeffs: Vec<Rational>,
}

impl ExactPoly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = ExactPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        Rational: From<T>,
    {
        Self::new(coeffs.into_iter().map(Rational::from).collect())
    }

    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Self::from_ints([0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * Integer::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * k)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `P(X + shift)`.
    pub fn translate(&self, shift: &Rational) -> Self {
        let lin = Self::new(vec![shift.clone(), Rational::from(1)]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// `P(k·X)`.
    pub fn dilate(&self, k: &Rational) -> Self {
        let mut pow = Rational::from(1);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(Rational::from(c * &pow));
            pow *= k;
        }
        Self::new(out)
    }

    /// Exact quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &ExactPoly) -> (ExactPoly, ExactPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); n - dd];
        for k in (0..n - dd).rev() {
            let q = Rational::from(&rem[k + dd] / &lead);
            if q != 0 {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= Rational::from(&q * dc);
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Multiplies by the lcm of the denominators and returns integer coefficients.
    pub fn to_integer_coeffs(&self) -> Vec<Integer> {
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        self.coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * Integer::from(&lcm / c.denom())))
            .collect()
    }

    /// Product of the given linear and quadratic factors, for constructing
    /// polynomials with a prescribed root structure.
    pub fn from_factors(factors: &[ExactPoly]) -> Self {
        factors.iter().fold(Self::one(), |acc, f| &acc * f)
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = Rational::from(c.abs_ref());
            match k {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "X")?,
                1 => write!(f, "{a}X")?,
                _ if a == 1 => write!(f, "X^{k}")?,
                _ => write!(f, "{a}X^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;

    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ExactPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;

    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ExactPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;

    fn neg(self) -> ExactPoly {
        ExactPoly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;

    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        if self.is_zero() || rhs.is_zero() {
            return ExactPoly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        ExactPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_reports_degree() {
        let p = ExactPoly::from_ints([1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ExactPoly::from_ints([0, 0]).is_zero());
        assert_eq!(ExactPoly::zero().degree(), None);
    }

    #[test]
    fn arithmetic_and_display() {
        let a = ExactPoly::from_ints([1, 1]);
        let b = ExactPoly::from_ints([-1, 1]);
        assert_eq!(&a * &b, ExactPoly::from_ints([-1, 0, 1]));
        assert_eq!(format!("{}", &a * &b), "X^2 - 1");
        assert_eq!(&(&a + &b) - &a, b);
        assert_eq!(ExactPoly::from_ints([5, 3, 1]).derivative(), ExactPoly::from_ints([3, 2]));
    }

    #[test]
    fn division_identity() {
        let a = ExactPoly::from_ints([3, -2, 0, 7, 1]);
        let b = ExactPoly::from_ints([1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn translate_and_dilate() {
        let p = ExactPoly::from_ints([0, 0, 1]);
        assert_eq!(p.translate(&Rational::from(1)), ExactPoly::from_ints([1, 2, 1]));
        assert_eq!(p.dilate(&Rational::from(3)), ExactPoly::from_ints([0, 0, 9]));
        assert_eq!(p.eval(&Rational::from((1, 2))), Rational::from((1, 4)));
    }

    #[test]
    fn integer_clearing() {
        let p = ExactPoly::new(vec![Rational::from((1, 2)), Rational::from((2, 3))]);
        assert_eq!(p.to_integer_coeffs(), vec![Integer::from(3), Integer::from(4)]);
    }
}
