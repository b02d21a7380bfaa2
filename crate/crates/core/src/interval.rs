//! Outward-rounded real intervals over MPFR floats.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper endpoint
//! toward +∞, so the true result of the operation applied to any points of the
//! operands lies in the returned interval.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, AssignRound, MulAssignRound};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Interval {
    /// Builds `[lo, hi]`; the endpoints must be ordered and not NaN.
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        debug_assert!(lo <= hi, "unordered interval {lo} > {hi}");
        Interval { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, v, Round::Down).0,
            hi: Float::with_val_round(prec, v, Round::Up).0,
        }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, v, Round::Down).0,
            hi: Float::with_val_round(prec, v, Round::Up).0,
        }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, v, Round::Down).0,
            hi: Float::with_val_round(prec, v, Round::Up).0,
        }
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, v, Round::Down).0,
            hi: Float::with_val_round(prec, v, Round::Up).0,
        }
    }

    /// Encloses a decimal literal such as `"0.021"`.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        let lo = float_from_decimal(s, prec, Round::Down)?;
        let hi = float_from_decimal(s, prec, Round::Up)?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Parse(format!("{s:?} is not a finite number")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn pi(prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, Constant::Pi, Round::Down).0,
            hi: Float::with_val_round(prec, Constant::Pi, Round::Up).0,
        }
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        Self::one(prec).exp()
    }

    /// The constant c = 2π²/3 appearing in w(n).
    pub fn c(prec: u32) -> Self {
        let pi = Self::pi(prec);
        pi.sqr().mul_i64(2).div_i64(3)
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn into_bounds(self) -> (Float, Float) {
        (self.lo, self.hi)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Re-rounds the endpoints outward to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, &self.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi, Round::Up).0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lo >= 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && self.hi >= *x
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi >= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo <= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        Interval { lo: lo.clone(), hi: hi.clone() }
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    /// Width divided by the smallest magnitude in the interval (∞ if it contains 0).
    pub fn rel_width(&self) -> f64 {
        let mig = self.mig();
        if mig.is_zero() {
            return f64::INFINITY;
        }
        let w = self.width();
        Float::with_val_round(self.prec(), &w / &mig, Round::Up).0.to_f64()
    }

    pub fn mid(&self) -> Float {
        let prec = self.prec();
        let sum = Float::with_val(prec + 1, &self.lo + &self.hi);
        Float::with_val(prec, sum / 2u32)
    }

    pub fn midpoint(&self) -> Interval {
        Interval::point(self.mid())
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Float {
        let a = self.lo.clone().abs();
        let b = self.hi.clone().abs();
        if a > b { a } else { b }
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Float {
        if self.contains_zero() {
            Float::new(self.prec())
        } else if self.lo > 0 {
            self.lo.clone()
        } else {
            self.hi.clone().abs()
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            Interval { lo: Float::new(self.prec()), hi: self.mag() }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo.clone(), hi: m.clone() },
            Interval { lo: m, hi: self.hi.clone() },
        )
    }

    pub fn max(&self, other: &Interval) -> Interval {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        Interval { lo: lo.clone(), hi: hi.clone() }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        let lo = if self.lo <= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        Interval { lo: lo.clone(), hi: hi.clone() }
    }

    pub fn mul_i64(&self, k: i64) -> Interval {
        self * &Interval::from_i64(k, self.prec())
    }

    pub fn div_i64(&self, k: i64) -> Interval {
        self.div(&Interval::from_i64(k, self.prec())).expect("nonzero integer divisor")
    }

    pub fn sqr(&self) -> Interval {
        let prec = self.prec();
        let a = self.abs();
        Interval {
            lo: Float::with_val_round(prec, a.lo.square_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, a.hi.square_ref(), Round::Up).0,
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::Domain(format!("reciprocal of {self:?} containing zero")));
        }
        let prec = self.prec();
        Ok(Interval {
            lo: Float::with_val_round(prec, self.hi.recip_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, self.lo.recip_ref(), Round::Up).0,
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::Domain(format!("division by {other:?} containing zero")));
        }
        let prec = self.prec().max(other.prec());
        let cands = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let l = Float::with_val_round(prec, a / b, Round::Down).0;
            let h = Float::with_val_round(prec, a / b, Round::Up).0;
            if lo.as_ref().map_or(true, |x| l < *x) {
                lo = Some(l);
            }
            if hi.as_ref().map_or(true, |x| h > *x) {
                hi = Some(h);
            }
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0 {
            return Err(Error::Domain(format!("sqrt of {self:?} with negative part")));
        }
        let prec = self.prec();
        Ok(Interval {
            lo: Float::with_val_round(prec, self.lo.sqrt_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, self.hi.sqrt_ref(), Round::Up).0,
        })
    }

    pub fn exp(&self) -> Interval {
        let prec = self.prec();
        Interval {
            lo: Float::with_val_round(prec, self.lo.exp_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, self.hi.exp_ref(), Round::Up).0,
        }
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0 {
            return Err(Error::Domain(format!("log of {self:?} with nonpositive part")));
        }
        let prec = self.prec();
        Ok(Interval {
            lo: Float::with_val_round(prec, self.lo.ln_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, self.hi.ln_ref(), Round::Up).0,
        })
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::one(self.prec());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// `self^p` for a positive base and real exponent interval.
    pub fn pow(&self, p: &Interval) -> Result<Interval> {
        Ok((&self.ln()? * p).exp())
    }

    /// `self += a * b`, reusing `scratch` for the intermediate endpoint products.
    pub fn mul_add_assign(&mut self, a: &Interval, b: &Interval, scratch: &mut Scratch) {
        let (lo_a, lo_b, hi_a, hi_b) = mul_endpoints(a, b);
        match (lo_a, lo_b, hi_a, hi_b) {
            (Some(la), Some(lb), Some(ha), Some(hb)) => {
                scratch.t.assign_round(la * lb, Round::Down);
                self.lo.add_assign_round(&scratch.t, Round::Down);
                scratch.t.assign_round(ha * hb, Round::Up);
                self.hi.add_assign_round(&scratch.t, Round::Up);
            }
            _ => {
                let p = a * b;
                self.lo.add_assign_round(&p.lo, Round::Down);
                self.hi.add_assign_round(&p.hi, Round::Up);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Interval) {
        self.lo.add_assign_round(&other.lo, Round::Down);
        self.hi.add_assign_round(&other.hi, Round::Up);
    }

    pub fn scale_assign(&mut self, k: &Interval) {
        let p = &*self * k;
        *self = p;
    }

    pub fn mul_float_assign_nonneg(&mut self, k: &Float) {
        debug_assert!(*k >= 0);
        self.lo.mul_assign_round(k, Round::Down);
        self.hi.mul_assign_round(k, Round::Up);
    }

    /// Numerically compares the upper endpoint, for ordering heuristics only.
    pub fn cmp_hi(&self, other: &Interval) -> Ordering {
        self.hi.partial_cmp(&other.hi).unwrap_or(Ordering::Equal)
    }
}

/// Reusable temporary for [`Interval::mul_add_assign`].
pub struct Scratch {
    t: Float,
}

impl Scratch {
    pub fn new(prec: u32) -> Self {
        Scratch { t: Float::new(prec) }
    }
}

/// Picks the endpoint pairs that give the product's bounds when the sign pattern
/// makes that determination possible without comparing all four products.
fn mul_endpoints<'a>(
    a: &'a Interval,
    b: &'a Interval,
) -> (Option<&'a Float>, Option<&'a Float>, Option<&'a Float>, Option<&'a Float>) {
    let a_pos = a.lo >= 0;
    let a_neg = a.hi <= 0;
    let b_pos = b.lo >= 0;
    let b_neg = b.hi <= 0;
    match (a_pos, a_neg, b_pos, b_neg) {
        (true, _, true, _) => (Some(&a.lo), Some(&b.lo), Some(&a.hi), Some(&b.hi)),
        (true, _, _, true) => (Some(&a.hi), Some(&b.lo), Some(&a.lo), Some(&b.hi)),
        (_, true, true, _) => (Some(&a.lo), Some(&b.hi), Some(&a.hi), Some(&b.lo)),
        (_, true, _, true) => (Some(&a.hi), Some(&b.hi), Some(&a.lo), Some(&b.lo)),
        (true, _, false, false) => (Some(&a.hi), Some(&b.lo), Some(&a.hi), Some(&b.hi)),
        (_, true, false, false) => (Some(&a.lo), Some(&b.hi), Some(&a.lo), Some(&b.lo)),
        (false, false, true, _) => (Some(&a.lo), Some(&b.hi), Some(&a.hi), Some(&b.hi)),
        (false, false, _, true) => (Some(&a.hi), Some(&b.lo), Some(&a.lo), Some(&b.lo)),
        _ => (None, None, None, None),
    }
}

impl Mul for &Interval {
    type Output = Interval;

    fn mul(self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        match mul_endpoints(self, rhs) {
            (Some(la), Some(lb), Some(ha), Some(hb)) => Interval {
                lo: Float::with_val_round(prec, la * lb, Round::Down).0,
                hi: Float::with_val_round(prec, ha * hb, Round::Up).0,
            },
            _ => {
                // both straddle zero
                let l1 = Float::with_val_round(prec, &self.lo * &rhs.hi, Round::Down).0;
                let l2 = Float::with_val_round(prec, &self.hi * &rhs.lo, Round::Down).0;
                let h1 = Float::with_val_round(prec, &self.lo * &rhs.lo, Round::Up).0;
                let h2 = Float::with_val_round(prec, &self.hi * &rhs.hi, Round::Up).0;
                Interval { lo: if l1 < l2 { l1 } else { l2 }, hi: if h1 > h2 { h1 } else { h2 } }
            }
        }
    }
}

impl Add for &Interval {
    type Output = Interval;

    fn add(self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        Interval {
            lo: Float::with_val_round(prec, &self.lo + &rhs.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi + &rhs.hi, Round::Up).0,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;

    fn sub(self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        Interval {
            lo: Float::with_val_round(prec, &self.lo - &rhs.hi, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi - &rhs.lo, Round::Up).0,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Decimal rendering of a float that parses back to the same value.
pub fn float_to_decimal(x: &Float) -> String {
    x.to_string_radix(10, None)
}

/// Parses a decimal string produced by [`float_to_decimal`] at `prec` bits.
pub fn float_from_decimal(s: &str, prec: u32, round: Round) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val_round(prec, parsed, round).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = DEFAULT_PRECISION;

    #[test]
    fn pi_encloses_double() {
        let pi = Interval::pi(P);
        assert!(pi.contains_f64(std::f64::consts::PI) || pi.rel_width() < 1e-30);
        assert!(pi.rel_width() < 1e-36);
        assert!(pi.lo() < pi.hi());
    }

    #[test]
    fn c_value() {
        let c = Interval::c(P);
        assert!((c.to_f64() - 2.0 * std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-14);
    }

    #[test]
    fn decimal_literal_is_enclosed() {
        let e = Interval::from_decimal("0.021", P).unwrap();
        let exact = Rational::from((21, 1000));
        assert!(e.contains_rational(&exact));
        assert!(e.lo() < e.hi());
        assert!(Interval::from_decimal("abc", P).is_err());
    }

    #[test]
    fn mixed_sign_products() {
        let a = Interval::new(Float::with_val(P, -2), Float::with_val(P, 3));
        let b = Interval::new(Float::with_val(P, -5), Float::with_val(P, 1));
        let p = &a * &b;
        assert_eq!(p.lo().to_f64(), -15.0);
        assert_eq!(p.hi().to_f64(), 10.0);
        let c = Interval::new(Float::with_val(P, 2), Float::with_val(P, 4));
        let q = &a * &c;
        assert_eq!((q.lo().to_f64(), q.hi().to_f64()), (-8.0, 12.0));
        let mut acc = Interval::zero(P);
        let mut s = Scratch::new(P);
        acc.mul_add_assign(&a, &b, &mut s);
        acc.mul_add_assign(&a, &c, &mut s);
        assert_eq!((acc.lo().to_f64(), acc.hi().to_f64()), (-23.0, 22.0));
    }

    #[test]
    fn division_by_zero_rejected() {
        let a = Interval::one(P);
        let z = Interval::new(Float::with_val(P, -1), Float::with_val(P, 1));
        assert!(a.div(&z).is_err());
        assert!(z.recip().is_err());
        assert!(z.sqrt().is_err());
    }

    #[test]
    fn third_is_enclosed_and_tight() {
        let t = Interval::one(P).div_i64(3);
        assert!(t.contains_rational(&Rational::from((1, 3))));
        assert!(t.rel_width() < 1e-37);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = Interval::from_decimal("1.1", P).unwrap();
        let p = x.powi(7);
        let mut q = Interval::one(P);
        for _ in 0..7 {
            q = &q * &x;
        }
        assert!(p.intersects(&q));
        assert!((p.to_f64() - 1.1f64.powi(7)).abs() < 1e-12);
    }
}
