//! Truncated power series with interval coefficients.
//!
//! Expanding around an interval base point `x0` yields, for each k, an
//! enclosure of f^{(k)}(x)/k! valid simultaneously for every `x ∈ x0`.

use std::ops::{Add, Mul, Sub};

use crate::asymptotics::ShiftRatio;
use crate::error::{Error, Result};
use crate::interval::{Interval, Scratch};

#[derive(Clone, Debug)]
pub struct SeriesPoly {
    coeffs: Vec<Interval>,
}

impl SeriesPoly {
    /// Series with the given coefficients; its order is their count.
    pub fn new(coeffs: Vec<Interval>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        SeriesPoly { coeffs }
    }

    pub fn constant(c: Interval, order: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![Interval::zero(prec); order];
        coeffs[0] = c;
        SeriesPoly { coeffs }
    }

    /// The series of `x` expanded at `base`: base + h.
    pub fn variable(base: Interval, order: usize) -> Self {
        let prec = base.prec();
        let mut s = Self::constant(base, order);
        if order > 1 {
            s.coeffs[1] = Interval::one(prec);
        }
        s
    }

    /// Number of coefficients kept.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Interval {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Interval> {
        self.coeffs
    }

    fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn scale(&self, k: &Interval) -> Self {
        SeriesPoly { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.order();
        let inv0 = self.coeffs[0].recip().map_err(|_| {
            Error::Domain(format!("series reciprocal with constant term {:?}", self.coeffs[0]))
        })?;
        let mut out = vec![inv0.clone()];
        let mut scratch = Scratch::new(self.prec());
        for k in 1..n {
            let mut acc = Interval::zero(self.prec());
            for i in 1..=k {
                acc.mul_add_assign(&self.coeffs[i], &out[k - i], &mut scratch);
            }
            out.push(-(&acc * &inv0));
        }
        Ok(SeriesPoly { coeffs: out })
    }

    pub fn sqrt(&self) -> Result<Self> {
        let n = self.order();
        if !self.coeffs[0].is_positive() {
            return Err(Error::Domain(format!(
                "series sqrt with constant term {:?}",
                self.coeffs[0]
            )));
        }
        let b0 = self.coeffs[0].sqrt()?;
        let two_b0_inv = b0.mul_i64(2).recip()?;
        let mut out = vec![b0];
        let mut scratch = Scratch::new(self.prec());
        for k in 1..n {
            let mut acc = Interval::zero(self.prec());
            for i in 1..k {
                acc.mul_add_assign(&out[i], &out[k - i], &mut scratch);
            }
            out.push(&(&self.coeffs[k] - &acc) * &two_b0_inv);
        }
        Ok(SeriesPoly { coeffs: out })
    }

    pub fn exp(&self) -> Self {
        let n = self.order();
        let prec = self.prec();
        let mut out = vec![self.coeffs[0].exp()];
        let mut scratch = Scratch::new(prec);
        for k in 1..n {
            let mut acc = Interval::zero(prec);
            for i in 1..=k {
                let ia = self.coeffs[i].mul_i64(i as i64);
                acc.mul_add_assign(&ia, &out[k - i], &mut scratch);
            }
            out.push(acc.div_i64(k as i64));
        }
        SeriesPoly { coeffs: out }
    }

    /// `self ∘ inner` for an `inner` series with zero constant term.
    pub fn compose(&self, inner: &SeriesPoly) -> Result<Self> {
        if !inner.coeffs[0].contains_zero() || inner.coeffs[0].mag() != 0 {
            return Err(Error::Domain("composition needs an inner series with zero constant term".into()));
        }
        let n = self.order().min(inner.order());
        let inner = SeriesPoly { coeffs: inner.coeffs[..n].to_vec() };
        let mut acc = SeriesPoly::constant(self.coeffs[n - 1].clone(), n);
        for k in (0..n - 1).rev() {
            acc = &(&acc * &inner) + &SeriesPoly::constant(self.coeffs[k].clone(), n);
        }
        Ok(acc)
    }

    /// Evaluates the truncated polynomial at `x` (Horner).
    pub fn eval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::zero(self.prec());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

impl Add for &SeriesPoly {
    type Output = SeriesPoly;

    fn add(self, rhs: &SeriesPoly) -> SeriesPoly {
        let n = self.order().min(rhs.order());
        SeriesPoly { coeffs: (0..n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &SeriesPoly {
    type Output = SeriesPoly;

    fn sub(self, rhs: &SeriesPoly) -> SeriesPoly {
        let n = self.order().min(rhs.order());
        SeriesPoly { coeffs: (0..n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Mul for &SeriesPoly {
    type Output = SeriesPoly;

    fn mul(self, rhs: &SeriesPoly) -> SeriesPoly {
        let n = self.order().min(rhs.order());
        let prec = self.prec().max(rhs.prec());
        let mut scratch = Scratch::new(prec);
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = Interval::zero(prec);
                for i in 0..=k {
                    acc.mul_add_assign(&self.coeffs[i], &rhs.coeffs[k - i], &mut scratch);
                }
                acc
            })
            .collect();
        SeriesPoly { coeffs }
    }
}

/// Taylor coefficients of R(j, ·) around every point of `base` simultaneously:
/// entry k encloses R^{(k)}(j, x)/k! for all x in `base`.
pub fn r_series_at(sr: &ShiftRatio, base: &Interval, order: usize) -> Result<SeriesPoly> {
    if base.lo() < &0 || base.hi() >= &1 {
        return Err(Error::Domain(format!("R(j, w) expansion point {base:?} outside [0, 1)")));
    }
    let prec = base.prec().max(sr.prec());
    let w = SeriesPoly::variable(base.clone(), order);
    let one = SeriesPoly::constant(Interval::one(prec), order);
    // u = 1 + t w^2
    let u = &one + &(&w * &w).scale(&sr.t);
    let sq = u.sqrt()?;
    let expo = &w.scale(&sr.t) * &(&one + &sq).recip()?;
    let a = expo.exp();
    let b = &sq - &w;
    let c = (&one - &w).recip()?;
    let d = (&u * &sq).recip()?;
    Ok(&(&a * &b) * &(&c * &d))
}

/// Degree `order − 1` Taylor polynomial A_order(j, w) of R(j, w) at w = 0.
pub fn taylor_of_r(sr: &ShiftRatio, order: usize) -> Result<SeriesPoly> {
    if order == 0 {
        return Err(Error::InvalidArgument("Taylor order must be at least 1".into()));
    }
    r_series_at(sr, &Interval::zero(sr.prec()), order)
}
