//! Rigorous enclosures of the asymptotic quantities attached to p(n).
//!
//! With c = 2π²/3 and w(n) = 1/√(c(n − 1/24)):
//!
//! - F(w) = π²/(6√3)·(w² − w³)·e^{1/w} is the leading Hardy–Ramanujan term,
//! - R(j, w) = F(w/√(1 + cjw²))/F(w) approximates p(n + j)/p(n),
//! - L(w) bounds the relative error |p(n) − F(w)|/F(w),
//! - |p(n + j)/p(n) − R(j, w)| ≤ R(j, w)·2L(w)/(1 − L(w)).

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// A shift `j` together with the enclosure of `t = c·j`.
#[derive(Clone, Debug)]
pub struct ShiftRatio {
    pub j: i64,
    pub t: Interval,
}

impl ShiftRatio {
    pub fn new(j: i64, prec: u32) -> Self {
        ShiftRatio { j, t: Interval::c(prec).mul_i64(j) }
    }

    pub fn prec(&self) -> u32 {
        self.t.prec()
    }

    /// Checks 1 + t·w² > 0 over the enclosure `w`.
    pub fn check_domain(&self, w: &Interval) -> Result<()> {
        let u = &Interval::one(w.prec()) + &(&self.t * &w.sqr());
        if u.is_positive() {
            Ok(())
        } else {
            Err(Error::Domain(format!("1 + c·{}·w² is not positive for w = {w:?}", self.j)))
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(())
}

/// w(n) = 1/√(c(n − 1/24)).
pub fn w_of(n: u64, prec: u32) -> Result<Interval> {
    check_n(n)?;
    let shifted = Interval::from_rational(&Rational::from((Integer::from(24 * n - 1), 24)), prec);
    (&Interval::c(prec) * &shifted).sqrt()?.recip()
}

/// δ(n) = c·w(n)^{3/2}/√2.
pub fn delta_of(n: u64, prec: u32) -> Result<Interval> {
    let w = w_of(n, prec)?;
    let w32 = &w * &w.sqrt()?;
    (&Interval::c(prec) * &w32).div(&Interval::from_i64(2, prec).sqrt()?)
}

/// F(w) = π²/(6√3)·(w² − w³)·e^{1/w}.
pub fn f_of(w: &Interval) -> Result<Interval> {
    if !w.is_positive() {
        return Err(Error::Domain(format!("F(w) needs w > 0, got {w:?}")));
    }
    let prec = w.prec();
    let pi2 = Interval::pi(prec).sqr();
    let k = pi2.div(&Interval::from_i64(3, prec).sqrt()?.mul_i64(6))?;
    let poly = &w.sqr() - &w.powi(3);
    Ok(&(&k * &poly) * &w.recip()?.exp())
}

fn check_r_domain(sr: &ShiftRatio, w: &Interval) -> Result<()> {
    if w.lo() < &0 || w.hi() >= &1 {
        return Err(Error::Domain(format!("R(j, w) needs 0 <= w < 1, got {w:?}")));
    }
    sr.check_domain(w)
}

/// R(j, w) = e^{tw/(1+√(1+tw²))}·(√(1+tw²) − w)/((1 − w)(1 + tw²)^{3/2}) with t = cj.
pub fn r_of(sr: &ShiftRatio, w: &Interval) -> Result<Interval> {
    check_r_domain(sr, w)?;
    let prec = w.prec();
    let one = Interval::one(prec);
    let u = &one + &(&sr.t * &w.sqr());
    let sq = u.sqrt()?;
    let expo = (&sr.t * w).div(&(&one + &sq))?;
    let num = &expo.exp() * &(&sq - w);
    let den = &(&one - w) * &(&u * &sq);
    num.div(&den)
}

/// L(w) = (1 + 21w)/(1 − w)·e^{−1/(2w)} + e^{−1/w}/(w² − w³), for 0 < w < 1.
fn l_direct(w: &Interval) -> Result<Interval> {
    let prec = w.prec();
    let one = Interval::one(prec);
    let inv = w.recip()?;
    let a = (&one + &w.mul_i64(21)).div(&(&one - w))?;
    let e_half = (-inv.div_i64(2)).exp();
    let e_full = (-inv).exp();
    let b = e_full.div(&(&w.sqr() - &w.powi(3)))?;
    Ok(&(&a * &e_half) + &b)
}

/// Enclosure of L over `w`. L is increasing on (0, 1/2), which is used to
/// evaluate it only at the endpoints there.
pub fn l_of(w: &Interval) -> Result<Interval> {
    if !w.is_positive() || w.hi() >= &1 {
        return Err(Error::Domain(format!("L(w) needs 0 < w < 1, got {w:?}")));
    }
    if *w.hi() < 0.5 {
        let lo = l_direct(&Interval::point(w.lo().clone()))?;
        let hi = l_direct(&Interval::point(w.hi().clone()))?;
        Ok(Interval::new(lo.lo().clone(), hi.hi().clone()))
    } else {
        l_direct(w)
    }
}

/// Upper bound π²N^{−2/3}/√3·(N³w³e^{1/(Nw)}/2 + 1/6) on Lehmer's remainder |B(n, N)|.
pub fn lehmer_b_bound(n: u64, big_n: u64, prec: u32) -> Result<Interval> {
    check_n(n)?;
    if big_n == 0 {
        return Err(Error::InvalidArgument("series length N must be positive".into()));
    }
    let w = w_of(n, prec)?;
    let nn = Interval::from_i64(big_n as i64, prec);
    let pi2 = Interval::pi(prec).sqr();
    let n_pow = nn.pow(&Interval::from_i64(-2, prec).div_i64(3))?;
    let front = (&pi2 * &n_pow).div(&Interval::from_i64(3, prec).sqrt()?)?;
    let nw = &nn * &w;
    let inner = &(&nw.powi(3) * &nw.recip()?.exp()).div_i64(2) + &Interval::one(prec).div_i64(6);
    Ok(&front * &inner)
}

/// R(j, w)·2L(w)/(1 − L(w)), the bound on |p(n+j)/p(n) − R(j, w(n))|.
pub fn ratio_error_bound(sr: &ShiftRatio, w: &Interval) -> Result<Interval> {
    let l = l_of(w)?;
    let one = Interval::one(w.prec());
    if !(&one - &l).is_positive() {
        return Err(Error::Domain(format!(
            "L(w) = {l:?} is not below 1 for w = {w:?}; use a smaller epsilon"
        )));
    }
    let r = r_of(sr, w)?;
    (&r * &l.mul_i64(2)).div(&(&one - &l))
}
