//! The ratio inequality
//! 4(1 − u_n)(1 − u_{n+1}) < (1 + π/(√24·n^{3/2}))·(1 − u_n u_{n+1})²,
//! u_n = p(n+1)p(n−1)/p(n)², checked exactly on a finite range and certified
//! for the tail.
//!
//! With a_i = p(n+i)/p(n) the inequality multiplied by a_1⁴ reads
//! 0 < (1 + κ)(a_1² − a_{−1}a_1a_2)² − 4a_1²(1 − a_{−1}a_1)(a_1² − a_2).
//! The tail certificate uses κ ≈ π⁴w³/9, which equals
//! π/(√24·(n − 1/24)^{3/2}) and slightly exceeds the true κ(n). A second,
//! strict certificate uses the lower bound κ(n) ≥ (π⁴/9)w³(1 − cw²/16),
//! which follows from (1 + x)^{−3/2} ≥ 1 − 3x/2 with x = cw²/24.

use rug::{Float, Rational};

use super::certificate::{threshold_for_epsilon, CANCELLATION_TOL};
use super::errpoly::{split_coefficients, ErrorPoly};
use super::series::taylor_of_r;
use super::sup::{taylor_error_bound, SupStrategy, TaylorErrorBound};
use crate::asymptotics::ShiftRatio;
use crate::error::{Error, Result};
use crate::exact::PartitionTable;
use crate::hankel::MPoly;
use crate::interval::Interval;

pub const CHEN_SHIFTS: [i64; 3] = [-1, 1, 2];
pub const CHEN_DEFAULT_S: usize = 6;
pub const CHEN_DEFAULT_EPSILON: &str = "0.013";
pub const CHEN_DEFAULT_DIRECT: u64 = 900;
/// Power of w at which the tail expression starts.
pub const CHEN_LEADING_POWER: usize = 10;

/// The two polynomial parts (a_1² − a_{−1}a_1a_2)² and
/// 4a_1²(1 − a_{−1}a_1)(a_1² − a_2), in variables (a_{−1}, a_1, a_2).
fn chen_parts() -> (MPoly, MPoly) {
    let one = |c: i64| MPoly::constant(3, Rational::from(c));
    let am = MPoly::var(3, 0);
    let a1 = MPoly::var(3, 1);
    let a2 = MPoly::var(3, 2);
    let a1sq = &a1 * &a1;
    let base = &a1sq - &(&(&am * &a1) * &a2);
    let square = &base * &base;
    let rhs = &(&(&a1sq * &one(4)) * &(&one(1) - &(&am * &a1))) * &(&a1sq - &a2);
    (square, rhs)
}

/// 25π¹²/729, the limit of the tail expression divided by w^10.
pub fn chen_leading_constant(prec: u32) -> Interval {
    Interval::pi(prec).powi(12).mul_i64(25).div_i64(729)
}

#[derive(Clone, Debug)]
pub struct ChenTail {
    /// Error-free coefficient of w^10.
    pub leading: Interval,
    /// Lower bound on the w^10 coefficient including error terms.
    pub c0_lower: Float,
    /// Nonnegative coefficients of the increasing polynomial x(w), w^1 onward.
    pub x_coeffs: Vec<Float>,
    pub x_at_epsilon: Interval,
    /// c0_lower − x(ε); positive iff the tail is certified.
    pub margin: Interval,
    pub cancellation_residual: Float,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct ChenCertificate {
    pub s: usize,
    pub epsilon: String,
    pub precision: u32,
    pub error_bounds: Vec<TaylorErrorBound>,
    /// Tail certificate for the expression with factor 1 + π⁴w³/9.
    pub tail: ChenTail,
    /// Tail certificate for the expression with the lower bound on κ(n).
    pub strict_tail: ChenTail,
    pub leading_matches: bool,
    pub threshold_n0: u64,
    pub verified: bool,
}

fn tail_from_expansion(p: &ErrorPoly, bounds: &[Float], eps: &Interval) -> Result<ChenTail> {
    let k = CHEN_LEADING_POWER;
    let split = split_coefficients(p, bounds)?;
    if split.pure.len() <= k {
        return Err(Error::Cancellation { d: 0, m: 0, power: k, detail: "tail expansion too short".into() });
    }
    let leading = split.pure[k].clone();
    if leading.contains_zero() {
        return Err(Error::Cancellation { d: 0, m: 0, power: k, detail: format!("leading term {leading:?} not separated from 0") });
    }
    let limit = Float::with_val(leading.prec(), leading.mig() * CANCELLATION_TOL);
    let mut residual = Float::with_val(leading.prec(), 0);
    for v in p.terms().values() {
        for (i, c) in v.iter().enumerate().take(k) {
            if !c.contains_zero() || c.width() >= limit {
                return Err(Error::Cancellation {
                    d: 0,
                    m: 0,
                    power: i,
                    detail: format!("coefficient {c:?} of w^{i} does not vanish"),
                });
            }
            residual = residual.max(&c.mag());
        }
    }
    let lower = |i: usize| (&split.pure[i] - &Interval::point(split.error_mass[i].clone())).lo().clone();
    let c0_lower = lower(k);
    let x_coeffs: Vec<Float> = (k + 1..split.pure.len())
        .map(|i| {
            let l = lower(i);
            if l < 0 { -l } else { Float::with_val(l.prec(), 0) }
        })
        .collect();
    // x(ε) = Σ x_i ε^{i+1}
    let mut x_at_epsilon = Interval::zero(eps.prec());
    for c in x_coeffs.iter().rev() {
        x_at_epsilon = &(&x_at_epsilon + &Interval::point(c.clone())) * eps;
    }
    let margin = &Interval::point(c0_lower.clone()) - &x_at_epsilon;
    let verified = margin.is_positive();
    Ok(ChenTail { leading, c0_lower, x_coeffs, x_at_epsilon, margin, cancellation_residual: residual, verified })
}

pub fn chen_certificate(s: usize, epsilon: &str, prec: u32) -> Result<ChenCertificate> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!("Taylor order s = {s} must be ≥ 2")));
    }
    let eps = Interval::from_decimal(epsilon, prec)?;
    let mut error_bounds = Vec::new();
    let mut subs = Vec::new();
    for (sym, &j) in CHEN_SHIFTS.iter().enumerate() {
        let sr = ShiftRatio::new(j, prec);
        error_bounds.push(taylor_error_bound(&sr, s, &eps, SupStrategy::BranchAndBound)?);
        let a = taylor_of_r(&sr, s)?;
        subs.push(ErrorPoly::with_error(CHEN_SHIFTS.len(), a.into_coeffs(), sym, s, Interval::one(prec)));
    }
    let bounds: Vec<Float> = error_bounds.iter().map(|b| b.total.clone()).collect();
    let (square, rhs) = chen_parts();
    let square = ErrorPoly::substitute(&square, &subs)?;
    let rhs = ErrorPoly::substitute(&rhs, &subs)?;

    let pi4_9 = Interval::pi(prec).powi(4).div_i64(9);
    let nsym = CHEN_SHIFTS.len();
    let zero = Interval::zero(prec);
    let one = Interval::one(prec);
    let mut factor = vec![one.clone(), zero.clone(), zero.clone(), pi4_9.clone()];
    let mut w_form = square.mul(&ErrorPoly::from_series(nsym, factor.clone()));
    w_form.add_scaled(&rhs, &-&one);
    // κ(n) ≥ (π⁴/9)w³ − (π⁴c/144)w⁵
    factor.extend([zero, -(&pi4_9 * &Interval::c(prec)).div_i64(16)]);
    let mut strict = square.mul(&ErrorPoly::from_series(nsym, factor));
    strict.add_scaled(&rhs, &-&one);

    let tail = tail_from_expansion(&w_form, &bounds, &eps)?;
    let strict_tail = tail_from_expansion(&strict, &bounds, &eps)?;
    let leading_matches = tail.leading.intersects(&chen_leading_constant(prec));
    let verified = leading_matches && tail.verified && strict_tail.verified;
    Ok(ChenCertificate {
        s,
        epsilon: epsilon.to_string(),
        precision: prec,
        error_bounds,
        tail,
        strict_tail,
        leading_matches,
        threshold_n0: threshold_for_epsilon(epsilon, prec)?,
        verified,
    })
}

/// Verdict of the exact comparison for one n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChenVerdict {
    Holds,
    Fails,
}

/// u_n = p(n+1)p(n−1)/p(n)².
pub fn chen_u(table: &PartitionTable, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("u_n needs n ≥ 1".into()));
    }
    table.require(n + 1)?;
    let num = rug::Integer::from(table.get(n + 1)? * table.get(n - 1)?);
    let den = rug::Integer::from(table.get(n)?.square_ref());
    Ok(Rational::from((num, den)))
}

/// Exact test of the inequality at n, using a rational enclosure of
/// π/(√24·n^{3/2}) refined until the comparison is decided.
pub fn chen_check_n(table: &PartitionTable, n: usize) -> Result<ChenVerdict> {
    if n < 2 {
        return Err(Error::InvalidArgument("the inequality is stated for n ≥ 2".into()));
    }
    let un = chen_u(table, n)?;
    let un1 = chen_u(table, n + 1)?;
    let one = Rational::from(1);
    let lhs = Rational::from(4) * Rational::from(&one - &un) * Rational::from(&one - &un1);
    let q = Rational::from(&one - Rational::from(&un * &un1)).square();
    let mut prec = 128;
    loop {
        let kappa = kappa_of(n as u64, prec)?;
        let lo = kappa.lo().to_rational().expect("finite enclosure");
        let hi = kappa.hi().to_rational().expect("finite enclosure");
        // the right-hand side is increasing in κ because q ≥ 0
        if lhs < Rational::from(&one + &lo) * &q {
            return Ok(ChenVerdict::Holds);
        }
        if lhs >= Rational::from(&one + &hi) * &q {
            return Ok(ChenVerdict::Fails);
        }
        prec *= 2;
        if prec > 1 << 14 {
            return Err(Error::Domain(format!("cannot decide the inequality at n = {n}")));
        }
    }
}

/// π/(√24·n^{3/2}).
pub fn kappa_of(n: u64, prec: u32) -> Result<Interval> {
    let nn = Interval::from_i64(n as i64, prec);
    let den = &Interval::from_i64(24, prec).sqrt()? * &(&nn * &nn.sqrt()?);
    Interval::pi(prec).div(&den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChenDirectReport {
    pub n_min: usize,
    pub n_max: usize,
    pub failures: Vec<usize>,
}

/// Exact check for every n in [2, n_max].
pub fn chen_direct_check(table: &PartitionTable, n_max: usize) -> Result<ChenDirectReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("direct range must reach n = 2".into()));
    }
    table.require(n_max + 2)?;
    let mut failures = Vec::new();
    for n in 2..=n_max {
        if chen_check_n(table, n)? == ChenVerdict::Fails {
            failures.push(n);
        }
    }
    Ok(ChenDirectReport { n_min: 2, n_max, failures })
}
