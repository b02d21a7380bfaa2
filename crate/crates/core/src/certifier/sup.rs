//! Upper bounds on the Taylor remainder of R(j, ·) over [0, ε].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rug::Float;

use super::series::r_series_at;
use crate::asymptotics::{l_of, r_of, ShiftRatio};
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::interval::Interval;

/// Relative gap between the certified upper bound and the best witnessed value
/// at which branch-and-bound stops refining.
pub const BNB_REL_TOL: f64 = 1e-3;
pub const BNB_MAX_DEPTH: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupStrategy {
    BranchAndBound,
    #[serde(rename = "lemma41_closed_form")]
    ClosedForm,
}

impl fmt::Display for SupStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SupStrategy::BranchAndBound => "branch_and_bound",
            SupStrategy::ClosedForm => "lemma41_closed_form",
        })
    }
}

impl FromStr for SupStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bnb" | "branch_and_bound" => Ok(SupStrategy::BranchAndBound),
            "lemma41" | "lemma41_closed_form" => Ok(SupStrategy::ClosedForm),
            _ => Err(Error::Parse(format!("unknown sup strategy {s:?}"))),
        }
    }
}

/// Result of maximizing |R^{(s)}(j, x)|/s! over [0, ε].
#[derive(Clone, Debug)]
pub struct SupBound {
    /// Rigorous upper bound on the supremum.
    pub upper: Float,
    /// A value the supremum provably attains or exceeds (0 if none is known).
    pub witness: Float,
    /// False when refinement stopped at the depth cap before the tolerance was met.
    pub converged: bool,
    pub boxes: usize,
}

struct Node {
    key: f64,
    upper: Float,
    x: Interval,
    depth: u32,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.key.total_cmp(&other.key) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key)
    }
}

fn check_eps(eps: &Interval) -> Result<()> {
    if !eps.is_positive() || eps.hi() >= &1 {
        return Err(Error::InvalidArgument(format!("epsilon {eps:?} must lie in (0, 1)")));
    }
    Ok(())
}

/// Enclosure of |R^{(s)}(j, x)|/s! over `x`: the natural interval extension
/// intersected with the centered form g(mid) + g'(x)·(x − mid), where
/// g = R^{(s)}/s! and g' = (s + 1)·R^{(s+1)}/(s + 1)!.
fn derivative_enclosure(sr: &ShiftRatio, x: &Interval, s: usize) -> Result<Interval> {
    let natural = r_series_at(sr, x, s + 2)?;
    let g = natural.coeff(s);
    if x.width() == 0 {
        return Ok(g.abs());
    }
    let mid = x.midpoint();
    let at_mid = r_series_at(sr, &mid, s + 1)?;
    let slope = natural.coeff(s + 1).mul_i64(s as i64 + 1);
    let centered = at_mid.coeff(s) + &(&slope * &(x - &mid));
    let lo = g.lo().clone().max(centered.lo());
    let hi = g.hi().clone().min(centered.hi());
    Ok(Interval::new(lo, hi).abs())
}

/// Interval maximization of |R^{(s)}(j, x)|/s! over [0, ε.hi] by best-first bisection.
fn sup_bnb(sr: &ShiftRatio, s: usize, eps: &Interval) -> Result<SupBound> {
    let prec = sr.prec().max(eps.prec());
    let domain = Interval::new(Float::with_val(prec, 0), eps.hi().clone());
    let mut witness = Float::with_val(prec, 0);
    let see = |x: &Interval, witness: &mut Float| -> Result<()> {
        let v = derivative_enclosure(sr, x, s)?;
        let lo = v.lo().clone();
        if lo > *witness {
            *witness = lo;
        }
        Ok(())
    };
    see(&Interval::point(domain.lo().clone()), &mut witness)?;
    see(&Interval::point(domain.hi().clone()), &mut witness)?;

    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Node>, x: Interval, depth: u32| -> Result<()> {
        let upper = derivative_enclosure(sr, &x, s)?.hi().clone();
        heap.push(Node { key: upper.to_f64(), upper, x, depth });
        Ok(())
    };
    push(&mut heap, domain, 0)?;
    let mut boxes = 1;
    let mut stuck: Option<Float> = None;
    let mut converged = true;
    let upper = loop {
        let node = heap.pop().expect("heap never empties before termination");
        let target = Float::with_val(prec, &witness * (1.0 + BNB_REL_TOL));
        if node.upper <= target {
            break node.upper;
        }
        if node.depth >= BNB_MAX_DEPTH {
            converged = false;
            if stuck.as_ref().map_or(true, |u| node.upper > *u) {
                stuck = Some(node.upper);
            }
            if heap.is_empty() {
                break stuck.clone().unwrap();
            }
            continue;
        }
        see(&node.x.midpoint(), &mut witness)?;
        let (a, b) = node.x.bisect();
        push(&mut heap, a, node.depth + 1)?;
        push(&mut heap, b, node.depth + 1)?;
        boxes += 2;
    };
    let upper = match stuck {
        Some(u) if u > upper => u,
        _ => upper,
    };
    Ok(SupBound { upper, witness, converged, boxes })
}

/// m!·C(m+3, 3)·e^{g(ε)}·(4e^{2tε}t)^m/s! with m = s and g(ε) = tε/(1 + √(1 + tε²)).
pub fn closed_form_derivative_bound(sr: &ShiftRatio, s: usize, eps: &Interval) -> Result<Interval> {
    if sr.j < 1 {
        return Err(Error::InvalidArgument(format!(
            "closed-form derivative bound needs a positive shift, got j = {}",
            sr.j
        )));
    }
    check_eps(eps)?;
    let prec = sr.prec().max(eps.prec());
    let e = Interval::point(eps.hi().clone());
    let t = &sr.t;
    let one = Interval::one(prec);
    let g = (t * &e).div(&(&one + &(&one + &(t * &e.sqr())).sqrt()?))?;
    let inner = &(t * &e.mul_i64(2)).exp() * &t.mul_i64(4);
    let binom = Interval::from_integer(&binomial(s + 3, 3), prec);
    // m!/s! = 1 with m = s
    Ok(&(&binom * &g.exp()) * &inner.powi(s as u32))
}

/// Rigorous upper bound on sup_{x ∈ [0, ε]} |R^{(s)}(j, x)|/s!.
pub fn sup_abs_derivative(
    sr: &ShiftRatio,
    s: usize,
    eps: &Interval,
    strategy: SupStrategy,
) -> Result<SupBound> {
    if s == 0 {
        return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
    }
    check_eps(eps)?;
    match strategy {
        SupStrategy::BranchAndBound => sup_bnb(sr, s, eps),
        SupStrategy::ClosedForm => {
            let v = closed_form_derivative_bound(sr, s, eps)?;
            Ok(SupBound {
                upper: v.hi().clone(),
                witness: Float::with_val(v.prec(), 0),
                converged: true,
                boxes: 0,
            })
        }
    }
}

/// Pieces used for the tail [0, b] near zero, where every factor of
/// L(x)/x^s is increasing.
fn l_over_pow_at(x: &Interval, s: usize) -> Result<Interval> {
    let prec = x.prec();
    let one = Interval::one(prec);
    let inv = x.recip()?;
    let a = (&one + &x.mul_i64(21)).div(&(&one - x))?;
    let first = (&a * &(-inv.div_i64(2)).exp()).div(&x.powi(s as u32))?;
    let second = (-&inv).exp().div(&(&x.powi(s as u32 + 2) * &(&one - x)))?;
    Ok(&first + &second)
}

/// Upper bound on sup_{x ∈ [0, ε]} R(j, x)·N(x)/(x^s(1 − L(x))), the
/// part of the Taylor error coming from approximating the ratio by R.
///
/// N(x) = 2L(x) for j ≥ 0. For j < 0 the shifted argument
/// x_j = x/√(1 + tx²) exceeds x, and N(x) = L(x) + L(x_j) is used instead.
pub fn ratio_remainder_sup(sr: &ShiftRatio, s: usize, eps: &Interval) -> Result<Interval> {
    check_eps(eps)?;
    let prec = sr.prec().max(eps.prec());
    let e = Interval::point(eps.hi().clone());
    // x ↦ e^{−1/(2x)}/x^s increases on (0, 1/(2s)); e^{−1/x}/x^{s+2} on (0, 1/(s+2)).
    let mono_limit = Interval::one(prec).div_i64(2 * s as i64 + 1);
    if e.hi() >= mono_limit.lo() {
        return Err(Error::Domain(format!(
            "epsilon {} too large for the monotone remainder bound with s = {s}",
            eps.hi()
        )));
    }
    let one = Interval::one(prec);
    let l_eps = l_of(&e)?;
    let denom = &one - &l_eps;
    if !denom.is_positive() {
        return Err(Error::Domain(format!("L(ε) = {l_eps:?} is not below 1")));
    }
    let mut num = l_over_pow_at(&e, s)?;
    if sr.j < 0 {
        sr.check_domain(&e)?;
        let stretch = (&one + &(&sr.t * &e.sqr())).sqrt()?;
        let ej = e.div(&stretch)?;
        if ej.hi() >= mono_limit.lo() {
            return Err(Error::Domain("shifted epsilon outside the monotone range".into()));
        }
        // L(x_j)/x^s = L(x_j)/x_j^s · (1 + tx²)^{−s/2}, both factors increasing
        let shifted = &l_over_pow_at(&ej, s)? * &stretch.powi(s as u32).recip()?;
        num = &num + &shifted;
    } else {
        num = num.mul_i64(2);
    }
    // sup of R over [0, ε] by a uniform cover
    let pieces = 64;
    let mut r_sup = Interval::zero(prec);
    for i in 0..pieces {
        let a = e.mul_i64(i).div_i64(pieces);
        let b = e.mul_i64(i + 1).div_i64(pieces);
        let x = Interval::new(a.lo().clone(), b.hi().clone()).max(&Interval::zero(prec));
        let r = r_of(sr, &x)?;
        r_sup = r_sup.max(&r);
    }
    let v = (&Interval::point(r_sup.hi().clone()) * &num).div(&denom)?;
    Ok(Interval::point(v.hi().clone()))
}

/// Bound on |E_s(j, w)| for w ∈ [0, ε]: derivative part plus ratio part.
#[derive(Clone, Debug)]
pub struct TaylorErrorBound {
    pub j: i64,
    pub derivative: SupBound,
    pub ratio: Interval,
    pub total: Float,
}

pub fn taylor_error_bound(
    sr: &ShiftRatio,
    s: usize,
    eps: &Interval,
    strategy: SupStrategy,
) -> Result<TaylorErrorBound> {
    let derivative = sup_abs_derivative(sr, s, eps, strategy)?;
    let ratio = ratio_remainder_sup(sr, s, eps)?;
    let total = (&Interval::point(derivative.upper.clone()) + &ratio).hi().clone();
    Ok(TaylorErrorBound { j: sr.j, derivative, ratio, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::series::taylor_of_r;
    use crate::interval::DEFAULT_PRECISION as P;

    fn eps(s: &str) -> Interval {
        Interval::from_decimal(s, P).unwrap()
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("bnb".parse::<SupStrategy>().unwrap(), SupStrategy::BranchAndBound);
        assert_eq!("lemma41".parse::<SupStrategy>().unwrap(), SupStrategy::ClosedForm);
        assert!("nope".parse::<SupStrategy>().is_err());
    }

    #[test]
    fn bnb_brackets_the_maximum() {
        let sr = ShiftRatio::new(2, P);
        let b = sup_abs_derivative(&sr, 10, &eps("0.021"), SupStrategy::BranchAndBound).unwrap();
        assert!(b.converged);
        assert!(b.witness <= b.upper);
        let gap = Float::with_val(P, &b.upper - &b.witness) / &b.witness;
        assert!(gap.to_f64() <= BNB_REL_TOL);
    }

    #[test]
    fn closed_form_dominates_bnb() {
        for j in 1..=5 {
            let sr = ShiftRatio::new(j, P);
            let e = eps("0.0081");
            let bnb = sup_abs_derivative(&sr, 10, &e, SupStrategy::BranchAndBound).unwrap();
            let cf = sup_abs_derivative(&sr, 10, &e, SupStrategy::ClosedForm).unwrap();
            assert!(cf.upper >= bnb.upper, "j={j}");
        }
        assert!(closed_form_derivative_bound(&ShiftRatio::new(-1, P), 6, &eps("0.013")).is_err());
    }

    #[test]
    fn ratio_part_vanishes_for_small_epsilon() {
        let sr = ShiftRatio::new(3, P);
        let v = ratio_remainder_sup(&sr, 10, &eps("0.001")).unwrap();
        // e^{−500}·10^{30}·2 ≈ 1.5e-187
        assert!(v.hi() < &Float::with_val(P, Float::parse("1e-186").unwrap()));
        assert!(ratio_remainder_sup(&sr, 10, &eps("0.2")).is_err());
    }

    #[test]
    fn remainder_containment() {
        // |R(j, w) − A_s(j, w)| ≤ sup|R^{(s)}|/s!·w^s on sampled w ∈ (0, ε]
        for s in [6usize, 10] {
            for j in 1..=5 {
                let sr = ShiftRatio::new(j, P);
                let e = eps("0.0163");
                let bound = sup_abs_derivative(&sr, s, &e, SupStrategy::BranchAndBound).unwrap();
                let a = taylor_of_r(&sr, s).unwrap();
                for k in 1..=50 {
                    let w = e.mul_i64(k).div_i64(50);
                    let diff = (&r_of(&sr, &w).unwrap() - &a.eval(&w)).abs();
                    let allowed = &Interval::point(bound.upper.clone()) * &w.powi(s as u32);
                    assert!(diff.lo() <= allowed.hi(), "s={s} j={j} k={k}");
                }
            }
        }
    }
}
