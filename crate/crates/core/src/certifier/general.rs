//! Evaluation of the explicit bound chain that gives N(d) for every d.
//!
//! Everything here works with logarithms: the quantities involved reach
//! 10^±1000 for modest d. Comparisons are made on outward-rounded
//! enclosures, so a `true` verdict is rigorous.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::asymptotics::ShiftRatio;
use crate::error::{Error, Result};
use crate::interval::{float_to_decimal, Interval, DEFAULT_PRECISION};

use super::sup::closed_form_derivative_bound;

/// Log₁₀ enclosures of the per-lemma bounds for one d.
#[derive(Clone, Debug)]
pub struct LemmaValues {
    /// Derivative order used for the product remainder, 3d(d−1)/2 + 1.
    pub derivative_order: usize,
    /// (j, log₁₀ of the bound on |R^{(s)}(j, w)| over [0, ε_d]) for j = 1..d.
    pub derivative_log10: Vec<(i64, Interval)>,
    /// log₁₀ of 2e²(3d)^{10d−10}(4cd)^{3d²/2}.
    pub product_remainder_log10: Interval,
    /// log₁₀ of (e^{4e/c²})^{d²}.
    pub binomial_weight_log10: Interval,
    /// (m, m!(m−1)^m 2^{m²−2}) for m = 2..d.
    pub coefficient_mass: Vec<(usize, Integer)>,
    /// d^{2d}·2^{d²}.
    pub coefficient_mass_bound: Integer,
    /// Lower bound on every Δ_m(H_d).
    pub hermite_lower: Integer,
}

#[derive(Clone, Debug)]
pub struct GeneralBoundReport {
    pub d: usize,
    /// log₁₀ ε_d with ε_d = (3d)^{−12d}(50d)^{−3d²/2}.
    pub epsilon_log10: Interval,
    /// log₁₀ of (3d)^{24d}(50d)^{3d²}.
    pub n_bound_log10: Interval,
    pub lemmas: LemmaValues,
    /// log₁₀ of the product of the three error-term bounds.
    pub chain_lhs_log10: Interval,
    /// log₁₀ of (3d)^{12d}(50d)^{3d²/2}.
    pub chain_rhs_log10: Interval,
    /// Product of the error-term bounds is strictly below (3d)^{12d}(50d)^{3d²/2}.
    pub middle_ok: bool,
    /// (3d)^{12d}(50d)^{3d²/2}·ε_d ≤ 1, decided on exact exponents.
    pub final_ok: bool,
    /// e^{−1/(2ε)}/ε^s < 1 at ε = ε_d for the largest s.
    pub tail_ok: bool,
    /// Each m!(m−1)^m 2^{m²−2} is at most d^{2d}2^{d²}.
    pub mass_ok: bool,
    pub chain_ok: bool,
}

fn ln_int(k: u64, prec: u32) -> Interval {
    Interval::from_integer(&Integer::from(k), prec).ln().expect("positive")
}

/// ln of (3d)^{a}(50d)^{b} for rational exponents.
fn ln_base_product(d: u64, a: &Rational, b: &Rational, prec: u32) -> Interval {
    &(&ln_int(3 * d, prec) * &Interval::from_rational(a, prec))
        + &(&ln_int(50 * d, prec) * &Interval::from_rational(b, prec))
}

/// Exponents of (3d, 50d) in ε_d.
fn epsilon_exponents(d: u64) -> (Rational, Rational) {
    (Rational::from(-12 * d as i64), Rational::from((-3 * (d * d) as i64, 2)))
}

pub fn coefficient_mass(m: usize) -> Integer {
    let m_u = m as u32;
    let fact = Integer::from(Integer::factorial(m_u));
    let base = Integer::from(Integer::u_pow_u(m_u - 1, m_u));
    fact * base << (m_u * m_u - 2)
}

pub fn coefficient_mass_bound(d: usize) -> Integer {
    let d_u = d as u32;
    Integer::from(Integer::u_pow_u(d_u, 2 * d_u)) << (d_u * d_u)
}

/// ε_d as an enclosure; representable at any d thanks to MPFR's exponent range.
pub fn general_epsilon(d: usize, prec: u32) -> Interval {
    let (a, b) = epsilon_exponents(d as u64);
    ln_base_product(d as u64, &a, &b, prec).exp()
}

pub fn general_bound_report(d: usize) -> Result<GeneralBoundReport> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {d}")));
    }
    let prec = DEFAULT_PRECISION;
    let du = d as u64;
    let ln10 = ln_int(10, prec);
    let log10 = |x: &Interval| x.div(&ln10).expect("ln 10 > 0");

    let (ea, eb) = epsilon_exponents(du);
    let ln_eps = ln_base_product(du, &ea, &eb, prec);
    let eps = ln_eps.exp();
    let (ra, rb) = (Rational::from(-ea.clone()), Rational::from(-eb.clone()));
    let ln_rhs = ln_base_product(du, &ra, &rb, prec);
    let ln_n = ln_rhs.mul_i64(2);

    let s = 3 * d * (d - 1) / 2 + 1;
    let s_fact = Interval::from_integer(&Integer::from(Integer::factorial(s as u32)), prec);
    let mut derivative_log10 = Vec::with_capacity(d);
    for j in 1..=d as i64 {
        let per_coeff = closed_form_derivative_bound(&ShiftRatio::new(j, prec), s, &eps)?;
        derivative_log10.push((j, log10(&(&per_coeff * &s_fact).ln()?)));
    }

    let c = Interval::c(prec);
    let e = Interval::e(prec);
    let d_iv = Interval::from_i64(d as i64, prec);
    let d2 = (d * d) as i64;
    // 2e²(3d)^{10d−10}(4cd)^{3d²/2}
    let ln_remainder = &(&(&ln_int(2, prec) + &Interval::from_i64(2, prec))
        + &ln_int(3 * du, prec).mul_i64(10 * d as i64 - 10))
        + &(&(&c * &d_iv).mul_i64(4).ln()? * &Interval::from_i64(3 * d2, prec).div_i64(2));
    // (e^{4e/c²})^{d²}
    let ln_weight = (&e.mul_i64(4 * d2)).div(&c.sqr())?;
    let mass_bound = coefficient_mass_bound(d);
    let ln_mass = Interval::from_integer(&mass_bound, prec).ln()?;

    let ln_lhs = &(&ln_mass + &ln_weight) + &ln_remainder;
    let middle_ok = ln_lhs.hi() < ln_rhs.lo();

    let (sa, sb) = (Rational::from(&ra + &ea), Rational::from(&rb + &eb));
    let final_ok = sa == 0 && sb == 0;

    // −1/(2ε) − s·ln ε < 0
    let tail = &(-&Interval::one(prec).div(&eps.mul_i64(2))?) - &ln_eps.mul_i64(s as i64);
    let tail_ok = tail.is_negative();

    let coefficient_mass: Vec<(usize, Integer)> = (2..=d).map(|m| (m, self::coefficient_mass(m))).collect();
    let mass_ok = coefficient_mass.iter().all(|(_, v)| *v <= mass_bound);

    Ok(GeneralBoundReport {
        d,
        epsilon_log10: log10(&ln_eps),
        n_bound_log10: log10(&ln_n),
        lemmas: LemmaValues {
            derivative_order: s,
            derivative_log10,
            product_remainder_log10: log10(&ln_remainder),
            binomial_weight_log10: log10(&ln_weight),
            coefficient_mass,
            coefficient_mass_bound: mass_bound,
            hermite_lower: Integer::from(1),
        },
        chain_lhs_log10: log10(&ln_lhs),
        chain_rhs_log10: log10(&ln_rhs),
        middle_ok,
        final_ok,
        tail_ok,
        mass_ok,
        chain_ok: middle_ok && final_ok && tail_ok && mass_ok,
    })
}

/// JSON form of [`GeneralBoundReport`]; log values are interval endpoints.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralBoundDocument {
    pub d: String,
    pub epsilon_d_log10: [String; 2],
    pub n_bound_log10: [String; 2],
    pub derivative_order: String,
    pub derivative_bound_log10: Vec<(String, [String; 2])>,
    pub product_remainder_log10: [String; 2],
    pub binomial_weight_log10: [String; 2],
    pub coefficient_mass: Vec<(String, String)>,
    pub coefficient_mass_bound: String,
    pub hermite_lower: String,
    pub chain_lhs_log10: [String; 2],
    pub chain_rhs_log10: [String; 2],
    pub chain_ok: bool,
}

fn ends(x: &Interval) -> [String; 2] {
    [float_to_decimal(x.lo()), float_to_decimal(x.hi())]
}

impl GeneralBoundReport {
    pub fn to_document(&self) -> GeneralBoundDocument {
        GeneralBoundDocument {
            d: self.d.to_string(),
            epsilon_d_log10: ends(&self.epsilon_log10),
            n_bound_log10: ends(&self.n_bound_log10),
            derivative_order: self.lemmas.derivative_order.to_string(),
            derivative_bound_log10: self
                .lemmas
                .derivative_log10
                .iter()
                .map(|(j, v)| (j.to_string(), ends(v)))
                .collect(),
            product_remainder_log10: ends(&self.lemmas.product_remainder_log10),
            binomial_weight_log10: ends(&self.lemmas.binomial_weight_log10),
            coefficient_mass: self
                .lemmas
                .coefficient_mass
                .iter()
                .map(|(m, v)| (m.to_string(), v.to_string()))
                .collect(),
            coefficient_mass_bound: self.lemmas.coefficient_mass_bound.to_string(),
            hermite_lower: self.lemmas.hermite_lower.to_string(),
            chain_lhs_log10: ends(&self.chain_lhs_log10),
            chain_rhs_log10: ends(&self.chain_rhs_log10),
            chain_ok: self.chain_ok,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_bound_in_log_space() {
        // log₁₀(6⁴⁸·100¹²) and 72·log₁₀9 + 27·log₁₀150, evaluated in f64
        let r2 = general_bound_report(2).unwrap();
        let want2 = 48.0 * 6f64.log10() + 24.0;
        assert!((r2.n_bound_log10.to_f64() - want2).abs() < 1e-9);
        assert!((r2.n_bound_log10.to_f64() - 61.35).abs() < 0.01);
        let r3 = general_bound_report(3).unwrap();
        let want3 = 72.0 * 9f64.log10() + 27.0 * 150f64.log10();
        assert!((r3.n_bound_log10.to_f64() - want3).abs() < 1e-9);
        assert!((r3.epsilon_log10.to_f64() + want3 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn coefficient_mass_values() {
        assert_eq!(coefficient_mass(2), 8);
        assert_eq!(coefficient_mass(3), 6 * 8 * 128);
        assert_eq!(coefficient_mass_bound(2), 256);
        let r = general_bound_report(2).unwrap();
        assert_eq!(r.lemmas.hermite_lower, 1);
        assert!(r.mass_ok);
    }

    #[test]
    fn chain_holds_for_small_degrees() {
        for d in 2..=10 {
            let r = general_bound_report(d).unwrap();
            assert!(r.middle_ok && r.final_ok && r.tail_ok && r.mass_ok, "d = {d}");
            assert!(r.chain_ok);
            assert!(r.chain_lhs_log10.hi() < r.chain_rhs_log10.lo());
            assert_eq!(r.lemmas.derivative_log10.len(), d);
        }
        assert!(general_bound_report(1).is_err());
    }

    #[test]
    fn derivative_bound_matches_direct_formula() {
        // d = 2: s = 4, ε_d ≈ 10^{-30.7}, so the bound is ≈ 4!·C(7,3)·(4cj)^4
        let r = general_bound_report(2).unwrap();
        let c = 2.0 * std::f64::consts::PI.powi(2) / 3.0;
        for (j, v) in &r.lemmas.derivative_log10 {
            let want = (24.0 * 35.0 * (4.0 * c * *j as f64).powi(4)).log10();
            assert!((v.to_f64() - want).abs() < 1e-9, "j = {j}");
        }
    }

    #[test]
    fn document_round_trip() {
        let doc = general_bound_report(3).unwrap().to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: GeneralBoundDocument = serde_json::from_str(&text).unwrap();
        assert!(back.chain_ok);
        assert_eq!(back.coefficient_mass_bound, "373248");
    }
}
