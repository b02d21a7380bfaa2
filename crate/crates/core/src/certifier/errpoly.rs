//! Polynomials in w whose coefficients are polynomials in error symbols E_j.

use std::collections::BTreeMap;

use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::Float;

use crate::error::{Error, Result};
use crate::hankel::MPoly;
use crate::interval::{Interval, Scratch};

pub const MAX_SYMBOLS: usize = 8;

/// Exponents of the error symbols in a monomial.
pub type EKey = [u8; MAX_SYMBOLS];

const PURE: EKey = [0; MAX_SYMBOLS];

fn key_add(a: &EKey, b: &EKey) -> EKey {
    let mut k = *a;
    for (x, y) in k.iter_mut().zip(b) {
        *x += *y;
    }
    k
}

/// Σ_α E^α·P_α(w), with each P_α stored densely by power of w.
#[derive(Clone, Debug)]
pub struct ErrorPoly {
    nsym: usize,
    prec: u32,
    terms: BTreeMap<EKey, Vec<Interval>>,
}

impl ErrorPoly {
    pub fn zero(nsym: usize, prec: u32) -> Self {
        assert!(nsym <= MAX_SYMBOLS, "at most {MAX_SYMBOLS} error symbols");
        ErrorPoly { nsym, prec, terms: BTreeMap::new() }
    }

    pub fn one(nsym: usize, prec: u32) -> Self {
        Self::from_series(nsym, vec![Interval::one(prec)])
    }

    /// An error-free polynomial in w.
    pub fn from_series(nsym: usize, coeffs: Vec<Interval>) -> Self {
        let prec = coeffs.first().map_or(crate::interval::DEFAULT_PRECISION, |c| c.prec());
        let mut p = Self::zero(nsym, prec);
        p.terms.insert(PURE, coeffs);
        p
    }

    /// `series(w) + scale·E_sym·w^power`.
    pub fn with_error(
        nsym: usize,
        series: Vec<Interval>,
        sym: usize,
        power: usize,
        scale: Interval,
    ) -> Self {
        assert!(sym < nsym);
        let prec = series[0].prec();
        let mut p = Self::from_series(nsym, series);
        let mut key = PURE;
        key[sym] = 1;
        let mut v = vec![Interval::zero(prec); power + 1];
        v[power] = scale;
        p.terms.insert(key, v);
        p
    }

    pub fn nsym(&self) -> usize {
        self.nsym
    }

    pub fn terms(&self) -> &BTreeMap<EKey, Vec<Interval>> {
        &self.terms
    }

    /// Number of (error monomial, power of w) slots.
    pub fn size(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    /// The error-free part, i.e. the polynomial with every E_j set to 0.
    pub fn pure(&self) -> Vec<Interval> {
        self.terms.get(&PURE).cloned().unwrap_or_default()
    }

    /// Largest power of w present.
    pub fn w_degree(&self) -> usize {
        self.terms.values().map(|v| v.len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn max_symbol_degree(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter().map(|&e| e as u32)).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &ErrorPoly) -> ErrorPoly {
        assert_eq!(self.nsym, other.nsym);
        let prec = self.prec.max(other.prec);
        let mut out = ErrorPoly::zero(self.nsym, prec);
        let mut scratch = Scratch::new(prec);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let key = key_add(ka, kb);
                let len = va.len() + vb.len() - 1;
                let dst = out.terms.entry(key).or_default();
                if dst.len() < len {
                    dst.resize(len, Interval::zero(prec));
                }
                for (i, a) in va.iter().enumerate() {
                    if a.lo() == &0 && a.hi() == &0 {
                        continue;
                    }
                    for (j, b) in vb.iter().enumerate() {
                        dst[i + j].mul_add_assign(a, b, &mut scratch);
                    }
                }
            }
        }
        out
    }

    /// self += k·other.
    pub fn add_scaled(&mut self, other: &ErrorPoly, k: &Interval) {
        let mut scratch = Scratch::new(self.prec);
        for (key, v) in &other.terms {
            let dst = self.terms.entry(*key).or_default();
            if dst.len() < v.len() {
                dst.resize(v.len(), Interval::zero(self.prec));
            }
            for (d, c) in dst.iter_mut().zip(v) {
                d.mul_add_assign(c, k, &mut scratch);
            }
        }
    }

    /// Substitutes polynomials for the variables of `poly`.
    ///
    /// Terms are visited in lexicographic exponent order so products of
    /// shared prefixes are computed once.
    pub fn substitute(poly: &MPoly, subs: &[ErrorPoly]) -> Result<ErrorPoly> {
        if subs.len() != poly.nvars() {
            return Err(Error::InvalidArgument(format!(
                "{} substitutions for {} variables",
                subs.len(),
                poly.nvars()
            )));
        }
        let nsym = subs.first().map_or(0, |s| s.nsym);
        let prec = subs.iter().map(|s| s.prec).max().unwrap_or(crate::interval::DEFAULT_PRECISION);
        let mut max_exp = vec![0u32; poly.nvars()];
        for e in poly.terms().keys() {
            for (m, &x) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(x);
            }
        }
        let pows: Vec<Vec<ErrorPoly>> = subs
            .iter()
            .zip(&max_exp)
            .map(|(s, &m)| {
                let mut v = vec![ErrorPoly::one(nsym, prec)];
                for e in 1..=m as usize {
                    let next = v[e - 1].mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        let terms: Vec<(&Vec<u32>, Interval)> = poly
            .terms()
            .iter()
            .map(|(e, c)| (e, Interval::from_rational(c, prec)))
            .collect();
        let mut acc = ErrorPoly::zero(nsym, prec);
        let one = ErrorPoly::one(nsym, prec);
        expand_level(0, &terms, &one, &pows, &mut acc);
        Ok(acc)
    }
}

fn expand_level(
    level: usize,
    terms: &[(&Vec<u32>, Interval)],
    prefix: &ErrorPoly,
    pows: &[Vec<ErrorPoly>],
    acc: &mut ErrorPoly,
) {
    if level == pows.len() {
        for (_, c) in terms {
            acc.add_scaled(prefix, c);
        }
        return;
    }
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[level];
        let mut end = start + 1;
        while end < terms.len() && terms[end].0[level] == e {
            end += 1;
        }
        let group = &terms[start..end];
        if e == 0 {
            expand_level(level + 1, group, prefix, pows, acc);
        } else {
            let next = prefix.mul(&pows[level][e as usize]);
            expand_level(level + 1, group, &next, pows, acc);
        }
        start = end;
    }
}

/// Per power of w: the error-free coefficient and an upper bound on the
/// total magnitude of every monomial carrying an error symbol.
#[derive(Clone, Debug)]
pub struct CoefficientSplit {
    pub pure: Vec<Interval>,
    pub error_mass: Vec<Float>,
}

/// Splits `p`, bounding each E-monomial by −|coefficient|·∏ bound_j^{α_j}.
pub fn split_coefficients(p: &ErrorPoly, bounds: &[Float]) -> Result<CoefficientSplit> {
    if bounds.len() != p.nsym {
        return Err(Error::InvalidArgument(format!(
            "{} error bounds for {} symbols",
            bounds.len(),
            p.nsym
        )));
    }
    let len = p.w_degree() + 1;
    let prec = p.prec;
    let mut pure = p.pure();
    pure.resize(len, Interval::zero(prec));
    let mut error_mass = vec![Float::with_val(prec, 0); len];
    for (key, v) in &p.terms {
        if *key == PURE {
            continue;
        }
        let mut weight = Interval::one(prec);
        for (b, &e) in bounds.iter().zip(key.iter()) {
            if e > 0 {
                weight = &weight * &Interval::point(b.clone()).powi(e as u32);
            }
        }
        for (i, c) in v.iter().enumerate() {
            let term = &c.abs() * &weight;
            error_mass[i].add_assign_round(term.hi(), Round::Up);
        }
    }
    Ok(CoefficientSplit { pure, error_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::DEFAULT_PRECISION as P;
    use rug::Rational;

    fn iv(x: i64) -> Interval {
        Interval::from_i64(x, P)
    }

    #[test]
    fn product_and_substitution() {
        // (1 + w + E0 w^2)·(2 + E1 w) = 2 + 2w + E1 w + E1 w^2 + 2E0 w^2 + E0E1 w^3
        let a = ErrorPoly::with_error(2, vec![iv(1), iv(1)], 0, 2, iv(1));
        let b = ErrorPoly::with_error(2, vec![iv(2)], 1, 1, iv(1));
        let p = a.mul(&b);
        let pure = p.pure();
        assert!(pure[0].contains_f64(2.0) && pure[1].contains_f64(2.0));
        assert_eq!(p.terms().len(), 4);
        assert_eq!(p.w_degree(), 3);

        // x0^2 − 3·x0·x1 via substitution agrees with direct multiplication
        let mut q = MPoly::zero(2);
        q.add_term(vec![2, 0], Rational::from(1));
        q.add_term(vec![1, 1], Rational::from(-3));
        let s = ErrorPoly::substitute(&q, &[a.clone(), b.clone()]).unwrap();
        let mut direct = a.mul(&a);
        direct.add_scaled(&a.mul(&b), &iv(-3));
        for (k, v) in direct.terms() {
            let w = &s.terms()[k];
            for (x, y) in v.iter().zip(w) {
                assert!(x.intersects(y));
            }
        }
    }

    #[test]
    fn split_bounds_error_monomials() {
        let a = ErrorPoly::with_error(1, vec![iv(1)], 0, 1, iv(1));
        // (1 + E w)^2 = 1 + 2E w + E^2 w^2
        let p = a.mul(&a);
        let split = split_coefficients(&p, &[Float::with_val(P, 3)]).unwrap();
        assert_eq!(split.error_mass[1].to_f64(), 6.0);
        assert_eq!(split.error_mass[2].to_f64(), 9.0);
        assert!(split.pure[2].contains_f64(0.0));
        assert!(split_coefficients(&p, &[]).is_err());
    }

    #[test]
    fn zero_bounds_recover_pure_part() {
        let a = ErrorPoly::with_error(2, vec![iv(1), iv(-2)], 1, 3, iv(1));
        let p = a.mul(&a).mul(&a);
        let z = Float::with_val(P, 0);
        let split = split_coefficients(&p, &[z.clone(), z]).unwrap();
        assert!(split.error_mass.iter().all(|m| *m == 0));
        assert_eq!(p.max_symbol_degree(), 3);
    }
}
