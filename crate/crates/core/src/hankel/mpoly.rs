use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use rug::ops::Pow;
use rug::{Integer, Rational};

/// Sparse multivariate polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The monomial `c · x_var^exp`.
    pub fn monomial(nvars: usize, var: usize, exp: u32, c: Rational) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Self::monomial(nvars, var, 1, Rational::from(1))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if *k == 0 {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), Rational::from(c * k))).collect(),
        }
    }

    /// Total degrees of the terms, if they are all equal.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= Rational::from(x.pow(k as i32));
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division by `x_var^k`; panics if some term is not divisible.
    pub fn div_var_pow(&self, var: usize, k: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    assert!(e[var] >= k, "term {e:?} not divisible by x_{var}^{k}");
                    let mut e = e.clone();
                    e[var] -= k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| *c.denom() == Integer::from(1))
    }
}

impl Add for &MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), Rational::from(-c));
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, Rational::from(ca * cb));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_square() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.homogeneous_degree(), Some(2));
        let v = sq.eval(&[Rational::from(2), Rational::from(3)]);
        assert_eq!(v, 25);
        assert!((&sq - &sq).is_empty());
    }
}
