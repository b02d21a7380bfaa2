use rug::{Integer, Rational};

use super::partition::PartitionTable;
use super::poly::ExactPoly;
use crate::error::{Error, Result};

/// Degree and shift of a Jensen polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JensenSpec {
    pub d: usize,
    pub n: usize,
}

impl JensenSpec {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("Jensen degree must be at least 1".into()));
        }
        Ok(JensenSpec { d, n })
    }
}

pub fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// J^{d,n}(X) = Σ_j C(d, j) p(n + j) X^j.
pub fn jensen_poly(spec: JensenSpec, table: &PartitionTable) -> Result<ExactPoly> {
    table.require(spec.n + spec.d)?;
    Ok(ExactPoly::new(
        (0..=spec.d)
            .map(|j| Rational::from(binomial(spec.d, j) * table.get(spec.n + j).unwrap()))
            .collect(),
    ))
}

/// Integer coefficients C(d, j) p(n + j) of J^{d,n}, lowest degree first.
pub fn jensen_coeffs(spec: JensenSpec, table: &PartitionTable) -> Result<Vec<Integer>> {
    table.require(spec.n + spec.d)?;
    Ok((0..=spec.d)
        .map(|j| binomial(spec.d, j) * table.get(spec.n + j).unwrap())
        .collect())
}

/// Hermite polynomial with generating function e^{tX − t²} = Σ H_d(X) t^d/d!,
/// built from H_{d+1} = X·H_d − 2d·H_{d−1}. These are monic.
pub fn hermite_poly(d: usize) -> ExactPoly {
    let mut prev = ExactPoly::one();
    if d == 0 {
        return prev;
    }
    let mut cur = ExactPoly::x();
    for k in 1..d {
        let next = &(&ExactPoly::x() * &cur) - &prev.scale(&Rational::from(2 * k as u64));
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite polynomial in the physicists' normalization, leading coefficient 2^d:
/// H^{phys}_d(x) = H_d(2x).
pub fn hermite_poly_physicists(d: usize) -> ExactPoly {
    hermite_poly(d).dilate(&Rational::from(2))
}
