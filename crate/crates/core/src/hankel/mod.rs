//! Power sums, Hankel determinants, and Hermite's hyperbolicity criterion.
//!
//! For `P(X) = a_d X^d + … + a_0` with roots λ_i and power sums S_k = Σ λ_i^k,
//! Δ_m is the determinant of the m×m matrix (S_{i+j}) and
//! D_{d,m} = a_d^{2m−2} Δ_m is a homogeneous polynomial of degree 2m−2 in the
//! coefficients. `P` has only real roots iff D_{d,m}(P) ≥ 0 for m = 2, …, d.

mod mpoly;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{hermite_poly, hermite_poly_physicists, jensen_coeffs, ExactPoly, JensenSpec, PartitionTable};

pub use mpoly::MPoly;

/// Power sums with the powers of the leading coefficient cleared.
///
/// Returns `T_0, …, T_{k_max}` with `T_k = a_d^k · S_k` as polynomials in the
/// variables `a_0, …, a_d` (variable `i` is `a_i`), so that `S_k = T_k / a_d^k`.
/// The recursion is Newton's identity
/// `a_d S_k + a_{d−1} S_{k−1} + … + a_{d−k+1} S_1 + k a_{d−k} = 0`
/// with `a_i = 0` for `i < 0`.
pub fn power_sums_symbolic(d: usize, k_max: usize) -> Vec<MPoly> {
    assert!(d >= 1);
    let nv = d + 1;
    let ad = |e: u32| MPoly::monomial(nv, d, e, Rational::from(1));
    let mut t = vec![MPoly::constant(nv, Rational::from(d as u64))];
    for k in 1..=k_max {
        let mut acc = MPoly::zero(nv);
        for i in 1..k.min(d + 1) {
            // a_{d-i} a_d^{i-1} T_{k-i}
            let term = &(&MPoly::var(nv, d - i) * &ad(i as u32 - 1)) * &t[k - i];
            acc = &acc - &term;
        }
        if k <= d {
            let term = MPoly::monomial(nv, d - k, 1, Rational::from(k as u64));
            acc = &acc - &(&term * &ad(k as u32 - 1));
        }
        t.push(acc);
    }
    t
}

/// D_{d,m}(a_0, …, a_d) as an explicit polynomial.
#[derive(Clone, Debug)]
pub struct SymbolicHankel {
    pub d: usize,
    pub m: usize,
    pub poly: MPoly,
}

impl SymbolicHankel {
    pub fn eval(&self, coeffs: &[Rational]) -> Rational {
        self.poly.eval(coeffs)
    }

    pub fn term_count(&self) -> usize {
        self.poly.len()
    }
}

/// Determinant of a square matrix of polynomials via expansion over column
/// subsets (2^m·m products).
fn poly_det(matrix: &[Vec<MPoly>]) -> MPoly {
    let m = matrix.len();
    let nv = matrix[0][0].nvars();
    let mut layer: HashMap<u32, MPoly> = HashMap::new();
    layer.insert(0, MPoly::constant(nv, Rational::from(1)));
    for entries in matrix {
        let mut next: HashMap<u32, MPoly> = HashMap::new();
        for (&mask, minor) in &layer {
            for (col, entry) in entries.iter().enumerate() {
                if mask & (1 << col) != 0 || entry.is_empty() {
                    continue;
                }
                // sign of inserting `col` after the columns already used
                let above = (mask >> col).count_ones();
                let term = &(minor * entry).scale(&Rational::from(if above % 2 == 0 { 1 } else { -1 }));
                let slot = next.entry(mask | (1 << col)).or_insert_with(|| MPoly::zero(nv));
                *slot = &*slot + term;
            }
        }
        layer = next;
    }
    layer.remove(&((1u32 << m) - 1)).unwrap_or_else(|| MPoly::zero(nv))
}

fn build_symbolic(d: usize, m: usize) -> SymbolicHankel {
    let t = power_sums_symbolic(d, 2 * m - 2);
    let matrix: Vec<Vec<MPoly>> =
        (0..m).map(|i| (0..m).map(|j| t[i + j].clone()).collect()).collect();
    // det(T_{i+j}) = a_d^{m(m-1)} Δ_m
    let scaled = poly_det(&matrix);
    let extra = ((m - 1) * (m - 2)) as u32;
    SymbolicHankel { d, m, poly: scaled.div_var_pow(d, extra) }
}

type Cache = Mutex<HashMap<(usize, usize), Arc<SymbolicHankel>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The polynomial D_{d,m} = a_d^{2m−2}·det(S_{i+j}), built once per `(d, m)`.
pub fn hankel_symbolic(d: usize, m: usize) -> Result<Arc<SymbolicHankel>> {
    if m < 2 || m > d {
        return Err(Error::InvalidArgument(format!("minor size m={m} outside 2..={d}")));
    }
    let mut guard = cache().lock().expect("hankel cache poisoned");
    Ok(guard.entry((d, m)).or_insert_with(|| Arc::new(build_symbolic(d, m))).clone())
}

/// Power sums S_0, …, S_{k_max} of the roots of the polynomial with the given
/// coefficients (lowest degree first, nonzero leading coefficient).
pub fn power_sums(coeffs: &[Rational], k_max: usize) -> Vec<Rational> {
    let d = coeffs.len() - 1;
    let ad = &coeffs[d];
    assert!(*ad != 0, "leading coefficient must be nonzero");
    let mut s = vec![Rational::from(d as u64)];
    for k in 1..=k_max {
        let mut acc = Rational::new();
        for i in 1..k.min(d + 1) {
            acc -= Rational::from(&coeffs[d - i] * &s[k - i]);
        }
        if k <= d {
            acc -= Rational::from(&coeffs[d - k] * Integer::from(k));
        }
        s.push(acc / ad);
    }
    s
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::from(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return Rational::new();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let f = Rational::from(&a[r][col] / &p);
            for c in col..n {
                let sub = Rational::from(&f * &a[col][c]);
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Δ_m for the polynomial with the given coefficients.
pub fn hankel_delta(coeffs: &[Rational], m: usize) -> Rational {
    let s = power_sums(coeffs, 2 * m - 2);
    rational_det((0..m).map(|i| (0..m).map(|j| s[i + j].clone()).collect()).collect())
}

/// D_{d,m} = a_d^{2m−2}·Δ_m evaluated exactly without the symbolic expansion.
pub fn hankel_d_value(coeffs: &[Rational], m: usize) -> Rational {
    let ad = coeffs.last().unwrap();
    hankel_delta(coeffs, m) * Rational::from(ad.pow(2 * m as i32 - 2))
}

/// Exact values of 𝒟_{d,m}(n) for m = 2..d and the resulting verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelVerdict {
    pub d: usize,
    pub n: usize,
    pub values: Vec<Rational>,
    pub hyperbolic: bool,
}

/// Evaluates D_{d,m} at J^{d,n}/p(n) for every m and applies Hermite's criterion
/// (hyperbolic iff every value is ≥ 0).
pub fn hankel_verdict(spec: JensenSpec, table: &PartitionTable) -> Result<HankelVerdict> {
    let ints = jensen_coeffs(spec, table)?;
    let pn = table.get(spec.n)?;
    let coeffs: Vec<Rational> = ints.iter().map(|c| Rational::from((c.clone(), pn.clone()))).collect();
    let values: Vec<Rational> = (2..=spec.d).map(|m| hankel_d_value(&coeffs, m)).collect();
    let hyperbolic = values.iter().all(|v| *v >= 0);
    Ok(HankelVerdict { d: spec.d, n: spec.n, values, hyperbolic })
}

fn check_hermite_args(d: usize, m: usize) -> Result<()> {
    if m < 2 || m > d || d > 12 {
        return Err(Error::InvalidArgument(format!("need 2 <= m <= d <= 12, got d={d}, m={m}")));
    }
    Ok(())
}

/// Δ_m(H_d) for the monic Hermite polynomials of e^{tX−t²}.
pub fn hermite_hankel_exact(d: usize, m: usize) -> Result<Rational> {
    check_hermite_args(d, m)?;
    Ok(hankel_delta(hermite_poly(d).coeffs(), m))
}

/// Δ_m(H_d) for the physicists' Hermite polynomials with leading coefficient 2^d.
pub fn hermite_hankel_physicists(d: usize, m: usize) -> Result<Rational> {
    check_hermite_args(d, m)?;
    Ok(hankel_delta(hermite_poly_physicists(d).coeffs(), m))
}

/// Evaluates a polynomial given as an [`ExactPoly`] through the symbolic D_{d,m}.
pub fn hankel_symbolic_value(p: &ExactPoly, m: usize) -> Result<Rational> {
    let d = p.degree().ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
    let h = hankel_symbolic(d, m)?;
    Ok(h.eval(p.coeffs()))
}
