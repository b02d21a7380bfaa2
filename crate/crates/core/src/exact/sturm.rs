//! Real-root counting with exact Sturm sequences.

use rug::Integer;

use super::poly::ExactPoly;
use crate::error::{Error, Result};

type IntPoly = Vec<Integer>;

fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
}

/// Divides out the (positive) gcd of the coefficients.
fn strip_content(p: &mut IntPoly) {
    let mut g = Integer::new();
    for c in p.iter() {
        g.gcd_mut(c);
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for c in p.iter_mut() {
            c.div_exact_mut(&g);
        }
    }
}

/// Pseudo-remainder of `a` by `b`, scaled by a positive multiple of lc(b)^{δ+1}
/// so its sign agrees with the true remainder.
fn signed_prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r <- lb * r - lr * X^{dr-db} * b
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= Integer::from(&lr * bc);
        }
        trim(&mut r);
        if lb < 0 {
            for c in r.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        strip_content(&mut r);
    }
    r
}

fn sign_at_pos_inf(p: &IntPoly) -> i32 {
    p.last().map_or(0, |c| c.cmp0() as i32)
}

fn sign_at_neg_inf(p: &IntPoly) -> i32 {
    let s = sign_at_pos_inf(p);
    if (p.len() - 1) % 2 == 1 { -s } else { s }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm chain P, P', −rem(P, P'), … with each member reduced to primitive form.
pub fn sturm_chain(p: &ExactPoly) -> Result<Vec<IntPoly>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("Sturm chain of the zero polynomial".into()));
    }
    let mut p0 = p.to_integer_coeffs();
    strip_content(&mut p0);
    let mut p1 = p.derivative().to_integer_coeffs();
    strip_content(&mut p1);
    let mut chain = vec![p0];
    if p1.is_empty() {
        return Ok(chain);
    }
    chain.push(p1);
    loop {
        let n = chain.len();
        let mut r = signed_prem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -std::mem::take(c);
        }
        chain.push(r);
    }
    Ok(chain)
}

/// Number of distinct real roots.
pub fn sturm_real_root_count(p: &ExactPoly) -> Result<usize> {
    let chain = sturm_chain(p)?;
    let neg = variations(chain.iter().map(sign_at_neg_inf));
    let pos = variations(chain.iter().map(sign_at_pos_inf));
    Ok(neg - pos)
}

/// Degree of the squarefree part of `p`, i.e. deg p − deg gcd(p, p′).
pub fn squarefree_degree(p: &ExactPoly) -> Result<usize> {
    let chain = sturm_chain(p)?;
    let deg = chain[0].len() - 1;
    if chain.len() == 1 {
        return Ok(deg);
    }
    let g = chain.last().unwrap();
    Ok(deg - (g.len() - 1))
}

/// True iff every root of `p` is real (repeated roots allowed).
pub fn is_hyperbolic_sturm(p: &ExactPoly) -> Result<bool> {
    let chain = sturm_chain(p)?;
    let deg = chain[0].len() - 1;
    let gcd_deg = if chain.len() == 1 { 0 } else { chain.last().unwrap().len() - 1 };
    let neg = variations(chain.iter().map(sign_at_neg_inf));
    let pos = variations(chain.iter().map(sign_at_pos_inf));
    Ok(neg - pos == deg - gcd_deg)
}
