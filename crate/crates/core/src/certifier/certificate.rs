//! Threshold certificates for hyperbolicity of J^{d,n} for all large n.
//!
//! With a_j = C(d,j)·p(n+j)/p(n) = C(d,j)·(A_s(j,w) + E_j w^s) and
//! |E_j| ≤ B_j on [0, ε], 𝒟_{d,m}(n) becomes a polynomial in w whose
//! coefficients are polynomials in the E_j. The coefficients below
//! w^k, k = 3m(m−1)/2, vanish; dividing by w^k and replacing every
//! coefficient from w^{k+2} on by a lower bound that is ≤ 0 leaves a
//! polynomial with a single sign change, so positivity at ε gives positivity
//! on all of [0, ε].

use rug::Float;
use serde::{Deserialize, Serialize};

use super::errpoly::{split_coefficients, CoefficientSplit, ErrorPoly};
use super::series::taylor_of_r;
use super::sup::{taylor_error_bound, SupStrategy, TaylorErrorBound};
use crate::asymptotics::ShiftRatio;
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::hankel::{hankel_symbolic, hermite_hankel_physicists};
use crate::interval::{float_from_decimal, float_to_decimal, Interval};

pub const SCHEMA_VERSION: &str = "1";
pub const ESCALATED_PRECISION: u32 = 256;
/// Relative width below which a coefficient under w^k counts as cancelled.
pub const CANCELLATION_TOL: f64 = 1e-10;

/// Default ε per degree.
pub fn default_epsilon(d: usize) -> &'static str {
    match d {
        0..=2 => "0.0295",
        3 => "0.021",
        4 => "0.0163",
        5 => "0.0081",
        _ => "0.001",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateConfig {
    pub d: usize,
    pub s: usize,
    /// Decimal representation of ε.
    pub epsilon: String,
    pub sup_strategy: SupStrategy,
    pub precision: u32,
}

impl CertificateConfig {
    pub fn new(d: usize) -> Self {
        CertificateConfig {
            d,
            s: 10,
            epsilon: default_epsilon(d).to_string(),
            sup_strategy: SupStrategy::BranchAndBound,
            precision: crate::interval::DEFAULT_PRECISION,
        }
    }

    pub fn epsilon_interval(&self, prec: u32) -> Result<Interval> {
        Interval::from_decimal(&self.epsilon, prec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 || self.d > super::errpoly::MAX_SYMBOLS {
            return Err(Error::InvalidArgument(format!(
                "degree {} outside 2..={}",
                self.d,
                super::errpoly::MAX_SYMBOLS
            )));
        }
        if self.s < 2 {
            return Err(Error::InvalidArgument(format!("Taylor order s = {} must be ≥ 2", self.s)));
        }
        if self.precision < 64 {
            return Err(Error::InvalidArgument(format!("precision {} below 64 bits", self.precision)));
        }
        let e = self.epsilon_interval(self.precision)?;
        // ε ≤ 1/√c ⟺ c·ε² ≤ 1
        let ce2 = &Interval::c(self.precision) * &e.sqr();
        if !e.is_positive() || ce2.hi() > &1 {
            return Err(Error::InvalidArgument(format!(
                "epsilon {} must satisfy 0 < ε ≤ 1/√c",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// floor(1/(cε²) + 1/24), rounded up when the enclosure straddles an integer.
pub fn threshold_for_epsilon(epsilon: &str, prec: u32) -> Result<u64> {
    let e = Interval::from_decimal(epsilon, prec)?;
    let v = &(&Interval::c(prec) * &e.sqr()).recip()? + &Interval::one(prec).div_i64(24);
    let hi = v.hi().clone().floor();
    hi.to_integer()
        .and_then(|i| i.to_u64())
        .ok_or_else(|| Error::Domain(format!("threshold for epsilon {epsilon} is not representable")))
}

/// Number of sign changes, ignoring zeros.
pub fn sign_changes(coeffs: &[Float]) -> usize {
    let mut last = 0;
    let mut count = 0;
    for c in coeffs {
        let s = match c.cmp0() {
            Some(std::cmp::Ordering::Greater) => 1,
            Some(std::cmp::Ordering::Less) => -1,
            _ => 0,
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Horner evaluation of a polynomial with exact float coefficients.
pub fn eval_lower_poly(coeffs: &[Float], x: &Interval) -> Interval {
    let prec = x.prec().max(coeffs.iter().map(Float::prec).max().unwrap_or(0));
    let mut acc = Interval::zero(prec);
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + &Interval::point(c.clone());
    }
    acc
}

/// 𝒟_{d,m} expanded with error symbols and reduced to a certified lower bound.
#[derive(Clone, Debug)]
pub struct ExpandedHankel {
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub split: CoefficientSplit,
    /// Largest |enclosure| among the coefficients of w^i, i < k.
    pub cancellation_residual: Float,
    /// Lower-bound coefficients of 𝒟_{d,m}/w^k, lowest power first.
    pub lower: Vec<Float>,
    pub max_symbol_degree: u32,
}

impl ExpandedHankel {
    /// Error-free coefficient of w^k.
    pub fn c0(&self) -> &Interval {
        &self.split.pure[self.k]
    }

    pub fn c1(&self) -> &Interval {
        &self.split.pure[self.k + 1]
    }
}

/// The substitutions a_0 = 1, a_j = C(d,j)·(A_s(j,w) + E_j w^s).
pub fn jensen_substitutions(d: usize, s: usize, prec: u32) -> Result<Vec<ErrorPoly>> {
    let mut subs = vec![ErrorPoly::one(d, prec)];
    for j in 1..=d {
        let b = Interval::from_integer(&binomial(d, j), prec);
        let a = taylor_of_r(&ShiftRatio::new(j as i64, prec), s)?;
        let series = a.coeffs().iter().map(|c| c * &b).collect();
        subs.push(ErrorPoly::with_error(d, series, j - 1, s, b));
    }
    Ok(subs)
}

/// Checks that every coefficient of w^i, i < k, encloses 0 and is negligible
/// against c_0; returns the largest magnitude seen.
pub fn check_cancellation(p: &ErrorPoly, d: usize, m: usize, k: usize) -> Result<Float> {
    let pure = p.pure();
    let c0 = pure.get(k).ok_or_else(|| Error::Cancellation {
        d,
        m,
        power: k,
        detail: "expansion has no w^k term".into(),
    })?;
    if c0.contains_zero() {
        return Err(Error::Cancellation { d, m, power: k, detail: format!("c_0 = {c0:?} is not separated from 0") });
    }
    let limit = Float::with_val(c0.prec(), c0.mig() * CANCELLATION_TOL);
    let mut residual = Float::with_val(c0.prec(), 0);
    for (key, v) in p.terms() {
        for (i, c) in v.iter().enumerate().take(k) {
            if !c.contains_zero() || c.width() >= limit {
                return Err(Error::Cancellation {
                    d,
                    m,
                    power: i,
                    detail: format!("coefficient {c:?} of w^{i} (error exponents {key:?}) does not vanish"),
                });
            }
            residual = residual.max(&c.mag());
        }
    }
    Ok(residual)
}

/// Lower-bound coefficients of 𝒟/w^k: w^0 and w^1 keep their error-free part
/// minus the error mass, later powers are additionally capped at 0.
pub fn minimize_coefficients(split: &CoefficientSplit, k: usize) -> Vec<Float> {
    (k..split.pure.len())
        .map(|i| {
            let v = &split.pure[i] - &Interval::point(split.error_mass[i].clone());
            let lo = v.lo().clone();
            if i >= k + 2 && lo > 0 {
                Float::with_val(lo.prec(), 0)
            } else {
                lo
            }
        })
        .collect()
}

pub fn expand_d_with_errors(cfg: &CertificateConfig, m: usize, bounds: &[Float]) -> Result<ExpandedHankel> {
    let d = cfg.d;
    let sym = hankel_symbolic(d, m)?;
    let subs = jensen_substitutions(d, cfg.s, cfg.precision)?;
    let p = ErrorPoly::substitute(&sym.poly, &subs)?;
    let k = 3 * m * (m - 1) / 2;
    let cancellation_residual = check_cancellation(&p, d, m, k)?;
    let split = split_coefficients(&p, bounds)?;
    if split.pure.len() < k + 2 {
        return Err(Error::Cancellation { d, m, power: k + 1, detail: "expansion too short".into() });
    }
    let lower = minimize_coefficients(&split, k);
    Ok(ExpandedHankel { d, m, k, split, cancellation_residual, lower, max_symbol_degree: p.max_symbol_degree() })
}

/// (c/√2)^{m(m−1)}·Δ_m(H_d), the limit of 𝒟_{d,m}(n)/w^k.
///
/// The limit holds for Hermite polynomials with roots of the physicists'
/// normalization (H_2 = 4X² − 2, roots ±1/√2). Monic H_d from e^{tX−t²} has
/// roots twice as large, so its Δ_m is 2^{m(m−1)} times bigger.
pub fn leading_constant(d: usize, m: usize, prec: u32) -> Result<Interval> {
    let delta = hermite_hankel_physicists(d, m)?;
    let half_c2 = Interval::c(prec).sqr().div_i64(2);
    Ok(&half_c2.powi((m * (m - 1) / 2) as u32) * &Interval::from_rational(&delta, prec))
}

#[derive(Clone, Debug)]
pub struct MinorCertificate {
    pub m: usize,
    pub k: usize,
    pub c0: Interval,
    pub c1: Interval,
    pub coefficients: Vec<Float>,
    pub value_at_epsilon: Interval,
    pub sign_changes: usize,
    pub cancellation_residual: Float,
    pub verified: bool,
}

impl MinorCertificate {
    fn from_expansion(e: &ExpandedHankel, eps: &Interval) -> Self {
        let value = eval_lower_poly(&e.lower, eps);
        let changes = sign_changes(&e.lower);
        let verified = e.lower[0] > 0 && changes <= 1 && value.is_positive();
        MinorCertificate {
            m: e.m,
            k: e.k,
            c0: e.c0().clone(),
            c1: e.c1().clone(),
            coefficients: e.lower.clone(),
            value_at_epsilon: value,
            sign_changes: changes,
            cancellation_residual: e.cancellation_residual.clone(),
            verified,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HyperbolicityCertificate {
    pub config: CertificateConfig,
    pub error_bounds: Vec<TaylorErrorBound>,
    pub per_m: Vec<MinorCertificate>,
    pub threshold_n0: u64,
    pub verified: bool,
    pub diagnostics: Vec<String>,
}

fn certify_once(cfg: &CertificateConfig) -> Result<HyperbolicityCertificate> {
    let prec = cfg.precision;
    let eps = cfg.epsilon_interval(prec)?;
    let mut error_bounds = Vec::with_capacity(cfg.d);
    let mut diagnostics = Vec::new();
    for j in 1..=cfg.d {
        let b = taylor_error_bound(&ShiftRatio::new(j as i64, prec), cfg.s, &eps, cfg.sup_strategy)?;
        if !b.derivative.converged {
            diagnostics.push(format!("j={j}: derivative bound did not converge; using the coarse enclosure"));
        }
        error_bounds.push(b);
    }
    let bounds: Vec<Float> = error_bounds.iter().map(|b| b.total.clone()).collect();
    let mut per_m = Vec::new();
    for m in 2..=cfg.d {
        let e = expand_d_with_errors(cfg, m, &bounds)?;
        let mc = MinorCertificate::from_expansion(&e, &eps);
        if !mc.verified {
            diagnostics.push(format!(
                "d={} m={}: lower bound not positive on [0, ε] (value at ε {:.6e}, {} sign changes); choose smaller epsilon",
                cfg.d,
                m,
                mc.value_at_epsilon.lo().to_f64(),
                mc.sign_changes
            ));
        }
        per_m.push(mc);
    }
    let verified = per_m.iter().all(|m| m.verified);
    Ok(HyperbolicityCertificate {
        config: cfg.clone(),
        error_bounds,
        per_m,
        threshold_n0: threshold_for_epsilon(&cfg.epsilon, prec)?,
        verified,
        diagnostics,
    })
}

/// Runs the certification, retrying once at higher precision when a
/// cancellation check or a sign test is inconclusive.
pub fn certify_threshold(cfg: &CertificateConfig) -> Result<HyperbolicityCertificate> {
    cfg.validate()?;
    let first = certify_once(cfg);
    let escalate = cfg.precision < ESCALATED_PRECISION
        && match &first {
            Ok(c) => !c.verified,
            Err(Error::Cancellation { .. }) => true,
            Err(_) => false,
        };
    if !escalate {
        return first;
    }
    let mut high = cfg.clone();
    high.precision = ESCALATED_PRECISION;
    let mut cert = certify_once(&high)?;
    cert.diagnostics.insert(0, format!("escalated from {} to {} bits", cfg.precision, ESCALATED_PRECISION));
    Ok(cert)
}

// ---------------------------------------------------------------------------
// Serialized form. Every number is a decimal string.

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorBoundEntry {
    pub j: String,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinorEntry {
    pub m: String,
    pub k: String,
    pub coefficients: Vec<String>,
    pub value_at_epsilon: String,
    pub sign_changes: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema_version: String,
    pub d: String,
    pub s: String,
    pub epsilon: String,
    pub precision_bits: String,
    pub sup_strategy: SupStrategy,
    pub error_bounds: Vec<ErrorBoundEntry>,
    pub per_m: Vec<MinorEntry>,
    pub threshold_n0: String,
    pub verified: bool,
    pub timestamp: String,
}

impl HyperbolicityCertificate {
    pub fn to_document(&self, timestamp: &str) -> CertificateDocument {
        CertificateDocument {
            schema_version: SCHEMA_VERSION.into(),
            d: self.config.d.to_string(),
            s: self.config.s.to_string(),
            epsilon: self.config.epsilon.clone(),
            precision_bits: self.config.precision.to_string(),
            sup_strategy: self.config.sup_strategy,
            error_bounds: self
                .error_bounds
                .iter()
                .map(|b| ErrorBoundEntry { j: b.j.to_string(), bound: float_to_decimal(&b.total) })
                .collect(),
            per_m: self
                .per_m
                .iter()
                .map(|m| MinorEntry {
                    m: m.m.to_string(),
                    k: m.k.to_string(),
                    coefficients: m.coefficients.iter().map(float_to_decimal).collect(),
                    value_at_epsilon: float_to_decimal(m.value_at_epsilon.lo()),
                    sign_changes: m.sign_changes.to_string(),
                })
                .collect(),
            threshold_n0: self.threshold_n0.to_string(),
            verified: self.verified,
            timestamp: timestamp.into(),
        }
    }
}

/// Why a serialized certificate was rejected.
#[derive(Debug, thiserror::Error)]
pub enum CertificateCheckError {
    /// A field is missing, malformed, or inconsistent with the schema.
    #[error("schema mismatch: {0}")]
    Schema(String),
    /// The document is well formed but one of its claims does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Outcome of checking a well-formed certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    /// True when the document claims verification and every claim holds.
    pub verified: bool,
    pub threshold_n0: u64,
}

fn parse_num<T: std::str::FromStr>(field: &str, v: &str) -> std::result::Result<T, CertificateCheckError> {
    v.parse().map_err(|_| CertificateCheckError::Schema(format!("{field} = {v:?} is not a valid number")))
}

/// Re-checks the claims of a certificate without recomputing error bounds:
/// sign pattern, positivity at ε, the threshold formula, and consistency of
/// the `verified` flag.
pub fn check_document(doc: &CertificateDocument) -> std::result::Result<CheckReport, CertificateCheckError> {
    use CertificateCheckError::{Invariant, Schema};
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Schema(format!("unsupported schema_version {:?}", doc.schema_version)));
    }
    let d: usize = parse_num("d", &doc.d)?;
    let s: usize = parse_num("s", &doc.s)?;
    let prec: u32 = parse_num("precision_bits", &doc.precision_bits)?;
    let n0: u64 = parse_num("threshold_n0", &doc.threshold_n0)?;
    if !(2..=super::errpoly::MAX_SYMBOLS).contains(&d) || s < 2 || !(64..=1 << 16).contains(&prec) {
        return Err(Schema(format!("parameters d={d}, s={s}, precision={prec} out of range")));
    }
    let eps = Interval::from_decimal(&doc.epsilon, prec).map_err(|e| Schema(format!("epsilon: {e}")))?;
    let expected_n0 = threshold_for_epsilon(&doc.epsilon, prec).map_err(|e| Schema(e.to_string()))?;
    if n0 != expected_n0 {
        return Err(Invariant(format!("threshold_n0 {n0} differs from floor(1/(cε²) + 1/24) = {expected_n0}")));
    }
    let js: Vec<usize> = doc.error_bounds.iter().map(|b| parse_num("j", &b.j)).collect::<std::result::Result<_, _>>()?;
    if js != (1..=d).collect::<Vec<_>>() {
        return Err(Schema(format!("error_bounds must list j = 1..{d}")));
    }
    for b in &doc.error_bounds {
        let v = float_from_decimal(&b.bound, prec, rug::float::Round::Down).map_err(|e| Schema(e.to_string()))?;
        if !(v >= 0) {
            return Err(Invariant(format!("error bound for j={} is negative", b.j)));
        }
    }
    let ms: Vec<usize> = doc.per_m.iter().map(|m| parse_num("m", &m.m)).collect::<std::result::Result<_, _>>()?;
    if ms != (2..=d).collect::<Vec<_>>() {
        return Err(Schema(format!("per_m must list m = 2..{d}")));
    }
    let mut all_ok = true;
    for entry in &doc.per_m {
        let m: usize = parse_num("m", &entry.m)?;
        let k: usize = parse_num("k", &entry.k)?;
        if k != 3 * m * (m - 1) / 2 {
            return Err(Invariant(format!("m={m}: k = {k}, expected {}", 3 * m * (m - 1) / 2)));
        }
        if entry.coefficients.len() < 2 {
            return Err(Schema(format!("m={m}: fewer than two coefficients")));
        }
        let coeffs: Vec<Float> = entry
            .coefficients
            .iter()
            .map(|c| float_from_decimal(c, prec, rug::float::Round::Down))
            .collect::<Result<_>>()
            .map_err(|e| Schema(format!("m={m}: {e}")))?;
        let changes = sign_changes(&coeffs);
        let stored: usize = parse_num("sign_changes", &entry.sign_changes)?;
        if stored != changes {
            return Err(Invariant(format!("m={m}: stored {stored} sign changes, found {changes}")));
        }
        let value = eval_lower_poly(&coeffs, &eps);
        let ok = coeffs[0] > 0 && changes <= 1 && value.is_positive();
        if doc.verified && !ok {
            return Err(Invariant(format!(
                "m={m}: claimed verified but c_0 > 0, ≤ 1 sign change, positive value at ε do not all hold"
            )));
        }
        all_ok &= ok;
    }
    if !doc.verified && all_ok {
        return Err(Invariant("marked unverified although every check passes".into()));
    }
    Ok(CheckReport { verified: doc.verified, threshold_n0: n0 })
}
