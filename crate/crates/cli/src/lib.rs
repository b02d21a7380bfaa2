//! Commands behind the `pjensen` binary. Each returns a typed result plus a
//! JSON document form in which every number is a decimal string.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pjensen_core::certifier::{
    certify_threshold, chen_certificate, chen_direct_check, check_document, general_bound_report,
    CertificateCheckError, CertificateConfig, CertificateDocument, ChenCertificate, ChenDirectReport,
    CheckReport, GeneralBoundReport, HyperbolicityCertificate,
};
use pjensen_core::exact::{is_hyperbolic_sturm, jensen_poly, JensenSpec, PartitionTable};
use pjensen_core::hankel::hankel_verdict;
use pjensen_core::interval::float_to_decimal;
use pjensen_core::Error;

pub const MAX_SWEEP_DEGREE: usize = 8;
pub const MAX_BOUND_DEGREE: usize = 100;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments or unparseable input.
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Invariant(String),
    /// A counterexample was found or a certificate did not verify.
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Schema(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Core(Error::InvalidArgument(_) | Error::Parse(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Worker count; 0 means one per available core.
pub fn resolve_jobs(jobs: usize) -> usize {
    if jobs > 0 {
        jobs
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Hankel,
    Sturm,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Hankel => "hankel",
            Method::Sturm => "sturm",
            Method::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "hankel" => Ok(Method::Hankel),
            "sturm" => Ok(Method::Sturm),
            "both" => Ok(Method::Both),
            _ => Err(CliError::Usage(format!("unknown method {s:?}; expected hankel, sturm or both"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub d: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Sorted shifts n whose Jensen polynomial is not hyperbolic.
    pub failures: Vec<usize>,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDocument {
    pub d: String,
    pub n_min: String,
    pub n_max: String,
    pub failures: Vec<String>,
    pub method: Method,
}

impl SweepResult {
    pub fn to_document(&self) -> SweepDocument {
        SweepDocument {
            d: self.d.to_string(),
            n_min: self.n_min.to_string(),
            n_max: self.n_max.to_string(),
            failures: self.failures.iter().map(ToString::to_string).collect(),
            method: self.method,
        }
    }
}

fn check_n(d: usize, n: usize, table: &PartitionTable, method: Method) -> CliResult<bool> {
    let spec = JensenSpec::new(d, n)?;
    let hankel = || hankel_verdict(spec, table).map(|v| v.hyperbolic);
    let sturm = || jensen_poly(spec, table).and_then(|p| is_hyperbolic_sturm(&p));
    Ok(match method {
        Method::Hankel => hankel()?,
        Method::Sturm => sturm()?,
        Method::Both => {
            let (h, s) = (hankel()?, sturm()?);
            if h != s {
                return Err(CliError::Failed(format!(
                    "criteria disagree at d={d}, n={n}: hankel says {h}, sturm says {s}"
                )));
            }
            h
        }
    })
}

/// Exact hyperbolicity check of J^{d,n} for every n in [n_min, n_max], using a
/// prebuilt table. Contiguous blocks go to the workers; results are merged in
/// block order, so the output does not depend on `jobs`.
pub fn sweep_with_table(
    table: &PartitionTable,
    d: usize,
    n_min: usize,
    n_max: usize,
    method: Method,
    jobs: usize,
) -> CliResult<SweepResult> {
    if !(1..=MAX_SWEEP_DEGREE).contains(&d) {
        return Err(CliError::Usage(format!("d must be in [1, {MAX_SWEEP_DEGREE}], got {d}")));
    }
    if n_max < n_min {
        return Err(CliError::Usage(format!("empty range [{n_min}, {n_max}]")));
    }
    table.require(n_max + d)?;
    let jobs = resolve_jobs(jobs);
    let len = n_max - n_min + 1;
    let block = len.div_ceil(jobs).max(1);
    let blocks: Vec<(usize, usize)> = (n_min..=n_max)
        .step_by(block)
        .map(|lo| (lo, (lo + block - 1).min(n_max)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let parts: Vec<CliResult<Vec<usize>>> = pool.install(|| {
        blocks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut fails = Vec::new();
                for n in lo..=hi {
                    if !check_n(d, n, table, method)? {
                        fails.push(n);
                    }
                }
                Ok(fails)
            })
            .collect()
    });
    let mut failures = Vec::new();
    for p in parts {
        failures.extend(p?);
    }
    Ok(SweepResult { d, n_min, n_max, failures, method })
}

pub fn sweep(d: usize, n_min: usize, n_max: usize, method: Method, jobs: usize) -> CliResult<SweepResult> {
    let table = PartitionTable::new(n_max + d)?;
    sweep_with_table(&table, d, n_min, n_max, method, jobs)
}

// ---------------------------------------------------------------------------
// certify / find-n

pub fn certify(cfg: &CertificateConfig) -> CliResult<HyperbolicityCertificate> {
    Ok(certify_threshold(cfg)?)
}

#[derive(Clone, Debug)]
pub struct NdResult {
    pub d: usize,
    pub n_of_d: usize,
    pub certificate: HyperbolicityCertificate,
    pub sweep: SweepResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NdDocument {
    pub d: String,
    #[serde(rename = "N_of_d")]
    pub n_of_d: String,
    pub certificate: CertificateDocument,
    pub sweep: SweepDocument,
}

impl NdResult {
    pub fn to_document(&self, timestamp: &str) -> NdDocument {
        NdDocument {
            d: self.d.to_string(),
            n_of_d: self.n_of_d.to_string(),
            certificate: self.certificate.to_document(timestamp),
            sweep: self.sweep.to_document(),
        }
    }
}

/// Certifies the tail n > n0, then checks every n in [1, n0] exactly.
pub fn find_n(cfg: &CertificateConfig, method: Method, jobs: usize) -> CliResult<NdResult> {
    let certificate = certify(cfg)?;
    if !certificate.verified {
        return Err(CliError::Failed(format!(
            "certification failed for d={} at epsilon={}:\n  {}",
            cfg.d,
            cfg.epsilon,
            certificate.diagnostics.join("\n  ")
        )));
    }
    let n0 = usize::try_from(certificate.threshold_n0)
        .map_err(|_| CliError::Usage("threshold does not fit in memory".into()))?;
    let sweep = sweep(cfg.d, 1, n0.max(1), method, jobs)?;
    let n_of_d = sweep.failures.last().map_or(1, |n| n + 1);
    Ok(NdResult { d: cfg.d, n_of_d, certificate, sweep })
}

// ---------------------------------------------------------------------------
// chen

#[derive(Clone, Debug)]
pub struct ChenReport {
    pub direct: ChenDirectReport,
    pub tail: ChenCertificate,
}

impl ChenReport {
    pub fn holds(&self) -> bool {
        self.direct.failures.is_empty()
            && self.tail.verified
            && self.direct.n_max as u64 >= self.tail.threshold_n0
    }

    pub fn to_document(&self, timestamp: &str) -> ChenDocument {
        let t = &self.tail;
        ChenDocument {
            n_min: self.direct.n_min.to_string(),
            n_max: self.direct.n_max.to_string(),
            failures: self.direct.failures.iter().map(ToString::to_string).collect(),
            s: t.s.to_string(),
            epsilon: t.epsilon.clone(),
            precision_bits: t.precision.to_string(),
            error_bounds: t.error_bounds.iter().map(|b| (b.j.to_string(), float_to_decimal(&b.total))).collect(),
            leading_coefficient: [float_to_decimal(t.tail.leading.lo()), float_to_decimal(t.tail.leading.hi())],
            leading_matches: t.leading_matches,
            margin_lower: float_to_decimal(t.tail.margin.lo()),
            strict_margin_lower: float_to_decimal(t.strict_tail.margin.lo()),
            threshold_n0: t.threshold_n0.to_string(),
            tail_verified: t.verified,
            holds: self.holds(),
            timestamp: timestamp.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChenDocument {
    pub n_min: String,
    pub n_max: String,
    pub failures: Vec<String>,
    pub s: String,
    pub epsilon: String,
    pub precision_bits: String,
    pub error_bounds: Vec<(String, String)>,
    pub leading_coefficient: [String; 2],
    pub leading_matches: bool,
    pub margin_lower: String,
    pub strict_margin_lower: String,
    pub threshold_n0: String,
    pub tail_verified: bool,
    pub holds: bool,
    pub timestamp: String,
}

pub fn chen(n_max: usize, s: usize, epsilon: &str, precision: u32) -> CliResult<ChenReport> {
    if n_max < 2 {
        return Err(CliError::Usage(format!("direct range must reach n = 2, got {n_max}")));
    }
    let table = PartitionTable::new(n_max + 2)?;
    let direct = chen_direct_check(&table, n_max)?;
    let tail = chen_certificate(s, epsilon, precision)?;
    Ok(ChenReport { direct, tail })
}

// ---------------------------------------------------------------------------
// bound

pub fn bound(d: usize) -> CliResult<GeneralBoundReport> {
    if !(2..=MAX_BOUND_DEGREE).contains(&d) {
        return Err(CliError::Usage(format!("d must be in [2, {MAX_BOUND_DEGREE}], got {d}")));
    }
    Ok(general_bound_report(d)?)
}

// ---------------------------------------------------------------------------
// check-cert

/// Parses and re-checks a serialized certificate.
///
/// Malformed JSON maps to [`CliError::Usage`], well-formed JSON of the wrong
/// shape to [`CliError::Schema`], and false claims to [`CliError::Invariant`].
pub fn check_certificate_text(text: &str) -> CliResult<CheckReport> {
    use serde_json::error::Category;
    let doc: CertificateDocument = serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Data => CliError::Schema(format!("certificate schema mismatch: {e}")),
        Category::Syntax | Category::Eof | Category::Io => CliError::Usage(format!("malformed certificate: {e}")),
    })?;
    check_document(&doc).map_err(|e| match e {
        CertificateCheckError::Schema(m) => CliError::Schema(m),
        CertificateCheckError::Invariant(m) => CliError::Invariant(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_independent_of_jobs() {
        let table = PartitionTable::new(210).unwrap();
        let one = sweep_with_table(&table, 3, 1, 200, Method::Both, 1).unwrap();
        for jobs in [2, 3, 7, 64] {
            assert_eq!(sweep_with_table(&table, 3, 1, 200, Method::Both, jobs).unwrap(), one);
        }
        assert_eq!(*one.failures.last().unwrap(), 93);
    }

    #[test]
    fn sweep_examples() {
        let r = sweep(3, 90, 100, Method::Both, 2).unwrap();
        // odd n only: the even shifts in this range are hyperbolic
        assert_eq!(r.failures, vec![91, 93]);
        let r = sweep(2, 1, 50, Method::Hankel, 0).unwrap();
        assert_eq!(r.failures.last(), Some(&24));
        assert_eq!(r.to_document().failures.last().map(String::as_str), Some("24"));
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert_eq!(sweep(3, 10, 5, Method::Both, 1).unwrap_err().exit_code(), 2);
        assert_eq!(sweep(9, 1, 5, Method::Both, 1).unwrap_err().exit_code(), 2);
        assert_eq!(sweep(0, 1, 5, Method::Both, 1).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("sturm".parse::<Method>().unwrap(), Method::Sturm);
        assert!("newton".parse::<Method>().is_err());
        assert_eq!(Method::Both.to_string(), "both");
    }

    #[test]
    fn find_n_degree_two() {
        let mut cfg = CertificateConfig::new(2);
        cfg.epsilon = "0.0295".into();
        let r = find_n(&cfg, Method::Both, 2).unwrap();
        assert_eq!(r.n_of_d, 25);
        assert_eq!(r.certificate.threshold_n0, 174);
        assert_eq!(r.sweep.n_max, 174);
        let doc = r.to_document("t");
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"N_of_d\":\"25\""));
    }

    #[test]
    fn certificate_text_errors() {
        assert_eq!(check_certificate_text("{\"schema_version\": ").unwrap_err().exit_code(), 2);
        assert_eq!(check_certificate_text("{\"schema_version\": 1}").unwrap_err().exit_code(), 3);
        assert_eq!(check_certificate_text("[]").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn bound_range() {
        assert!(bound(1).is_err());
        assert!(bound(3).unwrap().chain_ok);
    }
}
