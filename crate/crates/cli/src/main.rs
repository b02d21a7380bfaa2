use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use pjensen_cli::{
    bound, certify, check_certificate_text, chen, find_n, sweep, timestamp, CliError, CliResult, Method,
};
use pjensen_core::certifier::{
    default_epsilon, CertificateConfig, SupStrategy, CHEN_DEFAULT_DIRECT, CHEN_DEFAULT_EPSILON, CHEN_DEFAULT_S,
};
use pjensen_core::exact::{is_hyperbolic_sturm, jensen_poly, JensenSpec, PartitionTable};
use pjensen_core::hankel::hankel_verdict;
use pjensen_core::interval::DEFAULT_PRECISION;

#[derive(Parser)]
#[command(name = "pjensen", version, about = "Hyperbolicity of Jensen polynomials of the partition function")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Output {
    /// Write the JSON document to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON document instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct CertArgs {
    #[arg(long)]
    d: usize,
    /// Taylor order.
    #[arg(long, default_value_t = 10)]
    s: usize,
    /// Right end of [0, ε]; defaults to the per-degree choice.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Derivative bound strategy: bnb or lemma41.
    #[arg(long, default_value = "bnb")]
    sup: SupStrategy,
}

impl CertArgs {
    fn config(&self) -> CertificateConfig {
        CertificateConfig {
            d: self.d,
            s: self.s,
            epsilon: self.epsilon.clone().unwrap_or_else(|| default_epsilon(self.d).to_string()),
            sup_strategy: self.sup,
            precision: self.precision,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact hyperbolicity check for every n in a range.
    Sweep {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value = "both")]
        method: Method,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Certify the tail and sweep below it to determine N(d).
    FindN {
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long, default_value = "both")]
        method: Method,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Produce a positivity certificate for n beyond a threshold.
    Certify {
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Re-check a serialized certificate.
    CheckCert { path: PathBuf },
    /// Verify the ratio inequality for u_n = p(n+1)p(n−1)/p(n)².
    Chen {
        /// Last n checked exactly.
        #[arg(long, default_value_t = CHEN_DEFAULT_DIRECT as usize)]
        n_max: usize,
        #[arg(long, default_value_t = CHEN_DEFAULT_S)]
        s: usize,
        #[arg(long, default_value = CHEN_DEFAULT_EPSILON)]
        epsilon: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the explicit bound on N(d) for general d.
    Bound {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Print p(n).
    Partition { n: usize },
    /// Print J^{d,n}(X) and its hyperbolicity under both criteria.
    Jensen { d: usize, n: usize },
}

fn emit<T: Serialize>(doc: &T, output: &Output, summary: impl FnOnce()) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).expect("documents serialize");
    if let Some(path) = &output.out {
        std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if output.json {
        println!("{text}");
    } else {
        summary();
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Sweep { d, from, to, method, jobs, output } => {
            let r = sweep(d, from, to, method, jobs)?;
            emit(&r.to_document(), &output, || {
                println!("d={} n in [{}, {}] method={}", r.d, r.n_min, r.n_max, r.method);
                println!("failures ({}): {:?}", r.failures.len(), r.failures);
            })?;
            if let Some(last) = r.failures.last() {
                return Err(CliError::Failed(format!("{} non-hyperbolic shifts, last n={last}", r.failures.len())));
            }
        }
        Cmd::FindN { cert, method, jobs, output } => {
            let r = find_n(&cert.config(), method, jobs)?;
            emit(&r.to_document(&timestamp()), &output, || {
                println!("d={} epsilon={} threshold n0={}", r.d, r.certificate.config.epsilon, r.certificate.threshold_n0);
                println!("sweep [1, {}]: last failure {:?}", r.sweep.n_max, r.sweep.failures.last());
                println!("N({}) = {}", r.d, r.n_of_d);
            })?;
        }
        Cmd::Certify { cert, output } => {
            let c = certify(&cert.config())?;
            emit(&c.to_document(&timestamp()), &output, || {
                for b in &c.error_bounds {
                    println!("j={} error bound {:.6e}", b.j, b.total.to_f64());
                }
                for m in &c.per_m {
                    println!(
                        "m={} k={} c0={:.6e} value at epsilon={:.6e} sign changes={} verified={}",
                        m.m,
                        m.k,
                        m.c0.to_f64(),
                        m.value_at_epsilon.lo().to_f64(),
                        m.sign_changes,
                        m.verified
                    );
                }
                for note in &c.diagnostics {
                    println!("note: {note}");
                }
                println!("threshold n0={} verified={}", c.threshold_n0, c.verified);
            })?;
            if !c.verified {
                return Err(CliError::Failed(format!("d={} not certified; choose smaller epsilon", c.config.d)));
            }
        }
        Cmd::CheckCert { path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let report = check_certificate_text(&text)?;
            if !report.verified {
                return Err(CliError::Failed("certificate is consistent but does not verify".into()));
            }
            println!("certificate valid: hyperbolic for all n > {}", report.threshold_n0);
        }
        Cmd::Chen { n_max, s, epsilon, precision, output } => {
            let r = chen(n_max, s, &epsilon, precision)?;
            emit(&r.to_document(&timestamp()), &output, || {
                println!("direct check 2 <= n <= {}: {} failures", r.direct.n_max, r.direct.failures.len());
                println!(
                    "tail s={} epsilon={}: leading {:.6} (matches {}), margin {:.6e}, strict margin {:.6e}",
                    r.tail.s,
                    r.tail.epsilon,
                    r.tail.tail.leading.to_f64(),
                    r.tail.leading_matches,
                    r.tail.tail.margin.lo().to_f64(),
                    r.tail.strict_tail.margin.lo().to_f64()
                );
                println!("tail holds for n > {}; verified={}", r.tail.threshold_n0, r.holds());
            })?;
            if !r.direct.failures.is_empty() {
                return Err(CliError::Failed(format!("inequality fails at n = {:?}", r.direct.failures)));
            }
            if !r.holds() {
                return Err(CliError::Failed("tail certificate does not cover the remaining n".into()));
            }
        }
        Cmd::Bound { d, output } => {
            let r = bound(d)?;
            emit(&r.to_document(), &output, || {
                println!("d={d}");
                println!("log10 N bound   = {:.4}", r.n_bound_log10.to_f64());
                println!("log10 epsilon_d = {:.4}", r.epsilon_log10.to_f64());
                for (j, v) in &r.lemmas.derivative_log10 {
                    println!("log10 derivative bound j={j} (order {}) = {:.4}", r.lemmas.derivative_order, v.to_f64());
                }
                println!("log10 product remainder = {:.4}", r.lemmas.product_remainder_log10.to_f64());
                println!("log10 binomial weight   = {:.4}", r.lemmas.binomial_weight_log10.to_f64());
                for (m, v) in &r.lemmas.coefficient_mass {
                    println!("coefficient mass m={m}: {v}");
                }
                println!("coefficient mass bound: {}", r.lemmas.coefficient_mass_bound);
                println!("hermite hankel lower bound: {}", r.lemmas.hermite_lower);
                println!(
                    "chain: log10 lhs {:.4} < log10 rhs {:.4}; chain_ok={}",
                    r.chain_lhs_log10.to_f64(),
                    r.chain_rhs_log10.to_f64(),
                    r.chain_ok
                );
            })?;
            if !r.chain_ok {
                return Err(CliError::Failed(format!("bound chain does not close for d={d}")));
            }
        }
        Cmd::Partition { n } => {
            let t = PartitionTable::new(n)?;
            println!("{}", t.get(n)?);
        }
        Cmd::Jensen { d, n } => {
            let t = PartitionTable::new(n + d)?;
            let spec = JensenSpec::new(d, n)?;
            let p = jensen_poly(spec, &t)?;
            let v = hankel_verdict(spec, &t)?;
            let sturm = is_hyperbolic_sturm(&p)?;
            println!("J^({d},{n})(X) = {p}");
            for (m, val) in (2..).zip(&v.values) {
                println!("D_({d},{m}) sign: {}", val.cmp0() as i8);
            }
            println!("hyperbolic: hankel={} sturm={}", v.hyperbolic, sturm);
            if v.hyperbolic != sturm {
                return Err(CliError::Failed("criteria disagree".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
