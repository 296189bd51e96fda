use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqmzv::{
    run_search, CompositionTuple, Context, Family, FamilyBounds, FieldConfig, Result, SearchConfig,
    TupleStatus, VerificationReport,
};
use fqmzv_cli::report::{self, Header, RecordFile};
use fqmzv_cli::{error_exit_code, verification_exit_code};

#[derive(Parser)]
#[command(name = "fqmzv", version, about = "Multizeta values over F_q[t]: computation, classification, search, and identity verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Field size q = p^s (a prime power at most 256)
    #[arg(long)]
    q: u32,
    /// Irreducible modulus for non-prime q, as ascending F_p coefficients
    /// c0,c1,...,cs (defaults exist for common q)
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u8>>,
    /// Absolute precision: series are reported modulo (1/t)^prec
    #[arg(long, default_value_t = 64)]
    prec: i64,
    /// Cap on monic polynomials enumerated per degree level
    #[arg(long)]
    budget: Option<u64>,
}

impl Common {
    fn context(&self) -> Result<Context> {
        let field = match &self.modulus {
            Some(m) => FieldConfig::with_modulus(self.q, m)?,
            None => FieldConfig::new(self.q)?,
        };
        Ok(match self.budget {
            Some(b) => Context::with_budget(field, b),
            None => Context::new(field),
        })
    }

    fn echo(&self) -> String {
        let mut s = format!("--q {}", self.q);
        if let Some(m) = &self.modulus {
            s.push_str(&format!(
                " --modulus {}",
                m.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ));
        }
        s.push_str(&format!(" --prec {}", self.prec));
        if let Some(b) = self.budget {
            s.push_str(&format!(" --budget {b}"));
        }
        s
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Print the multizeta series of a tuple
    Compute {
        #[command(flatten)]
        common: Common,
        /// Composition tuple, e.g. 1,2
        #[arg(long, value_delimiter = ',', required = true)]
        tuple: Vec<u32>,
    },
    /// Classify a tuple as eulerian, zeta-like, or not detected
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        tuple: Vec<u32>,
    },
    /// Classify all tuples of a depth up to a weight bound
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        max_weight: u32,
        /// Require 'even' entries after the first and nondecreasing entries
        #[arg(long)]
        restricted: bool,
        /// Skip tuples whose entries are all divisible by p
        #[arg(long)]
        primitive_only: bool,
        /// Write the full record file here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Append-only checkpoint; completed tuples are skipped on restart
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Record the wall-clock time in the output header
        #[arg(long)]
        stamp: bool,
    },
    /// Verify identity families numerically over parameter sweeps
    Verify {
        #[command(flatten)]
        common: Common,
        /// Family name (default: every family admissible for q)
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        max_r: Option<u32>,
        /// Write the verification reports here as canonical JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Compute { common, tuple } => cmd_compute(&common, tuple),
        Command::Classify { common, tuple } => cmd_classify(&common, tuple),
        Command::Search {
            common,
            depth,
            max_weight,
            restricted,
            primitive_only,
            out,
            format,
            resume,
            stamp,
        } => cmd_search(
            &common,
            SearchConfig {
                depth,
                max_weight,
                restricted,
                primitive_only,
                precision: common.prec,
            },
            out,
            format,
            resume,
            stamp,
        ),
        Command::Verify {
            common,
            family,
            max_n,
            max_r,
            out,
        } => cmd_verify(&common, family, max_n, max_r, out),
    }
}

fn modulus_render(modulus: &[u8]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in modulus.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, var.is_empty()) {
            (c, true) => c.to_string(),
            (1, false) => var,
            (c, false) => format!("{c}*{var}"),
        });
    }
    terms.join(" + ")
}

fn cmd_compute(common: &Common, entries: Vec<u32>) -> Result<u8> {
    let ctx = common.context()?;
    let tuple = CompositionTuple::new(entries)?;
    let zeta = ctx.zeta_value(&tuple, common.prec)?;
    println!("tuple: {}", zeta.tuple);
    println!("q: {}", ctx.q());
    if let Some(m) = ctx.field().modulus() {
        println!("modulus: {}", modulus_render(m));
    }
    println!("precision: {}", common.prec);
    let val = zeta.value.valuation_or_prec();
    println!("valuation: {val}");
    println!("levels: {}", zeta.levels_used);
    println!("heuristic: {}", zeta.heuristic);
    let coeffs: Vec<String> = (val..common.prec)
        .map(|k| zeta.value.coeff_at(k).to_string())
        .collect();
    println!("coefficients: {}", coeffs.join(", "));
    Ok(0)
}

fn cmd_classify(common: &Common, entries: Vec<u32>) -> Result<u8> {
    let ctx = common.context()?;
    let tuple = CompositionTuple::new(entries)?;
    let record = ctx.classify_tuple(&tuple, common.prec, None)?;
    match record.status {
        TupleStatus::NotDetected => {
            let note = record
                .note
                .map(|n| format!(" ({n})"))
                .unwrap_or_default();
            println!(
                "not_detected at precision {}/{}{}",
                record.precision_used,
                2 * record.precision_used,
                note
            );
        }
        status => {
            println!(
                "{status}, ratio {}",
                record.ratio.expect("detected record carries a ratio").render()
            );
        }
    }
    Ok(0)
}

fn cmd_search(
    common: &Common,
    config: SearchConfig,
    out: Option<PathBuf>,
    format: Format,
    resume: Option<PathBuf>,
    stamp: bool,
) -> Result<u8> {
    let ctx = common.context()?;
    let results = run_search(&ctx, &config, resume.as_deref())?;
    let rendered = report::md_search_report(&results);
    if let Some(path) = &out {
        let mut command = format!(
            "search {} --depth {} --max-weight {}",
            common.echo(),
            config.depth,
            config.max_weight
        );
        if config.restricted {
            command.push_str(" --restricted");
        }
        if config.primitive_only {
            command.push_str(" --primitive-only");
        }
        let text = match format {
            Format::Json => {
                let file = RecordFile {
                    header: Header {
                        tool: report::tool_version(),
                        q: ctx.q(),
                        modulus: ctx.field().modulus().map(|m| m.to_vec()),
                        command,
                        timestamp: stamp.then(now_unix),
                    },
                    classifications: results.records.clone(),
                    verifications: Vec::new(),
                };
                report::canonical_json(&file)?
            }
            Format::Csv => report::csv_classifications(&results.records),
            Format::Md => rendered.clone(),
        };
        std::fs::write(path, text)?;
    }
    print!("{rendered}");
    Ok(0)
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn cmd_verify(
    common: &Common,
    family: Option<String>,
    max_n: Option<u32>,
    max_r: Option<u32>,
    out: Option<PathBuf>,
) -> Result<u8> {
    let ctx = common.context()?;
    let defaults = FamilyBounds::default();
    let bounds = FamilyBounds {
        max_n: max_n.unwrap_or(defaults.max_n),
        max_r: max_r.unwrap_or(defaults.max_r),
    };
    let families: Vec<Family> = match &family {
        Some(name) => vec![name.parse()?],
        None => Family::ALL
            .into_iter()
            .filter(|f| ctx.q() > 2 || !matches!(f, Family::Main6 | Family::Conj463))
            .collect(),
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for fam in families {
        for case in ctx.enumerate_cases(fam, &bounds)? {
            let report = ctx.verify_case(&case, common.prec)?;
            let params = report::params_echo(&case.params);
            let label = if params.is_empty() {
                fam.to_string()
            } else {
                format!("{fam}[{params}]")
            };
            println!(
                "{label}: {}  zeta{} = [{}] * zeta({})  residual valuation >= {}{}",
                if report.pass { "pass" } else { "FAIL" },
                case.lhs_tuple,
                case.rhs_coefficient.render(),
                case.rhs_zeta_arg,
                report.residual_valuation,
                if report.heuristic { ", heuristic" } else { "" },
            );
            reports.push(report);
        }
    }
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.pass).collect();
    for failure in &failed {
        if !failure.case.family.is_theorem() {
            println!(
                "finding: conjectural family {} fails at [{}]",
                failure.case.family,
                report::params_echo(&failure.case.params)
            );
        }
    }
    println!(
        "verified {} cases: {} passed, {} failed",
        reports.len(),
        reports.len() - failed.len(),
        failed.len()
    );
    if let Some(path) = &out {
        let file = RecordFile {
            header: Header {
                tool: report::tool_version(),
                q: ctx.q(),
                modulus: ctx.field().modulus().map(|m| m.to_vec()),
                command: format!(
                    "verify {}{} --max-n {} --max-r {}",
                    common.echo(),
                    family
                        .as_deref()
                        .map(|f| format!(" --family {f}"))
                        .unwrap_or_default(),
                    bounds.max_n,
                    bounds.max_r
                ),
                timestamp: None,
            },
            classifications: Vec::new(),
            verifications: reports.clone(),
        };
        std::fs::write(path, report::canonical_json(&file)?)?;
    }
    Ok(verification_exit_code(&reports))
}
