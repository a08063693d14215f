//! `sinc-certify`: reproduces the table, runs the machine proofs and emits
//! envelopes and certificates.
//!
//! Exit codes: 0 proven or success, 1 refuted, 2 inconclusive, 3 usage or domain error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sinc_certify::certify::{
    certify_sign_with, find_x_a_with, m_a, prove_theorem4, prove_theorem5, prove_theorem7_on, prove_theorem8,
    reproduce_table1, ProofConfig, Sign, SignOptions, Status, TheoremReport, XaOptions,
};
use sinc_certify::envelope::{natural_extension_bounds, wd_envelopes, EnvelopePolynomial};
use sinc_certify::series::SeriesSpec;
use sinc_certify::{Enclosure, Error, Rational};

const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sinc-certify",
    version,
    about = "Certified proofs of exponential inequalities for sin(x)/x"
)]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "SINC_CERTIFY_PRECISION", default_value_t = 256)]
    precision: u32,

    /// Bracket width for root finding.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Maximum bisection depth for sign certificates.
    #[arg(long, global = true, default_value_t = 48)]
    max_depth: u32,

    /// Include every leaf in JSON certificates.
    #[arg(long, global = true)]
    dump_leaves: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute the table of x_a and m_a and flag disagreements with the printed values.
    Table1 {
        /// Compute rows one after another instead of in parallel.
        #[arg(long)]
        serial: bool,
    },
    /// Run a machine proof.
    Prove {
        #[arg(value_parser = ["4", "5", "7", "8"])]
        theorem: String,
        /// Exponent(s) a for theorem 8; defaults to 1.51, 1.6, 1.7 and 1.9.
        #[arg(long = "a")]
        a: Vec<String>,
        /// Number of pointwise samples.
        #[arg(long, default_value_t = 25)]
        samples: usize,
        /// Right end of the interval for theorem 7.
        #[arg(long, default_value = "3.1")]
        hi: String,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bracket the zero x_a of f_a in (0, π).
    Xa { a: String },
    /// Enclose m_a = π √(2(a − 3/2)).
    Ma { a: String },
    /// Emit lower and upper envelope polynomials.
    Envelope {
        target: EnvelopeTarget,
        /// Order of the endpoint-defect side.
        #[arg(long, default_value_t = 10)]
        m: u32,
        /// Order of the truncation side.
        #[arg(long, default_value_t = 10)]
        n: u32,
        /// Validity endpoint c.
        #[arg(long, default_value = "3")]
        c: String,
        /// Exponent a, for `fa` only.
        #[arg(long = "a")]
        a: Option<String>,
        /// Also write the JSON document to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the sign of a polynomial stored as an envelope JSON document.
    CheckSign {
        poly_file: PathBuf,
        lo: String,
        hi: String,
        sign: String,
        /// Member to use when the file holds a lower/upper pair written by `envelope`.
        #[arg(long)]
        side: Option<PairSide>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairSide {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnvelopeTarget {
    /// ln(sin x / x)
    Lnsinc,
    /// −ln cos(x/2)
    Lncoshalf,
    /// f_a(x) = a ln(sin x / x) − 2 ln cos(x/2)
    Fa,
}

/// Output of a subcommand: text for stdout and the exit code.
struct Outcome {
    text: String,
    code: u8,
}

fn status_code(s: Status) -> u8 {
    s.exit_code() as u8
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Inconclusive(_) | Error::NoSignChange(_) | Error::Certification { .. } => 2,
        _ => EXIT_USAGE,
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, Error> {
    s.parse::<Rational>().map_err(|_| Error::Parse {
        input: s.to_string(),
        reason: format!("{what} must be a decimal like 1.505 or a fraction like 7/4"),
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn write_out(path: &Option<PathBuf>, doc: &str) -> Result<(), Error> {
    if let Some(p) = path {
        std::fs::write(p, format!("{doc}\n")).map_err(|e| Error::Serialization(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

impl Cli {
    fn validate(&self) -> Result<(), Error> {
        if self.precision < 64 {
            return Err(Error::Domain(format!(
                "--precision must be at least 64, got {}",
                self.precision
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.tol.is_infinite() {
            return Err(Error::Domain(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.max_depth == 0 {
            return Err(Error::Domain("--max-depth must be at least 1".into()));
        }
        Ok(())
    }

    fn proof_config(&self, samples: usize) -> ProofConfig {
        ProofConfig {
            precision_bits: self.precision,
            max_precision_bits: self.precision.max(1024),
            max_depth: self.max_depth,
            samples,
            parallel: true,
        }
    }

    fn run(&self) -> Result<Outcome, Error> {
        self.validate()?;
        match &self.command {
            Command::Table1 { serial } => self.table1(!serial),
            Command::Prove {
                theorem,
                a,
                samples,
                hi,
                out,
            } => self.prove(theorem, a, *samples, hi, out),
            Command::Xa { a } => self.xa(a),
            Command::Ma { a } => self.ma(a),
            Command::Envelope {
                target,
                m,
                n,
                c,
                a,
                out,
            } => self.envelope(*target, *m, *n, c, a.as_deref(), out),
            Command::CheckSign {
                poly_file,
                lo,
                hi,
                sign,
                side,
            } => self.check_sign(poly_file, lo, hi, sign, *side),
        }
    }

    fn table1(&self, parallel: bool) -> Result<Outcome, Error> {
        let rows = reproduce_table1(self.tol, self.precision, parallel)?;
        let failed = rows.iter().any(|r| r.x_a.is_err());
        let code = if failed { 2 } else { 0 };
        if self.json {
            let rows: Vec<Value> = rows.iter().map(|r| r.to_json_value()).collect();
            return Ok(Outcome {
                text: pretty(&json!({ "tolerance": self.tol, "rows": rows })),
                code,
            });
        }
        let flag = |mismatch: bool, suspect: bool| match (mismatch, suspect) {
            (true, _) => "MISMATCH",
            (false, true) => "suspect",
            _ => "",
        };
        let mut t = String::new();
        let mut line = |s: String| {
            t.push_str(s.trim_end());
            t.push('\n');
        };
        line(format!(
            "{:<7} {:>7} {:>7} {:<9} {:>7} {:>7}",
            "a", "x_a", "printed", "", "m_a", "printed"
        ));
        for r in &rows {
            line(format!(
                "{:<7} {:>7} {:>7} {:<9} {:>7} {:>7} {}",
                r.printed.a,
                r.x_a_display(),
                r.printed.x_a,
                flag(r.x_a_mismatch(), r.printed.x_a_suspect),
                r.m_a_display(),
                r.printed.m_a,
                flag(r.m_a_mismatch(), r.printed.m_a_suspect),
            ));
            if let Err(e) = &r.x_a {
                line(format!("        error: {e}"));
            }
        }
        Ok(Outcome {
            text: t.trim_end().to_string(),
            code,
        })
    }

    fn render_report(&self, r: &TheoremReport, t: &mut String) {
        writeln!(t, "Theorem {}: {}", r.theorem, r.statement).ok();
        for c in &r.checks {
            writeln!(t, "  [{}] {}: {}", c.status, c.name, c.detail).ok();
        }
        for c in &r.certificates {
            let cert = &c.certificate;
            writeln!(
                t,
                "  [{}] {} {} on ({}, {}): {} leaves, {} bits, degree {}",
                cert.status,
                cert.target,
                cert.claimed_sign,
                cert.interval.0.mid().truncated_decimal(4),
                cert.interval.1.mid().truncated_decimal(4),
                cert.leaf_count(),
                cert.precision_bits,
                c.polynomial.degree()
            )
            .ok();
        }
        writeln!(t, "  status: {}", r.status).ok();
    }

    fn prove(
        &self,
        theorem: &str,
        a: &[String],
        samples: usize,
        hi: &str,
        out: &Option<PathBuf>,
    ) -> Result<Outcome, Error> {
        let cfg = self.proof_config(samples);
        let reports = match theorem {
            "4" => vec![prove_theorem4(&cfg)?],
            "5" => vec![prove_theorem5(samples.max(1), &cfg)?],
            "7" => vec![prove_theorem7_on(&parse_rational(hi, "--hi")?, &cfg)?],
            "8" => {
                let list: Vec<String> = if a.is_empty() {
                    ["1.51", "1.6", "1.7", "1.9"].iter().map(|s| s.to_string()).collect()
                } else {
                    a.to_vec()
                };
                list.iter()
                    .map(|s| prove_theorem8(&parse_rational(s, "a")?, samples, &cfg))
                    .collect::<Result<Vec<_>, _>>()?
            }
            _ => unreachable!("clap restricts the theorem id"),
        };
        let status = reports.iter().map(|r| r.status).fold(Status::Proven, Status::and);
        let docs = reports
            .iter()
            .map(|r| r.to_json_value(self.dump_leaves))
            .collect::<Result<Vec<_>, _>>()?;
        let doc = pretty(&json!({ "status": status, "reports": docs }));
        write_out(out, &doc)?;
        let text = if self.json {
            doc
        } else {
            let mut t = String::new();
            for r in &reports {
                self.render_report(r, &mut t);
            }
            writeln!(t, "overall: {status}").ok();
            t.trim_end().to_string()
        };
        Ok(Outcome {
            text,
            code: status_code(status),
        })
    }

    fn xa(&self, a: &str) -> Result<Outcome, Error> {
        let a = parse_rational(a, "a")?;
        let floor = (-(self.precision as f64) / 2.0).exp2();
        if self.tol < floor {
            return Err(Error::Domain(format!(
                "--tol must be at least 2^-{} at {} bits",
                self.precision / 2,
                self.precision
            )));
        }
        let opts = XaOptions {
            precision_bits: self.precision,
            ..XaOptions::default()
        };
        let r = find_x_a_with(&a, self.tol, &opts)?;
        let text = if self.json {
            r.to_json()?
        } else {
            format!(
                "x_a for a = {a}: [{}, {}]  width {:.3e}  evaluations {}",
                r.lo.lo().truncated_decimal(12),
                r.hi.hi().truncated_decimal(12),
                r.width().to_f64(),
                r.evals
            )
        };
        Ok(Outcome { text, code: 0 })
    }

    fn ma(&self, a: &str) -> Result<Outcome, Error> {
        let a = parse_rational(a, "a")?;
        let m = m_a(&a, self.precision)?;
        let text = if self.json {
            pretty(&json!({
                "a": a.to_string(),
                "m_a": m.to_hex_pair(),
                "lo_decimal": m.lo().truncated_decimal(15),
                "hi_decimal": m.hi().truncated_decimal(15),
            }))
        } else {
            format!(
                "m_a for a = {a}: [{}, {}]",
                m.lo().truncated_decimal(15),
                m.hi().truncated_decimal(15)
            )
        };
        Ok(Outcome { text, code: 0 })
    }

    fn envelope(
        &self,
        target: EnvelopeTarget,
        m: u32,
        n: u32,
        c: &str,
        a: Option<&str>,
        out: &Option<PathBuf>,
    ) -> Result<Outcome, Error> {
        let c = Enclosure::from_rational(&parse_rational(c, "--c")?, self.precision);
        let (lower, upper) = match target {
            EnvelopeTarget::Lnsinc => wd_envelopes(&SeriesSpec::ln_sinc(), &c, n, m)?,
            EnvelopeTarget::Lncoshalf => wd_envelopes(&SeriesSpec::neg_ln_cos_half(), &c, n, m)?,
            EnvelopeTarget::Fa => {
                let a = a.ok_or_else(|| Error::Domain("target fa needs --a".into()))?;
                natural_extension_bounds(&parse_rational(a, "a")?, n, &c)?
            }
        };
        let to_value = |p: &EnvelopePolynomial| -> Result<Value, Error> {
            serde_json::from_str(&p.to_json()?).map_err(|e| Error::Serialization(e.to_string()))
        };
        let doc = pretty(&json!({ "lower": to_value(&lower)?, "upper": to_value(&upper)? }));
        write_out(out, &doc)?;
        let text = if self.json {
            doc
        } else {
            format!("{lower}{upper}").trim_end().to_string()
        };
        Ok(Outcome { text, code: 0 })
    }

    fn check_sign(
        &self,
        poly_file: &PathBuf,
        lo: &str,
        hi: &str,
        sign: &str,
        side: Option<PairSide>,
    ) -> Result<Outcome, Error> {
        let raw = std::fs::read_to_string(poly_file)
            .map_err(|e| Error::Serialization(format!("{}: {e}", poly_file.display())))?;
        let poly = read_polynomial(&raw, side)?;
        let claimed: Sign = sign.parse()?;
        let lo = Enclosure::from_rational(&parse_rational(lo, "lo")?, self.precision);
        let hi = Enclosure::from_rational(&parse_rational(hi, "hi")?, self.precision);
        let opts = SignOptions {
            max_depth: self.max_depth,
            precision_bits: Some(self.precision),
            max_precision_bits: self.precision.max(1024),
            parallel: true,
        };
        let cert = certify_sign_with(&poly, &lo, &hi, claimed, &opts)?;
        let text = if self.json {
            cert.to_json(self.dump_leaves)?
        } else {
            let mut t = format!(
                "{} {} on [{}, {}]: {} ({} leaves, {} bits)",
                cert.target,
                cert.claimed_sign,
                lo.mid().truncated_decimal(6),
                hi.mid().truncated_decimal(6),
                cert.status,
                cert.leaf_count(),
                cert.precision_bits
            );
            if let Some(w) = &cert.witness {
                write!(t, "\nwitness x = {}", w.truncated_decimal(12)).ok();
            }
            t
        };
        Ok(Outcome {
            text,
            code: status_code(cert.status),
        })
    }
}

/// Reads a single envelope document, or one member of a `{lower, upper}` pair.
fn read_polynomial(raw: &str, side: Option<PairSide>) -> Result<EnvelopePolynomial, Error> {
    let doc: Value = serde_json::from_str(raw).map_err(|e| Error::Serialization(e.to_string()))?;
    let is_pair = doc.get("lower").is_some() && doc.get("upper").is_some();
    match (is_pair, side) {
        (false, _) => EnvelopePolynomial::from_json(raw),
        (true, None) => Err(Error::Domain(
            "the file holds a lower/upper pair; choose one with --side".into(),
        )),
        (true, Some(side)) => {
            let key = match side {
                PairSide::Lower => "lower",
                PairSide::Upper => "upper",
            };
            EnvelopePolynomial::from_json(&doc[key].to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match cli.run() {
        Ok(out) => {
            // a closed pipe (for example `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
