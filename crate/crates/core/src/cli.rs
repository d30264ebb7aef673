//! Command-line front end. [`run`] is pure: it returns the exit code and the
//! text for stdout and stderr, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain error (e.g. a class
//! that is not ample), 3 a search bound was exhausted.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::brill_noether::{
    check_mn_bound, enumerate_destab, example_5_1, param_count, predict_w1d, stable_case_audit, BnError,
};
use crate::invariants::{clifford_from_report, decompose_isotropic, gonality_with_cap, InvariantsError};
use crate::lattice::{IntersectionForm, LatticeError};
use crate::literal::{class_to_json, parse_class, resolve_config, ParseError, ResolvedConfig};
use crate::positivity::{classify_positivity, cohomology};
use crate::selftest::run_selftest;
use crate::shortvec::ShortVecError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Lattice,
    Cohomology,
    Invariants,
    Predict,
    Destab,
    Example51,
    Decompose,
    Selftest,
}

impl CommandKind {
    fn name(&self) -> &'static str {
        match self {
            CommandKind::Lattice => "lattice",
            CommandKind::Cohomology => "cohomology",
            CommandKind::Invariants => "invariants",
            CommandKind::Predict => "predict",
            CommandKind::Destab => "destab",
            CommandKind::Example51 => "example51",
            CommandKind::Decompose => "decompose",
            CommandKind::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub class_literal: Option<String>,
    pub configuration: Option<String>,
    pub mu_cap: Option<i64>,
    pub d: Option<i64>,
    pub n: Option<i64>,
    pub output_format: OutputFormat,
    pub seed: Option<u64>,
    pub print_gram: bool,
    pub audit: bool,
}

#[derive(Parser, Debug)]
#[command(name = "enriques-bn", version, about = "Invariants and Brill-Noether arithmetic on unnodal Enriques surfaces")]
struct Cli {
    /// Named configuration for E<i> symbols: i:N, ii:N, iii:N, two:P, custom:<json gram>
    #[arg(long, global = true)]
    config: Option<String>,
    /// Emit tab-separated tables where the command has one
    #[arg(long, global = true)]
    tsv: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Describe the lattice, or print its Gram matrix
    Lattice {
        #[arg(long)]
        print_gram: bool,
    },
    /// Cohomology profile and positivity of a class
    Cohomology {
        #[arg(long)]
        class: String,
    },
    /// phi, mu, gonality and Clifford index of an ample class
    Invariants {
        #[arg(long)]
        class: String,
        #[arg(long)]
        mu_cap: Option<i64>,
    },
    /// Predicted dimensions of W^1_d
    Predict {
        #[arg(long)]
        class: String,
    },
    /// Enumerate destabilizing decompositions L = M + N in degree d
    Destab {
        #[arg(long)]
        class: String,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        audit: bool,
    },
    /// L = n(E1 + E2) with E1.E2 = 2
    Example51 {
        #[arg(long)]
        n: i64,
    },
    /// Isotropic decomposition of an effective class
    Decompose {
        #[arg(long)]
        class: String,
    },
    /// Seeded randomized self-checks
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl RunConfig {
    /// Parses command-line arguments (including the program name).
    pub fn from_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let mut cfg = RunConfig {
            command: CommandKind::Lattice,
            class_literal: None,
            configuration: cli.config,
            mu_cap: None,
            d: None,
            n: None,
            output_format: if cli.tsv { OutputFormat::Tsv } else { OutputFormat::Json },
            seed: None,
            print_gram: false,
            audit: false,
        };
        match cli.command {
            Cmd::Lattice { print_gram } => cfg.print_gram = print_gram,
            Cmd::Cohomology { class } => {
                cfg.command = CommandKind::Cohomology;
                cfg.class_literal = Some(class);
            }
            Cmd::Invariants { class, mu_cap } => {
                cfg.command = CommandKind::Invariants;
                cfg.class_literal = Some(class);
                cfg.mu_cap = mu_cap;
            }
            Cmd::Predict { class } => {
                cfg.command = CommandKind::Predict;
                cfg.class_literal = Some(class);
            }
            Cmd::Destab { class, d, audit } => {
                cfg.command = CommandKind::Destab;
                cfg.class_literal = Some(class);
                cfg.d = Some(d);
                cfg.audit = audit;
            }
            Cmd::Example51 { n } => {
                cfg.command = CommandKind::Example51;
                cfg.n = Some(n);
            }
            Cmd::Decompose { class } => {
                cfg.command = CommandKind::Decompose;
                cfg.class_literal = Some(class);
            }
            Cmd::Selftest { seed } => {
                cfg.command = CommandKind::Selftest;
                cfg.seed = Some(seed.unwrap_or(0));
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of a run, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Lattice(l) => l.into(),
            e => Failure { code: 1, message: e.to_string() },
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        let code = match e {
            LatticeError::NotRealizable { .. } => 3,
            LatticeError::InvalidConfiguration(_) | LatticeError::NotSquare | LatticeError::NotSymmetric(..) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ShortVecError> for Failure {
    fn from(e: ShortVecError) -> Self {
        match e {
            ShortVecError::Lattice(l) => l.into(),
            e => Failure { code: 2, message: e.to_string() },
        }
    }
}

impl From<InvariantsError> for Failure {
    fn from(e: InvariantsError) -> Self {
        match e {
            InvariantsError::SearchExhausted { .. } => Failure { code: 3, message: e.to_string() },
            InvariantsError::ShortVec(s) => s.into(),
            e => Failure { code: 2, message: e.to_string() },
        }
    }
}

impl From<BnError> for Failure {
    fn from(e: BnError) -> Self {
        match e {
            BnError::Invariants(i) => i.into(),
            BnError::Lattice(l) => l.into(),
            BnError::ShortVec(s) => s.into(),
            e => Failure { code: 2, message: e.to_string() },
        }
    }
}

fn echo(cfg: &RunConfig, resolved: Option<&ResolvedConfig>, class: Option<&Value>) -> Value {
    json!({
        "command": cfg.command.name(),
        "class": cfg.class_literal,
        "resolvedClass": class,
        "configuration": resolved.map(|r| r.name.clone()).or_else(|| cfg.configuration.clone()),
        "muCap": cfg.mu_cap,
        "d": cfg.d,
        "n": cfg.n,
        "outputFormat": match cfg.output_format { OutputFormat::Json => "json", OutputFormat::Tsv => "tsv" },
        "seed": cfg.seed,
        "printGram": cfg.print_gram,
        "audit": cfg.audit,
    })
}

/// Merges `body` after a leading `config` key.
fn with_header(config: Value, body: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("config".into(), config);
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

pub fn run(cfg: &RunConfig) -> RunOutput {
    match dispatch(cfg) {
        Ok((stdout, code)) => RunOutput { code, stdout, stderr: String::new() },
        Err(f) => RunOutput { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn gram_text() -> String {
    IntersectionForm::canonical()
        .rows()
        .iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

fn dispatch(cfg: &RunConfig) -> Result<(String, i32), Failure> {
    if cfg.command == CommandKind::Lattice && cfg.print_gram {
        return Ok((gram_text(), 0));
    }
    let resolved = cfg.configuration.as_deref().map(resolve_config).transpose()?;
    let class = match &cfg.class_literal {
        Some(text) => Some(parse_class(text, resolved.as_ref())?),
        None => None,
    };
    let class_json = class.as_ref().map(class_to_json);
    let header = echo(cfg, resolved.as_ref(), class_json.as_ref());
    let json_out = |body: Value, code: i32| -> (String, i32) {
        (serde_json::to_string(&with_header(header.clone(), body)).expect("json") + "\n", code)
    };
    let tsv_header = format!("# config: {}\n", serde_json::to_string(&header).expect("json"));

    match cfg.command {
        CommandKind::Lattice => {
            let form = IntersectionForm::canonical();
            let (pos, neg) = form.signature();
            let mut body = json!({
                "rank": form.rank(),
                "determinant": form.determinant().to_string().parse::<i64>().unwrap_or(0),
                "signature": [pos, neg],
                "basis": "f, g span U; coordinates 3-10 are E8 simple roots (Bourbaki order) with negated form",
                "gram": form.rows(),
            });
            if let Some(r) = &resolved {
                body["configurationDetail"] = json!({
                    "label": r.presentation.label().as_str(),
                    "n": r.presentation.n(),
                    "gram": r.presentation.gram(),
                    "generators": r.generators.iter().map(class_to_json).collect::<Vec<_>>(),
                });
            }
            Ok(json_out(body, 0))
        }
        CommandKind::Cohomology => {
            let d = class.expect("class required");
            let p = cohomology(&d);
            let status = classify_positivity(&d);
            Ok(json_out(
                json!({ "h0": p.h0, "h1": p.h1, "h2": p.h2, "chi": p.chi, "status": status }),
                0,
            ))
        }
        CommandKind::Invariants => {
            let l = class.expect("class required");
            let rep = gonality_with_cap(&l, cfg.mu_cap)?;
            let (clifford, convention) = match clifford_from_report(&rep) {
                Ok(c) => (Some(c), None),
                Err(InvariantsError::GenusTooSmall { convention, .. }) => (None, Some(convention)),
                Err(e) => return Err(e.into()),
            };
            Ok(json_out(
                json!({
                    "lSquare": l.square(),
                    "genus": rep.genus,
                    "phi": rep.phi.value,
                    "k": rep.k,
                    "caseLabel": rep.case_label,
                    "clifford": clifford,
                    "cliffordConvention": convention,
                    "floorTerm": rep.floor_term,
                    "phiWitness": class_to_json(&rep.phi.witness),
                    "mu": {
                        "status": rep.mu.status,
                        "value": rep.mu.value,
                        "witness": rep.mu.witness.as_ref().map(class_to_json),
                        "cap": rep.mu.cap,
                    },
                    "predictedK": rep.predicted_k,
                    "classificationConsistent": rep.classification_consistent,
                    "twiceD10": rep.twice_d10,
                }),
                0,
            ))
        }
        CommandKind::Predict => {
            let l = class.expect("class required");
            let p = predict_w1d(&l)?;
            if cfg.output_format == OutputFormat::Tsv {
                let mut s = tsv_header;
                s.push_str("d\trho\tpredictedDim\n");
                for r in &p.rows {
                    s.push_str(&format!("{}\t{}\t{}\n", r.d, r.rho, r.predicted_dim));
                }
                return Ok((s, 0));
            }
            Ok(json_out(
                json!({
                    "genus": p.genus,
                    "k": p.k,
                    "phi": p.gonality.phi.value,
                    "mu": p.gonality.mu.value,
                    "muStatus": p.gonality.mu.status,
                    "status": p.status,
                    "rows": p.rows,
                }),
                0,
            ))
        }
        CommandKind::Destab => {
            let l = class.expect("class required");
            let d = cfg.d.expect("d required");
            let list = enumerate_destab(&l, d)?;
            if cfg.output_format == OutputFormat::Tsv {
                let mut s = tsv_header;
                s.push_str("M\tN\tMN\tell\ta\tb\tc\te\n");
                for c in &list {
                    s.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                        class_to_json(&c.m),
                        class_to_json(&c.n),
                        c.mn,
                        c.ell,
                        c.checklist.a,
                        c.checklist.b,
                        c.checklist.c,
                        c.checklist.e
                    ));
                }
                return Ok((s, 0));
            }
            let g = l.square() / 2 + 1;
            let k = if cfg.audit { Some(gonality_with_cap(&l, None)?.k) } else { None };
            let candidates: Vec<Value> = list
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "M": class_to_json(&c.m),
                        "N": class_to_json(&c.n),
                        "MN": c.mn,
                        "ell": c.ell,
                        "checklist": c.checklist,
                    });
                    if let Some(k) = k {
                        let h = cohomology(&(&c.m - &c.n));
                        let counts: Vec<Value> = (0..=2)
                            .filter_map(|i| param_count(g, d, c.mn, i, c.ell, h.h1, h.h2, k).ok())
                            .map(|a| json!(a))
                            .collect();
                        v["paramCounts"] = json!(counts);
                    }
                    v
                })
                .collect();
            let mut body = json!({
                "d": d,
                "genus": g,
                "minMN": list.iter().map(|c| c.mn).min(),
                "count": list.len(),
                "candidates": candidates,
            });
            if cfg.audit {
                let mn_bound = match check_mn_bound(&l, d) {
                    Ok(b) => json!(b),
                    Err(e) => json!({ "error": e.to_string() }),
                };
                body["audit"] = json!({
                    "mnBound": mn_bound,
                    "stable": stable_case_audit(g, d).map(|s| json!(s)).unwrap_or(Value::Null),
                });
            }
            Ok(json_out(body, 0))
        }
        CommandKind::Example51 => {
            let n = cfg.n.expect("n required");
            let r = example_5_1(n)?;
            Ok(json_out(json!(r), 0))
        }
        CommandKind::Decompose => {
            let l = class.expect("class required");
            let dec = decompose_isotropic(&l)?;
            Ok(json_out(
                json!({
                    "configuration": dec.configuration.as_str(),
                    "coefficients": dec.coefficients,
                    "generators": dec.generators.iter().map(class_to_json).collect::<Vec<_>>(),
                    "pairingBound": dec.pairing_bound,
                }),
                0,
            ))
        }
        CommandKind::Selftest => {
            let report = run_selftest(cfg.seed.unwrap_or(0));
            let code = if report.all_passed { 0 } else { 2 };
            Ok(json_out(json!(report), code))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunOutput {
        let mut full = vec!["enriques-bn"];
        full.extend_from_slice(args);
        run(&RunConfig::from_args(full).unwrap())
    }

    #[test]
    fn print_gram_is_bit_exact() {
        let out = run_args(&["lattice", "--print-gram"]);
        assert_eq!(out.code, 0);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "0 1 0 0 0 0 0 0 0 0");
        assert_eq!(lines[2], "0 0 -2 0 1 0 0 0 0 0");
    }

    #[test]
    fn invariants_json() {
        let out = run_args(&["invariants", "--class", "3*E1+3*E2", "--config", "two:2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.starts_with(r#"{"config":{"command":"invariants""#));
        assert!(out.stdout.contains(r#""phi":6,"k":10"#), "{}", out.stdout);
    }

    #[test]
    fn example51_json() {
        let out = run_args(&["example51", "--n", "3"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains(r#""csBound":25,"csHolds":true"#), "{}", out.stdout);
        assert_eq!(run_args(&["example51", "--n", "2"]).code, 2);
    }

    #[test]
    fn domain_and_usage_errors() {
        assert_eq!(run_args(&["predict", "--class", "f"]).code, 2);
        assert_eq!(run_args(&["predict", "--class", "3*E9", "--config", "two:2"]).code, 1);
        assert_eq!(run_args(&["predict", "--class", "E1"]).code, 1);
        assert!(RunConfig::from_args(["enriques-bn", "predict", "--class", "f", "--bogus"]).is_err());
    }

    #[test]
    fn deterministic_output() {
        let a = run_args(&["predict", "--class", "2*E1+4*E2", "--config", "i:2"]);
        let b = run_args(&["predict", "--class", "2*E1+4*E2", "--config", "i:2"]);
        assert_eq!(a, b);
        assert!(a.stdout.contains(r#""rows":[{"d":4,"rho":-3,"predictedDim":0},{"d":5,"rho":-1,"predictedDim":1}]"#));
    }

    #[test]
    fn tsv_has_header() {
        let out = run_args(&["predict", "--class", "2*E1+4*E2", "--config", "i:2", "--tsv"]);
        let mut lines = out.stdout.lines();
        assert!(lines.next().unwrap().starts_with("# config: {"));
        assert_eq!(lines.next(), Some("d\trho\tpredictedDim"));
        assert_eq!(lines.next(), Some("4\t-3\t0"));
    }
}
