//! Command-line front end: parameter validation, presentations, reduction,
//! graded dimensions, ambiguity reports, the lifting pipeline, the coaction
//! oracle, verification suites and isomorphism actions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nichols::cyclo::Cyclo;
use nichols::error::Error;
use nichols::isoclass::{self, ParamAction};
use nichols::liftings::{
    algorithm_pipeline, build_presentation, sigma_n3, u_frak, LiftingParams, ParamsFile, PresKind,
};
use nichols::realization::{Realization, RealizationFile};
use nichols::rewrite::Confluence;
use nichols::smash::{parse_poly, print_poly};
use nichols::verify::{
    closed_form_rhs, identities, lifting_rhs_oracle, Instance, Status, Systems,
};

#[derive(Parser)]
#[command(name = "nichols", about = "Exact symbolic engine for Cartan type A liftings")]
struct Cli {
    /// Realization file (bare realization JSON or a combined fixture)
    #[arg(long, global = true)]
    realization: Option<PathBuf>,
    /// Parameter file (bare parameter JSON or a combined fixture)
    #[arg(long, global = true)]
    params: Option<PathBuf>,
    /// Completion degree bound (default 2*N*theta)
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Report every violated parameter constraint
    CheckParams,
    /// Emit the generator-relation data of one algebra of the tower
    Present {
        /// nichols | pre-distinguished | pre-hat | cleft | lifting |
        /// cleft-tower:M | lifting-tower:M
        kind: String,
    },
    /// Normal form of a parsed expression in a chosen quotient
    Reduce {
        expr: String,
        #[arg(long, default_value = "lifting")]
        system: String,
    },
    /// Irreducible-word counts of a completed system
    Dim {
        #[arg(long, default_value = "nichols")]
        system: String,
    },
    /// Overlap-ambiguity report of a completed system
    Diamond {
        #[arg(long, default_value = "cleft")]
        system: String,
    },
    /// Run the recursive deformation pipeline
    Lift,
    /// Closed form, oracle value and comparison for one root
    Sigma { i: usize, l: usize },
    /// Run a verification suite
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Apply a parameter action and check substitute-and-reduce equivalence
    Iso {
        /// scale:c1;c2;...  |  permute:2,1,...  |  gl2:a;b;c;d
        #[arg(long)]
        action: String,
        /// optional second parameter file to compare the transform against
        #[arg(long)]
        other: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Record<'a> {
    kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    status: Option<String>,
}

fn emit(format: Format, kind: &str, label: Option<String>, value: Option<String>, status: Option<String>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let result = match format {
        Format::Text => {
            let mut line = String::new();
            if let Some(l) = &label {
                line.push_str(l);
                line.push_str(": ");
            }
            if let Some(v) = &value {
                line.push_str(v);
            }
            if let Some(s) = &status {
                line.push_str(&format!(" [{s}]"));
            }
            writeln!(out, "{line}")
        }
        Format::Records => {
            let rec = Record { kind, label, value, status };
            writeln!(out, "{}", serde_json::to_string(&rec).unwrap())
        }
    };
    if result.is_err() {
        // downstream closed the pipe; nothing useful left to do
        std::process::exit(0);
    }
}

#[derive(serde::Deserialize)]
struct CombinedFile {
    realization: Option<RealizationFile>,
    params: Option<ParamsFile>,
}

fn load_realization(path: &PathBuf) -> Result<Realization, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Ok(c) = serde_json::from_str::<CombinedFile>(&text) {
        if let Some(rf) = c.realization {
            return Realization::from_file(&rf);
        }
    }
    Realization::from_json(&text)
}

fn load_params(r: &Realization, path: &Option<PathBuf>, fallback: &Option<PathBuf>) -> Result<LiftingParams, Error> {
    let path = match path.as_ref().or(fallback.as_ref()) {
        Some(p) => p,
        None => return Ok(LiftingParams::default()),
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Ok(c) = serde_json::from_str::<CombinedFile>(&text) {
        if let Some(pf) = c.params {
            return LiftingParams::from_file(r, &pf);
        }
    }
    LiftingParams::from_json(r, &text)
}

fn parse_kind(s: &str) -> Result<PresKind, Error> {
    let s = s.trim().to_lowercase();
    if let Some(m) = s.strip_prefix("cleft-tower:") {
        return Ok(PresKind::CleftTower(
            m.parse().map_err(|e| Error::Parse(format!("tower level: {e}")))?,
        ));
    }
    if let Some(m) = s.strip_prefix("lifting-tower:") {
        return Ok(PresKind::LiftingTower(
            m.parse().map_err(|e| Error::Parse(format!("tower level: {e}")))?,
        ));
    }
    Ok(match s.as_str() {
        "nichols" => PresKind::Nichols,
        "pre-distinguished" | "pre" => PresKind::PreDistinguished,
        "pre-hat" | "hat" => PresKind::PreHatN2,
        "cleft" => PresKind::Cleft,
        "lifting" | "lift" => PresKind::Lifting,
        other => return Err(Error::Parse(format!("unknown presentation kind `{other}`"))),
    })
}

fn parse_action(r: &Realization, spec: &str) -> Result<ParamAction, Error> {
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse("action spec must be kind:data".into()))?;
    match head {
        "scale" => {
            let entries = rest
                .split(';')
                .map(|t| Cyclo::parse(r.m, t.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParamAction::Scale(entries))
        }
        "permute" => {
            let perm = rest
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("permutation: {e}")))?;
            Ok(ParamAction::Permute(perm))
        }
        "gl2" => {
            let v = rest
                .split(';')
                .map(|t| Cyclo::parse(r.m, t.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if v.len() != 4 {
                return Err(Error::Parse("gl2 action needs four entries a;b;c;d".into()));
            }
            Ok(ParamAction::Gl2([
                [v[0].clone(), v[1].clone()],
                [v[2].clone(), v[3].clone()],
            ]))
        }
        other => Err(Error::Parse(format!("unknown action `{other}`"))),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let format = cli.format;
    let rpath = cli
        .realization
        .as_ref()
        .ok_or_else(|| Error::Parse("--realization is required".into()))?;
    let real = load_realization(rpath)?;
    let params = load_params(&real, &cli.params, &cli.realization)?;
    let bound = cli.bound.unwrap_or(2 * real.n as usize * real.theta);
    match cli.command {
        Command::CheckParams => {
            let violations = params.violations(&real);
            if violations.is_empty() {
                emit(format, "check-params", None, Some("all constraints satisfied".into()), Some("ok".into()));
                Ok(0)
            } else {
                for v in &violations {
                    emit(format, "violation", None, Some(v.clone()), Some("rejected".into()));
                }
                Ok(1)
            }
        }
        Command::Present { kind } => {
            let kind = parse_kind(&kind)?;
            let pres = build_presentation(kind, &real, &params)?;
            for rel in &pres.relations {
                emit(
                    format,
                    "relation",
                    Some(format!("{} [{:?}]", rel.label, rel.stratum)),
                    Some(format!("{} = {}", print_poly(&rel.lhs), print_poly(&rel.rhs))),
                    None,
                );
            }
            Ok(0)
        }
        Command::Reduce { expr, system } => {
            let kind = parse_kind(&system)?;
            let pres = build_presentation(kind, &real, &params)?;
            let mut sys = pres.rewrite_system(&real)?;
            sys.complete(&real, bound)?;
            let p = parse_poly(&real, &expr)?;
            let red = sys.reduce(&real, &p);
            emit(format, "normal-form", None, Some(print_poly(&red)), None);
            Ok(0)
        }
        Command::Dim { system } => {
            let kind = parse_kind(&system)?;
            let pres = build_presentation(kind, &real, &params)?;
            let mut sys = pres.rewrite_system(&real)?;
            sys.complete(&real, bound)?;
            let counts = sys.irreducible_words(None, 4 * bound)?;
            let total: u128 = counts.iter().sum();
            emit(
                format,
                "dimension",
                Some("graded".into()),
                Some(format!("{counts:?}")),
                None,
            );
            emit(format, "dimension", Some("total".into()), Some(total.to_string()), None);
            Ok(0)
        }
        Command::Diamond { system } => {
            let kind = parse_kind(&system)?;
            let pres = build_presentation(kind, &real, &params)?;
            let mut sys = pres.rewrite_system(&real)?;
            let report = sys.complete(&real, bound)?;
            for ((a, b), count) in &report.families {
                emit(
                    format,
                    "ambiguity-family",
                    Some(format!("{a}|{b}")),
                    Some(format!("{count} resolved")),
                    None,
                );
            }
            for added in &report.added {
                emit(format, "added-rule", None, Some(added.clone()), None);
            }
            let status = match sys.confluence {
                Confluence::Full => "confluent".to_string(),
                Confluence::UpTo(b) => format!("confluent up to degree {b}"),
                Confluence::Unknown => "unknown".to_string(),
            };
            emit(format, "confluence", None, Some(status), None);
            Ok(0)
        }
        Command::Lift => {
            let steps = algorithm_pipeline(&real, &params, bound)?;
            for step in &steps {
                emit(
                    format,
                    "pipeline-step",
                    Some(format!("step {}", step.step)),
                    Some(format!(
                        "{} ({} relations, {} completion rules, {:?})",
                        step.description,
                        step.lifting.relations.len(),
                        step.added_rules,
                        step.nonzero
                    )),
                    Some("nonzero".into()),
                );
            }
            if let Some(last) = steps.last() {
                for rel in &last.lifting.relations {
                    emit(
                        format,
                        "lifting-relation",
                        Some(rel.label.clone()),
                        Some(format!("{} = {}", print_poly(&rel.lhs), print_poly(&rel.rhs))),
                        None,
                    );
                }
            }
            Ok(0)
        }
        Command::Sigma { i, l } => {
            let inst = Instance::new("cli", real.clone(), params.clone());
            let mut sys = Systems::new();
            let closed = closed_form_rhs(&inst, i, l)?;
            emit(format, "closed-form", Some(format!("root ({i},{l})")), Some(print_poly(&closed)), None);
            if real.n == 3 {
                let s = sigma_n3(&real, &params, i, l)?;
                emit(format, "sigma", None, Some(print_poly(&s)), None);
            } else {
                let u = u_frak(&real, &params, i, l)?;
                emit(format, "u", None, Some(print_poly(&u)), None);
            }
            let oracle = lifting_rhs_oracle(&inst, &mut sys, i, l)?;
            emit(format, "oracle", None, Some(print_poly(&oracle)), None);
            let len = l - i + 1;
            let lsys = sys.get(&inst, PresKind::LiftingTower(len - 1), real.n as usize * len)?;
            let resid = lsys.reduce(&real, &oracle.sub(&closed));
            let ok = resid.is_zero();
            emit(
                format,
                "comparison",
                None,
                Some(if ok { "oracle = closed form".into() } else { print_poly(&resid) }),
                Some(if ok { "ok".into() } else { "mismatch".into() }),
            );
            Ok(if ok { 0 } else { 2 })
        }
        Command::Verify { suite } => {
            let inst = Instance::new(
                rpath.file_stem().and_then(|s| s.to_str()).unwrap_or("instance"),
                real.clone(),
                params.clone(),
            );
            let mut sys = Systems::new();
            let entries = identities::run_suite(&inst, &mut sys, &suite)?;
            let mut pass = 0usize;
            let mut fail = 0usize;
            let mut inconclusive = 0usize;
            for e in &entries {
                let status = match e.status {
                    Status::Pass => {
                        pass += 1;
                        "pass"
                    }
                    Status::Fail => {
                        fail += 1;
                        "fail"
                    }
                    Status::Inconclusive => {
                        inconclusive += 1;
                        "inconclusive"
                    }
                };
                if e.status != Status::Pass || format == Format::Records {
                    emit(
                        format,
                        "identity",
                        Some(e.label.clone()),
                        Some(e.anchor.clone()).map(|a| {
                            if let Some(rb) = &e.residual {
                                format!("{a} | residual: {rb}")
                            } else {
                                a
                            }
                        }),
                        Some(status.into()),
                    );
                }
            }
            emit(
                format,
                "summary",
                Some(format!("suite {suite} on {}", inst.fingerprint())),
                Some(format!("{pass} pass, {fail} fail, {inconclusive} inconclusive")),
                None,
            );
            Ok(if fail > 0 || inconclusive > 0 { 2 } else { 0 })
        }
        Command::Iso { action, other } => {
            let act = parse_action(&real, &action)?;
            let transformed = isoclass::act(&real, &act, &params)?;
            let tf = transformed.to_file();
            emit(
                format,
                "transformed-params",
                None,
                Some(serde_json::to_string(&tf).unwrap()),
                None,
            );
            if let Some(path) = other {
                let expected = load_params(&real, &Some(path), &None)?;
                let same = expected.to_file().lambda == tf.lambda
                    && expected.to_file().nu == tf.nu
                    && expected.to_file().mu == tf.mu;
                emit(
                    format,
                    "comparison",
                    Some("transformed vs --other".into()),
                    Some(if same { "equal".into() } else { "different".into() }),
                    None,
                );
            }
            let failures = isoclass::relation_equivalence(&real, &act, &params, bound)?;
            if failures.is_empty() {
                emit(
                    format,
                    "equivalence",
                    None,
                    Some("every relation maps into the target ideal".into()),
                    Some("ok".into()),
                );
                Ok(0)
            } else {
                for f in &failures {
                    emit(format, "equivalence-failure", Some(f.clone()), None, Some("fail".into()));
                }
                Ok(2)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
