use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use magnus_core::aut::{generator_library, EndoJson, FreeGroupEndo, LIBRARY_KINDS};
use magnus_core::check::Verdict;
use magnus_core::ia_abel::{
    abelianize_ia_word, basis_label, lambda2_basis, parse_ia_word, tau1_matrix,
};
use magnus_core::johnson::Johnson;
use magnus_core::json::{ExpansionJson, IACoordinatesJson, SeriesJson, TensorJson, TensorMapJson};
use magnus_core::lcs::{graded_image, in_filtration_a, johnson_hom, lcs_degree, LcsDepth};
use magnus_core::matrix::MatrixJson;
use magnus_core::stasheff::{catalan, stasheff_vertices};
use magnus_core::surface::SurfaceContext;
use magnus_core::verify::{run_suite, SuiteConfig, SuiteReport, SUITES};
use magnus_core::{Error, MagnusExpansion, Word};

const DEFAULT_N: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "magnus",
    version,
    about = "Exact Magnus expansions and Johnson maps of free groups"
)]
pub struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit plain text.
    #[arg(long, global = true)]
    pub text: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a word: θ(γ) up to degree N.
    Expand {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        word: String,
    },
    /// Johnson map of an automorphism: all coordinates, or τ_p alone.
    Johnson {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Johnson homomorphism τ_m of an automorphism in A(m).
    JohnsonHom {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        aut: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Lower central series depth and graded image of a word.
    Lcs {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        word: String,
    },
    /// τ_1 on IA_n: coordinates of a word in the Magnus generators, or the full matrix.
    IaAbel {
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        word: Option<String>,
        #[arg(long)]
        matrix: bool,
    },
    /// Identities for the boundary word of a genus g surface.
    Surface {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value = "all", value_parser = ["all", "theta2", "nu0", "tau"])]
        check: String,
        #[arg(long, default_value = "std")]
        theta: String,
        #[arg(long = "N")]
        trunc: Option<usize>,
    },
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
    /// Vertices of the Stasheff polytope on p letters.
    Stasheff {
        #[arg(long)]
        p: usize,
        /// Print only the number of vertices.
        #[arg(long)]
        count: bool,
    },
    /// List a library of automorphisms.
    Aut {
        #[arg(long, value_parser = LIBRARY_KINDS)]
        list: String,
        #[arg(long, short = 'n')]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    /// Expansion file, or `std`.
    #[arg(long, default_value = "std")]
    theta: String,
    #[arg(long = "rank", short = 'n')]
    rank: Option<usize>,
    #[arg(long = "N")]
    trunc: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A suite name, `johnson` or `cochain`.
    suite: String,
    #[arg(long)]
    identity: Option<String>,
    #[arg(long = "rank", short = 'n', default_value_t = 3)]
    rank: usize,
    #[arg(long = "N", default_value_t = DEFAULT_N)]
    trunc: usize,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub struct Output {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

impl Output {
    fn ok(json: Value, text: String) -> Output {
        Output {
            ok: true,
            json,
            text,
        }
    }

    pub fn render(&self, text: bool) -> String {
        if text {
            self.text.trim_end().to_string()
        } else {
            serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("invalid JSON input: {e}"))
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

/// Largest generator index mentioned in a word text (at least 1).
fn mentioned_rank(text: &str) -> usize {
    let mut best = 1;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' || bytes[i] == b'X' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if let Ok(k) = text[start..end].parse::<usize>() {
                best = best.max(k);
            }
            i = end;
        } else {
            i += 1;
        }
    }
    best
}

fn load_aut(path: &PathBuf) -> Result<FreeGroupEndo> {
    let j: EndoJson = serde_json::from_str(&read(path)?)?;
    Ok(FreeGroupEndo::try_from(j)?)
}

impl ThetaArgs {
    /// The expansion; `fallback_rank` applies to `std` when `--rank` is absent.
    fn load(&self, fallback_rank: usize) -> Result<MagnusExpansion> {
        if self.theta == "std" {
            let rank = self.rank.unwrap_or(fallback_rank);
            return Ok(MagnusExpansion::standard(
                rank,
                self.trunc.unwrap_or(DEFAULT_N),
            )?);
        }
        let path = PathBuf::from(&self.theta);
        let j: ExpansionJson = serde_json::from_str(&read(&path)?)?;
        let theta = MagnusExpansion::try_from(&j)?;
        if let Some(r) = self.rank {
            if r != theta.rank() {
                return Err(CliError::Usage(format!(
                    "--rank {r} disagrees with the expansion rank {}",
                    theta.rank()
                )));
            }
        }
        match self.trunc {
            Some(n) if n != theta.trunc() => Ok(theta.with_trunc(n)?),
            _ => Ok(theta),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Expand { theta, word } => expand(theta, word),
        Command::Johnson { theta, aut, p } => johnson(theta, aut, *p),
        Command::JohnsonHom { theta, aut, m } => johnson_hom_cmd(theta, aut, *m),
        Command::Lcs { theta, word } => lcs(theta, word),
        Command::IaAbel { n, word, matrix } => ia_abel(*n, word.as_deref(), *matrix),
        Command::Surface {
            g,
            check,
            theta,
            trunc,
        } => surface(*g, check, theta, *trunc),
        Command::Verify(args) => verify(args),
        Command::Stasheff { p, count } => stasheff(*p, *count),
        Command::Aut { list, n } => aut_list(list, *n),
    }
}

fn expand(args: &ThetaArgs, text: &str) -> Result<Output> {
    let theta = args.load(mentioned_rank(text))?;
    let w = Word::parse(text, theta.rank())?;
    let s = theta.evaluate(&w)?;
    Ok(Output::ok(
        serde_json::to_value(SeriesJson::from(&s))?,
        s.render(),
    ))
}

fn johnson(args: &ThetaArgs, aut: &PathBuf, p: Option<usize>) -> Result<Output> {
    let phi = load_aut(aut)?;
    let theta = args.load(phi.rank())?;
    let j = Johnson::new(&theta)?;
    match p {
        Some(p) => {
            let t = j.component(&phi, p)?;
            Ok(Output::ok(
                serde_json::to_value(TensorMapJson::from(&t))?,
                t.render(),
            ))
        }
        None => {
            let c = j.coordinates(&phi)?;
            let text = (1..theta.trunc())
                .map(|p| Ok(format!("tau{p}: {}", c.component(p)?.render())))
                .collect::<std::result::Result<Vec<_>, Error>>()?
                .join("\n");
            Ok(Output::ok(
                serde_json::to_value(IACoordinatesJson::from(&c))?,
                text,
            ))
        }
    }
}

fn johnson_hom_cmd(args: &ThetaArgs, aut: &PathBuf, m: usize) -> Result<Output> {
    let phi = load_aut(aut)?;
    let theta = args.load(phi.rank())?;
    if m == 0 || m + 1 > theta.trunc() {
        return Err(CliError::Usage(format!(
            "--m must satisfy 1 <= m <= N - 1 = {}",
            theta.trunc() - 1
        )));
    }
    if !in_filtration_a(&theta, &phi, m)? {
        return Err(CliError::Usage(format!(
            "the automorphism does not lie in A({m})"
        )));
    }
    let t = johnson_hom(&theta, &phi, m)?;
    Ok(Output::ok(
        serde_json::to_value(TensorMapJson::from(&t))?,
        t.render(),
    ))
}

fn lcs(args: &ThetaArgs, text: &str) -> Result<Output> {
    let theta = args.load(mentioned_rank(text))?;
    let w = Word::parse(text, theta.rank())?;
    let depth = lcs_degree(&theta, &w)?;
    let (json, mut lines) = (
        json!({"word": w.render(), "depth": depth.to_string()}),
        vec![format!("word: {}", w.render()), format!("depth: {depth}")],
    );
    let mut json = json;
    if let LcsDepth::Exactly(m) = depth {
        let img = graded_image(&theta, &w, m)?;
        lines.push(format!("graded image: {}", img.tensor().render()));
        json["graded_image"] = serde_json::to_value(TensorJson::from(img.tensor()))?;
    }
    Ok(Output::ok(json, lines.join("\n")))
}

fn ia_abel(n: usize, word: Option<&str>, matrix: bool) -> Result<Output> {
    let labels: Vec<String> = lambda2_basis(n).into_iter().map(basis_label).collect();
    if matrix {
        let m = tau1_matrix(n)?;
        let det = m.det()?;
        let json = json!({
            "n": n,
            "basis": labels,
            "rows": MatrixJson::from(&m).rows,
            "det": det.to_string(),
        });
        let rows = MatrixJson::from(&m).rows;
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut text: Vec<String> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| format!("{c:>width$}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        text.push(format!("det = {det}"));
        let text = text.join("\n");
        return Ok(Output::ok(json, text));
    }
    let w = parse_ia_word(word.unwrap_or_default(), n)?;
    let c = abelianize_ia_word(&w, n)?;
    let text = labels
        .iter()
        .zip(&c.values)
        .filter(|(_, v)| **v != 0)
        .map(|(l, v)| format!("{v:+} {l}"))
        .collect::<Vec<_>>()
        .join("\n");
    let json = json!({"n": n, "basis": labels, "values": c.values});
    Ok(Output::ok(
        json,
        if text.is_empty() { "0".into() } else { text },
    ))
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!("{} {}", if v.holds { "PASS" } else { "FAIL" }, v.identity);
    if let (Some(l), Some(r)) = (&v.lhs, &v.rhs) {
        s.push_str(&format!("\n  lhs: {l}\n  rhs: {r}"));
    }
    s
}

fn surface(g: usize, check: &str, theta: &str, trunc: Option<usize>) -> Result<Output> {
    let s = SurfaceContext::new(g)?;
    let args = ThetaArgs {
        theta: theta.to_string(),
        rank: Some(s.rank()),
        trunc,
    };
    let theta = args.load(s.rank())?;
    let mut verdicts = Vec::new();
    let mut extra = json!({});
    if check == "all" || check == "theta2" {
        verdicts.push(s.theta2_w0_check(&theta)?);
    }
    if check == "all" || check == "nu0" {
        let w0 = s.boundary_word();
        let nu = s.nu0(&w0)?;
        let nu_inv = s.nu0(&w0.inv())?;
        extra["nu0"] = json!({"w0": nu, "w0^-1": nu_inv});
        verdicts.push(Verdict::compare("nu0(w0) = -1", &nu, &-1, |v| {
            v.to_string()
        }));
        verdicts.push(Verdict::compare("nu0(w0^-1) = 1", &nu_inv, &1, |v| {
            v.to_string()
        }));
    }
    if check == "all" || check == "tau" {
        if theta.trunc() < 3 {
            return Err(CliError::Usage("the tau check needs N >= 3".into()));
        }
        verdicts.push(s.tau2_boundary_check(&theta)?);
    }
    let ok = verdicts.iter().all(|v| v.holds);
    let text = std::iter::once(format!("g = {g}, w0 = {}", s.boundary_word()))
        .chain(verdicts.iter().map(verdict_text))
        .collect::<Vec<_>>()
        .join("\n");
    let mut json = json!({
        "g": g,
        "w0": s.boundary_word().render(),
        "passed": ok,
        "checks": verdicts,
    });
    if let Some(nu) = extra.get("nu0") {
        json["nu0"] = nu.clone();
    }
    Ok(Output { ok, json, text })
}

fn suite_names(args: &VerifyArgs) -> Result<Vec<&'static str>> {
    match args.suite.as_str() {
        "johnson" => Ok(vec!["eq24", "eq26", "lemma22", "lemma23"]),
        "cochain" => match args.identity.as_deref() {
            Some("eq49") => Ok(vec!["eq49"]),
            Some("tau2") => Ok(vec!["eq26"]),
            Some("dsquare") => Ok(vec!["dsquare"]),
            Some(other) => Err(CliError::Usage(format!(
                "unknown cochain identity {other:?}; expected eq49, tau2 or dsquare"
            ))),
            None => Ok(vec!["eq49", "eq26", "dsquare"]),
        },
        "all" => Ok(SUITES.to_vec()),
        name => SUITES
            .iter()
            .find(|s| **s == name)
            .map(|s| vec![*s])
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown suite {name:?}; expected johnson, cochain, all or one of {}",
                    SUITES.join(", ")
                ))
            }),
    }
}

fn report_text(r: &SuiteReport) -> String {
    let mut s = format!(
        "{} {}: {}/{} trials passed",
        if r.all_passed() { "PASS" } else { "FAIL" },
        r.suite,
        r.passed,
        r.passed + r.failed
    );
    if let Some(f) = &r.first_failure {
        s.push_str(&format!(
            "\n  trial {}: {}\n  inputs: {}",
            f.trial, f.identity, f.inputs
        ));
        if let (Some(l), Some(rhs)) = (&f.lhs, &f.rhs) {
            s.push_str(&format!("\n  lhs: {l}\n  rhs: {rhs}"));
        }
    }
    s
}

fn verify(args: &VerifyArgs) -> Result<Output> {
    if args.identity.is_some() && args.suite != "cochain" {
        return Err(CliError::Usage(
            "--identity applies only to the cochain suite".into(),
        ));
    }
    let cfg = SuiteConfig {
        rank: args.rank,
        trunc: args.trunc,
        trials: args.trials as usize,
        seed: args.seed,
    };
    let reports = suite_names(args)?
        .into_iter()
        .map(|name| run_suite(name, &cfg))
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    let ok = reports.iter().all(SuiteReport::all_passed);
    let text = reports
        .iter()
        .map(report_text)
        .collect::<Vec<_>>()
        .join("\n");
    let json = json!({"passed": ok, "reports": reports});
    Ok(Output { ok, json, text })
}

fn stasheff(p: usize, count: bool) -> Result<Output> {
    if count {
        let c = catalan(p);
        return Ok(Output::ok(json!(c), c.to_string()));
    }
    let verts = stasheff_vertices(p);
    let rows: Vec<Value> = verts
        .iter()
        .map(|w| json!({"word": w.render(), "sgn": w.sgn()}))
        .collect();
    let text = verts
        .iter()
        .map(|w| format!("{:+} {}", w.sgn(), w.render()))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::ok(
        json!({"p": p, "count": verts.len(), "vertices": rows}),
        text,
    ))
}

fn aut_list(kind: &str, n: usize) -> Result<Output> {
    let lib = generator_library(kind, n)?;
    let rows: Vec<Value> = lib
        .iter()
        .map(|e| json!({"label": e.label, "aut": EndoJson::from(&e.endo)}))
        .collect();
    let text = lib
        .iter()
        .map(|e| {
            let imgs: Vec<String> = e.endo.images().iter().map(Word::render).collect();
            format!("{}: {}", e.label, imgs.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::ok(
        json!({"kind": kind, "n": n, "library": rows}),
        text,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_from_word_text() {
        assert_eq!(mentioned_rank("x1*x2^-1"), 2);
        assert_eq!(mentioned_rank("x12"), 12);
        assert_eq!(mentioned_rank(""), 1);
    }

    #[test]
    fn suite_selection() {
        let args = |suite: &str, identity: Option<&str>| VerifyArgs {
            suite: suite.into(),
            identity: identity.map(Into::into),
            rank: 3,
            trunc: 4,
            trials: 1,
            seed: 0,
        };
        assert_eq!(
            suite_names(&args("cochain", Some("tau2"))).unwrap(),
            vec!["eq26"]
        );
        assert_eq!(suite_names(&args("eq31", None)).unwrap(), vec!["eq31"]);
        assert!(suite_names(&args("bogus", None)).is_err());
        assert!(suite_names(&args("cochain", Some("bogus"))).is_err());
    }
}
