//! Command-line front end: TOML jobs in, deterministic JSON or text out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{decide_gk, dj_normal_form, GrowthWitnessKind, Verdict};
use crate::datum::{emit_presentation, validate_datum, DatumError, DatumInput};
use crate::freealg::{BraidingSpec, FreeAlgError};
use crate::pbw::{nichols_truncate_with_limit, pbw_count_check, pbw_extract, star_height, PbwError, DEFAULT_WORD_LIMIT};
use crate::scalars::{Field, FieldError, FieldSpec};
use crate::series::{expand_product, factor_series, GradedSeries, Height, RootFactor, SeriesError};
use crate::weyl::{
    explore, reflect, twist_equivalent, weyl_equivalent, weyl_heckenberger_equivalent, Equivalence,
    GroupoidState, Verdict as GroupoidVerdict, WeylError,
};

pub const DEFAULT_MAX_DEGREE: usize = 8;
pub const DEFAULT_STATE_CAP: usize = 10_000;
pub const DEFAULT_M_SCAN: u64 = 50;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invariant(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Parse(format!("[field]: {e}"))
    }
}

impl From<FreeAlgError> for CliError {
    fn from(e: FreeAlgError) -> Self {
        match e {
            FreeAlgError::DegreeCap { .. } => CliError::Cap(e.to_string()),
            FreeAlgError::Entry(i, j, ref p) => CliError::Parse(format!("braiding.q[{}][{}]: {p}", i + 1, j + 1)),
            e => CliError::Parse(format!("[braiding]: {e}")),
        }
    }
}

impl From<PbwError> for CliError {
    fn from(e: PbwError) -> Self {
        match e {
            PbwError::WordLimit { .. } | PbwError::BeyondTruncation { .. } => CliError::Cap(e.to_string()),
            PbwError::FreeAlg(f) => f.into(),
            e => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<DatumError> for CliError {
    fn from(e: DatumError) -> Self {
        match e {
            DatumError::Character(..) | DatumError::Component(..) | DatumError::Shape { .. } => {
                CliError::Parse(format!("[datum]: {e}"))
            }
            DatumError::FreeAlg(f) => f.into(),
            e => CliError::Invariant(format!("[datum]: {e}")),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::BadAlpha(_) | SeriesError::Rank(_) => CliError::Parse(format!("[series]: {e}")),
            e => CliError::Invariant(format!("[series]: {e}")),
        }
    }
}

impl From<WeylError> for CliError {
    fn from(e: WeylError) -> Self {
        match e {
            WeylError::GroupCap(_) => CliError::Cap(e.to_string()),
            WeylError::IndexOutOfRange { .. } => CliError::Parse(e.to_string()),
            e => CliError::Invariant(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FieldSection {
    #[serde(default = "one")]
    pub cyclotomic_order: u32,
    #[serde(default)]
    pub parameters: Vec<String>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraidingSection {
    #[serde(default)]
    pub theta: Option<usize>,
    pub q: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Caps {
    pub max_degree: Option<usize>,
    pub states: Option<usize>,
    pub m_scan: Option<u64>,
    pub words: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesSection {
    pub theta: usize,
    pub cap: usize,
    /// Height used for every degree when no braiding is given.
    #[serde(default)]
    pub height: Option<Height>,
    #[serde(default)]
    pub terms: Vec<SeriesTerm>,
    #[serde(default)]
    pub product: Vec<RootFactor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub degree: Vec<i64>,
    pub coefficient: i64,
}

/// A job file. Unknown sections such as `[expect]` are ignored.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct JobFile {
    #[serde(default)]
    pub field: FieldSection,
    pub braiding: Option<BraidingSection>,
    #[serde(default)]
    pub caps: Caps,
    pub series: Option<SeriesSection>,
    pub datum: Option<DatumInput>,
    pub expect: Option<toml::Value>,
}

impl JobFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(format!("{}: {e}", origin.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn field(&self) -> Result<Field, CliError> {
        let names: Vec<&str> = self.field.parameters.iter().map(String::as_str).collect();
        Ok(Field::new(FieldSpec::new(self.field.cyclotomic_order, &names))?)
    }

    pub fn braiding(&self) -> Result<BraidingSpec, CliError> {
        let b = self
            .braiding
            .as_ref()
            .ok_or_else(|| CliError::Parse("missing [braiding] section".into()))?;
        if let Some(t) = b.theta {
            if t != b.q.len() {
                return Err(CliError::Parse(format!(
                    "[braiding]: theta = {t} but q has {} rows",
                    b.q.len()
                )));
            }
        }
        let spec = BraidingSpec::parse(&self.field()?, &b.q)?;
        Ok(spec)
    }

    fn positive<T: PartialOrd + Default + Copy + std::fmt::Display>(
        name: &str,
        v: Option<T>,
        default: T,
    ) -> Result<T, CliError> {
        let v = v.unwrap_or(default);
        if v <= T::default() {
            return Err(CliError::Parse(format!("[caps]: {name} must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn max_degree(&self, flag: Option<usize>) -> Result<usize, CliError> {
        Self::positive("max_degree", flag.or(self.caps.max_degree), DEFAULT_MAX_DEGREE)
    }

    pub fn state_cap(&self, flag: Option<usize>) -> Result<usize, CliError> {
        Self::positive("states", flag.or(self.caps.states), DEFAULT_STATE_CAP)
    }

    pub fn m_scan(&self) -> Result<u64, CliError> {
        Self::positive("m_scan", self.caps.m_scan, DEFAULT_M_SCAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "nichols", version, about = "Nichols algebras of diagonal type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Input job file (TOML).
    pub input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long, short, visible_alias = "report")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan detection and the finite/infinite GK decision.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Answer Undecided unless every q_ii is not a root of unity.
        #[arg(long)]
        generic_required: bool,
    },
    /// Truncated Nichols algebra: dimensions, PBW generators, roots.
    Roots {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Weyl groupoid exploration.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cap: Option<usize>,
        /// Write nodes and labelled arrows as JSON.
        #[arg(long)]
        emit_graph: Option<PathBuf>,
        /// Exit with status 3 when the braiding is not standard.
        #[arg(long)]
        check_standard: bool,
        /// Compare with the braiding of another job file.
        #[arg(long)]
        equivalent: Option<PathBuf>,
    },
    /// Factor a Hilbert series into q_h factors.
    SeriesFactor {
        #[command(flatten)]
        common: Common,
    },
    /// Presentation of U(D) from a generic datum.
    Present {
        #[command(flatten)]
        common: Common,
    },
    /// One reflection of the canonical basis.
    Reflect {
        #[command(flatten)]
        common: Common,
        /// 1-based vertex.
        #[arg(long)]
        index: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Analyze { common, .. }
            | Command::Roots { common, .. }
            | Command::Weyl { common, .. }
            | Command::SeriesFactor { common }
            | Command::Present { common }
            | Command::Reflect { common, .. } => common,
        }
    }
}

/// A finished report. A report may accompany an error status (cap overflow,
/// failed invariant), in which case it is still written.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub status: Result<(), CliError>,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            status: Ok(()),
        }
    }
}

fn matrix_strings(q: &[Vec<crate::scalars::Scalar>]) -> Vec<Vec<String>> {
    q.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn analyze(job: &JobFile, generic_required: bool) -> Result<Outcome, CliError> {
    let spec = job.braiding()?;
    let verdict = decide_gk(&spec, generic_required, job.m_scan()?);
    let mut report = json!({
        "status": "",
        "cartan_matrix": null,
        "symmetrizer": null,
        "types": [],
        "serre_relations": [],
        "witnesses": [],
    });
    let mut text = String::new();
    match &verdict {
        Verdict::FiniteGk {
            cartan,
            serre_relations,
        } => {
            report["status"] = json!("finite_gk");
            report["cartan_matrix"] = json!(cartan.a);
            report["symmetrizer"] = json!(cartan.symmetrizer);
            report["types"] = json!(cartan.labels);
            report["serre_relations"] = json!(serre_relations
                .iter()
                .map(|r| format!("{} = 0", r.element))
                .collect::<Vec<_>>());
            if let Ok(forms) = dj_normal_form(&spec, cartan) {
                report["dj_normal_form"] = json!(forms);
            }
            let _ = writeln!(text, "finite GK dimension, type {}", cartan.labels.join(" x "));
            for r in serre_relations {
                let _ = writeln!(text, "  {} = 0", r.element);
            }
        }
        Verdict::InfiniteGk { witness } => {
            report["status"] = json!("infinite_gk");
            report["witnesses"] = json!([witness]);
            if let GrowthWitnessKind::NonFiniteType { .. } = witness {
                if let Ok(c) = crate::cartan::detect_cartan(&spec, job.m_scan()?) {
                    report["cartan_matrix"] = json!(c.a);
                    report["symmetrizer"] = json!(c.symmetrizer);
                }
            }
            let _ = writeln!(text, "infinite GK dimension: {}", describe_witness(witness));
        }
        Verdict::NotCartan { witness } => {
            report["status"] = json!("not_cartan");
            report["witnesses"] = json!([witness]);
            let _ = writeln!(text, "not of Cartan type: {witness}");
        }
        Verdict::Undecided { reason } => {
            report["status"] = json!("undecided");
            report["reason"] = json!(reason);
            let _ = writeln!(text, "undecided: {reason}");
        }
    }
    Ok(Outcome::ok(report, text))
}

fn describe_witness(w: &GrowthWitnessKind) -> String {
    match w {
        GrowthWitnessKind::AdString { pair } => {
            format!("(ad x{})^m(x{}) never vanishes", pair.0 + 1, pair.1 + 1)
        }
        GrowthWitnessKind::NonFiniteType { component } => format!(
            "Cartan matrix of component {:?} is not of finite type",
            component.iter().map(|i| i + 1).collect::<Vec<_>>()
        ),
    }
}

pub fn roots(job: &JobFile, max_degree: Option<usize>) -> Result<Outcome, CliError> {
    let spec = job.braiding()?;
    let d = job.max_degree(max_degree)?;
    let limit = job.caps.words.unwrap_or(DEFAULT_WORD_LIMIT);
    let t = nichols_truncate_with_limit(&spec, d, limit)?;
    let r = pbw_extract(&t);
    let check = pbw_count_check(&t, &r);
    let mut json = serde_json::to_value(&r).map_err(|e| CliError::Internal(e.to_string()))?;
    json["root_count"] = json!(r.root_count());
    json["count_check"] = json!({
        "passed": check.passed(),
        "first_mismatch": check.first_mismatch,
        "rows": check.rows,
    });
    let mut text = format!("dims by degree: {:?}\n", r.dims);
    for g in &r.generators {
        let _ = writeln!(text, "  [{}]  degree {:?}  height {}", g.word, g.degree, g.height);
    }
    let _ = writeln!(text, "{} roots, count check {}", r.root_count(), if check.passed() { "ok" } else { "FAILED" });
    let status = if check.passed() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "PBW count disagrees with dimensions in degree {}",
            check.first_mismatch.unwrap()
        )))
    };
    Ok(Outcome { json, text, status })
}

fn state_json(s: &GroupoidState) -> Value {
    json!({ "basis": s.basis, "q": matrix_strings(&s.q), "m": s.m })
}

pub fn weyl(
    job: &JobFile,
    cap: Option<usize>,
    emit_graph: Option<&Path>,
    check_standard: bool,
    equivalent: Option<&Path>,
) -> Result<Outcome, CliError> {
    let spec = job.braiding()?;
    let cap = job.state_cap(cap)?;
    let m_cap = job.m_scan()?;
    let rep = explore(&spec, cap, m_cap);
    let verdict = match rep.verdict {
        GroupoidVerdict::Finite => json!("finite"),
        GroupoidVerdict::ExceededCap(c) => json!({ "exceeded_cap": c }),
    };
    let mut json = json!({
        "state_count": rep.state_count(),
        "verdict": verdict,
        "standard": rep.standard,
        "w0_order": rep.w0_order,
        "roots": rep.roots,
        "states": rep.states.iter().map(state_json).collect::<Vec<_>>(),
        "violations": rep.violations,
    });
    let mut text = format!(
        "{} states, {}, standard = {}\n",
        rep.state_count(),
        match rep.verdict {
            GroupoidVerdict::Finite => "finite".to_string(),
            GroupoidVerdict::ExceededCap(c) => format!("exceeded cap {c}"),
        },
        rep.standard
    );
    if let Some(w) = rep.w0_order {
        let _ = writeln!(text, "|W0| = {w}");
    }
    if let Some(path) = equivalent {
        let other = JobFile::load(path)?.braiding()?;
        if other.field() != spec.field() {
            return Err(CliError::Parse(format!("{}: different scalar field", path.display())));
        }
        let eq = |e: Equivalence| match e {
            Equivalence::Equivalent => json!(true),
            Equivalence::NotEquivalent => json!(false),
            Equivalence::Inconclusive(c) => json!({ "inconclusive": c }),
        };
        let twist = other.theta() == spec.theta() && twist_equivalent(spec.matrix(), other.matrix());
        let w = weyl_equivalent(&spec, &other, cap, m_cap);
        let wh = weyl_heckenberger_equivalent(&spec, &other, cap, m_cap);
        json["equivalence"] = json!({ "twist": twist, "weyl": eq(w), "weyl_heckenberger": eq(wh) });
        let _ = writeln!(text, "twist: {twist}, weyl: {w:?}, weyl-heckenberger: {wh:?}");
    }
    if let Some(path) = emit_graph {
        let graph = json!({
            "nodes": rep.states.iter().enumerate().map(|(k, s)| {
                json!({ "id": k, "basis": s.basis, "q": matrix_strings(&s.q) })
            }).collect::<Vec<_>>(),
            "edges": rep.arrows.iter().map(|a| json!({ "from": a.from, "to": a.to, "index": a.index + 1 })).collect::<Vec<_>>(),
        });
        write_json(path, &graph)?;
    }
    let status = if !rep.violations.is_empty() {
        Err(CliError::Invariant(rep.violations.join("; ")))
    } else if let GroupoidVerdict::ExceededCap(c) = rep.verdict {
        Err(CliError::Cap(format!("groupoid exploration exceeded {c} states")))
    } else if check_standard && !rep.standard {
        Err(CliError::Invariant("braiding is not standard".into()))
    } else {
        Ok(())
    };
    Ok(Outcome { json, text, status })
}

pub fn series_factor(job: &JobFile) -> Result<Outcome, CliError> {
    let s = job
        .series
        .as_ref()
        .ok_or_else(|| CliError::Parse("missing [series] section".into()))?;
    let series = if !s.product.is_empty() {
        expand_product(&s.product, s.theta, s.cap)?
    } else {
        let mut g = GradedSeries {
            theta: s.theta,
            cap: s.cap,
            coeffs: Default::default(),
        };
        g.coeffs.insert(vec![0; s.theta], 1);
        for t in &s.terms {
            if t.degree.len() != s.theta || t.degree.iter().any(|&x| x < 0) {
                return Err(SeriesError::BadAlpha(t.degree.clone()).into());
            }
            if t.degree.iter().sum::<i64>() as usize <= s.cap && t.coefficient != 0 {
                g.coeffs.insert(t.degree.clone(), t.coefficient);
            }
        }
        g
    };
    let spec = match &job.braiding {
        Some(_) => Some(job.braiding()?),
        None => None,
    };
    let fixed = s.height.unwrap_or(Height::Infinite);
    let height_of = |a: &[i64]| match &spec {
        Some(b) => star_height(&b.chi(a, a)),
        None => fixed,
    };
    let f = factor_series(&series, &height_of)?;
    let json = serde_json::to_value(&f).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut text = String::new();
    for x in &f.factors {
        let _ = writeln!(text, "q_{}(X^{:?})", x.height, x.alpha);
    }
    Ok(Outcome::ok(json, text))
}

pub fn present(job: &JobFile) -> Result<Outcome, CliError> {
    let raw = job
        .datum
        .as_ref()
        .ok_or_else(|| CliError::Parse("missing [datum] section".into()))?;
    let d = validate_datum(&job.field()?, raw)?;
    let p = emit_presentation(&d)?;
    let json = serde_json::to_value(&p).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Outcome::ok(json, p.to_text()))
}

pub fn reflect_once(job: &JobFile, index: usize) -> Result<Outcome, CliError> {
    let spec = job.braiding()?;
    let m_cap = job.m_scan()?;
    if index == 0 || index > spec.theta() {
        return Err(CliError::Parse(format!("--index {index} out of range 1..={}", spec.theta())));
    }
    let src = GroupoidState::initial(&spec, m_cap);
    let dst = reflect(&src, index - 1, m_cap)?;
    let json = json!({ "index": index, "source": state_json(&src), "target": state_json(&dst) });
    let mut text = String::new();
    for row in matrix_strings(&dst.q) {
        let _ = writeln!(text, "{}", row.join("  "));
    }
    Ok(Outcome::ok(json, text))
}

fn write_json(path: &Path, v: &Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    std::fs::write(path, s + "\n").map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    let job = JobFile::load(&cmd.common().input)?;
    match cmd {
        Command::Analyze { generic_required, .. } => analyze(&job, *generic_required),
        Command::Roots { max_degree, .. } => roots(&job, *max_degree),
        Command::Weyl {
            cap,
            emit_graph,
            check_standard,
            equivalent,
            ..
        } => weyl(&job, *cap, emit_graph.as_deref(), *check_standard, equivalent.as_deref()),
        Command::SeriesFactor { .. } => series_factor(&job),
        Command::Present { .. } => present(&job),
        Command::Reflect { index, .. } => reflect_once(&job, *index),
    }
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let common = cli.command.common();
    let outcome = match std::panic::catch_unwind(|| execute(&cli.command)) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
        Err(_) => return 5,
    };
    let body = match common.format {
        Format::Json => match serde_json::to_string_pretty(&outcome.json) {
            Ok(s) => s + "\n",
            Err(e) => {
                eprintln!("error: {e}");
                return 5;
            }
        },
        Format::Text => outcome.text.clone(),
    };
    match &common.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: {}: {e}", p.display());
                return 5;
            }
        }
        None => print!("{body}"),
    }
    match outcome.status {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
