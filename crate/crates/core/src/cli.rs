//! Command-line driver.
//!
//! Every subcommand produces a [`Report`]. Verdicts live in the report, the
//! exit status only says whether the command ran: 0 when it did, 1 for a
//! usage error, 2 for unreadable or invalid input (including a witness that
//! fails replay).
//!
//! Norm families for `nc1`/`nc2` come either from flags or from a family
//! file, whose paths are relative to the file itself:
//!
//! ```text
//! model model.mas
//! norm n1.norm
//! norm n2.norm
//! active 0
//! observer c_v
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ctl::{check, Formula};
use crate::dsl::{parse_formula, parse_model, parse_nfa, parse_norm, write_model, write_norm, ParseError};
use crate::ecosystem::{
    gen_ecosystem, norm_fifo, norm_round_robin, norm_skip2, objectives, static_norms_simple, EcoConfig,
};
use crate::kripke::{apply_norm, ProductState};
use crate::model::Mas;
use crate::norm::NormativeSystem;
use crate::recognition::{
    build_nfa_recognition_instance, check_nc1_witness, check_nc2_witness, decide_nc1, decide_nc2_detailed,
    nc1_bruteforce, nc2_bruteforce, LassoWitness, NormFamily, RecognitionVerdict,
};
use crate::synthesis::{synthesize_dynamic, synthesize_static, SynthesisBudget, SynthesisOutcome};

#[derive(Parser, Debug)]
#[command(name = "normsys", version, about = "Verify, synthesise and recognise norms of multiagent systems")]
struct Cli {
    /// Print a single JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Leave timings out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a model and, optionally, norms against it.
    Validate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        norm: Vec<PathBuf>,
    },
    /// Check a CTL formula on a model under a norm.
    Check {
        #[arg(long)]
        model: PathBuf,
        /// Defaults to the norm that forbids nothing.
        #[arg(long)]
        norm: Option<PathBuf>,
        #[command(flatten)]
        formula: FormulaArgs,
    },
    /// Search for a norm under which a formula holds.
    Synth {
        mode: SynthMode,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Largest number of normative states tried (dynamic mode).
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        /// Maximum number of candidates verified.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Where to write a found norm.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether every long enough run reveals the active norm.
    Nc1(RecognizeArgs),
    /// Decide whether some run reveals the active norm.
    Nc2(RecognizeArgs),
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// The producer/consumer ecosystem with its norms and objectives.
    Eco {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// The recognition instance of an automaton.
    NfaInstance {
        #[arg(long)]
        nfa: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SynthMode {
    Static,
    Dynamic,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FormulaArgs {
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RecognizeArgs {
    #[arg(long, conflicts_with_all = ["model", "norms", "observer"])]
    family: Option<PathBuf>,
    #[arg(long, required_unless_present = "family")]
    model: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required_unless_present = "family")]
    norms: Vec<PathBuf>,
    /// Index of the active norm; overrides the family file.
    #[arg(long)]
    active: Option<usize>,
    /// The agent whose observations the outside observer shares.
    #[arg(long, required_unless_present = "family")]
    observer: Option<String>,
    /// Cross-check against the path-enumerating procedure up to this depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Replay a witness file instead of deciding.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

/// The outcome of one invocation.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    fn new(command: &str, verdict: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            verdict: verdict.into(),
            details: BTreeMap::new(),
            witness: None,
            timings_ms: Some(BTreeMap::new()),
        }
    }

    fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.into(), value.into());
    }

    fn time(&mut self, key: &str, since: Instant) {
        if let Some(t) = &mut self.timings_ms {
            t.insert(key.into(), since.elapsed().as_secs_f64() * 1e3);
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.verdict);
        for (k, v) in &self.details {
            match v {
                Value::String(s) if s.contains('\n') => {
                    out.push_str(&format!("{k}:\n"));
                    for line in s.lines() {
                        out.push_str(&format!("    {line}\n"));
                    }
                }
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        if let Some(w) = &self.witness {
            out.push_str("witness:\n");
            out.push_str(&witness_text(w));
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                out.push_str(&format!("time {k}: {v:.3} ms\n"));
            }
        }
        out
    }
}

/// A product state written with names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub state: String,
    pub norm: String,
}

/// Witness file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessDoc {
    /// Two runs, active first, that agree on observations forever.
    Lasso { rival: usize, stem: Vec<[StepDoc; 2]>, cycle: Vec<[StepDoc; 2]> },
    /// A run of the active norm no rival can reproduce.
    Path { path: Vec<StepDoc> },
}

fn witness_text(w: &Value) -> String {
    let Ok(doc) = serde_json::from_value::<WitnessDoc>(w.clone()) else {
        return format!("    {w}\n");
    };
    let step = |s: &StepDoc| format!("({}, {})", s.state, s.norm);
    let mut out = String::new();
    match doc {
        WitnessDoc::Lasso { rival, stem, cycle } => {
            out.push_str(&format!("    rival {rival}\n"));
            for [a, b] in &stem {
                out.push_str(&format!("    {}  ~  {}\n", step(a), step(b)));
            }
            out.push_str("    loop:\n");
            for [a, b] in &cycle {
                out.push_str(&format!("    {}  ~  {}\n", step(a), step(b)));
            }
        }
        WitnessDoc::Path { path } => {
            for s in &path {
                out.push_str(&format!("    {}\n", step(s)));
            }
        }
    }
    out
}

/// Any failure that maps to exit status 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = std::result::Result<Report, InputError>;

fn read(path: &Path) -> std::result::Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), InputError> {
    fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: crate::Result<T>) -> std::result::Result<T, InputError> {
    r.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> std::result::Result<Mas, InputError> {
    in_file(path, parse_model(&read(path)?))
}

fn load_norm(path: &Path, m: &Mas) -> std::result::Result<NormativeSystem, InputError> {
    in_file(path, parse_norm(&read(path)?, m))
}

fn load_formula(args: &FormulaArgs) -> std::result::Result<Formula, InputError> {
    match (&args.formula, &args.formula_file) {
        (Some(text), _) => Ok(parse_formula(text).map_err(|e| InputError(format!("formula: {e}")))?),
        (None, Some(path)) => Ok(in_file(path, parse_formula(&read(path)?).map_err(Into::into))?),
        (None, None) => Err(InputError("no formula given".into())),
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Validate { model, norm } => cmd_validate(model, norm),
        Command::Check { model, norm, formula } => cmd_check(model, norm.as_deref(), formula),
        Command::Synth { mode, model, formula, kmax, budget, time_limit, out } => {
            cmd_synth(*mode, model, formula, *kmax, *budget, *time_limit, out.as_deref())
        }
        Command::Nc1(a) => cmd_recognize(true, a),
        Command::Nc2(a) => cmd_recognize(false, a),
        Command::Gen { what: GenCommand::Eco { config, out } } => cmd_gen_eco(config, out),
        Command::Gen { what: GenCommand::NfaInstance { nfa, out } } => cmd_gen_nfa(nfa, out),
    };
    match result {
        Ok(mut report) => {
            if cli.no_timing {
                report.timings_ms = None;
            }
            let text = if cli.json {
                serde_json::to_string(&report).expect("report serialises") + "\n"
            } else {
                report.render_text()
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn cmd_validate(model: &Path, norms: &[PathBuf]) -> Outcome {
    let t = Instant::now();
    let m = load_model(model)?;
    let mut report = Report::new("validate", "valid");
    report.detail("agents", m.num_agents());
    report.detail("states", m.num_states());
    report.detail("transitions", m.transitions().count());
    for p in norms {
        let n = load_norm(p, &m)?;
        report.detail(&format!("norm {}", p.display()), format!("{} normative states", n.num_norm_states()));
    }
    report.time("total", t);
    Ok(report)
}

fn cmd_check(model: &Path, norm: Option<&Path>, formula: &FormulaArgs) -> Outcome {
    let t = Instant::now();
    let m = load_model(model)?;
    let n = match norm {
        Some(p) => load_norm(p, &m)?,
        None => NormativeSystem::identity(&m),
    };
    let f = load_formula(formula)?;
    let parsed = Instant::now();
    let k = apply_norm(&m, &n)?;
    let holds = check(&k, &f);
    let mut report = Report::new("check", holds.to_string());
    report.detail("formula", f.to_string());
    report.detail("product_states", k.len());
    report.time("parse", t);
    report.time("check", parsed);
    Ok(report)
}

fn cmd_synth(
    mode: SynthMode,
    model: &Path,
    formula: &FormulaArgs,
    kmax: usize,
    budget: u64,
    time_limit: Option<f64>,
    out: Option<&Path>,
) -> Outcome {
    let m = load_model(model)?;
    let f = load_formula(formula)?;
    let time_limit = match time_limit {
        Some(s) if !(s.is_finite() && s > 0.0) => return Err(InputError("--time-limit must be positive".into())),
        s => s.map(Duration::from_secs_f64),
    };
    if kmax == 0 {
        return Err(InputError("--kmax must be positive".into()));
    }
    let budget = SynthesisBudget { max_candidates: budget, time_limit };
    let t = Instant::now();
    let outcome = match mode {
        SynthMode::Static => synthesize_static(&m, &f, budget)?,
        SynthMode::Dynamic => synthesize_dynamic(&m, &f, kmax, budget)?,
    };
    let mode_name = match mode {
        SynthMode::Static => "static",
        SynthMode::Dynamic => "dynamic",
    };
    let mut report = match outcome {
        SynthesisOutcome::Found(n) => {
            let text = write_norm(&n, &m);
            let mut r = Report::new("synth", "found");
            r.detail("norm_states", n.num_norm_states());
            if let Some(p) = out {
                write(p, &text)?;
                r.detail("written", p.display().to_string());
            }
            r.detail("norm", text);
            r
        }
        SynthesisOutcome::NoneExists(k) => {
            let mut r = Report::new("synth", "none-exists");
            r.detail("searched_up_to", k);
            r
        }
        SynthesisOutcome::BudgetExceeded(c) => {
            let mut r = Report::new("synth", "budget-exceeded");
            r.detail("candidates", c);
            r
        }
    };
    report.detail("mode", mode_name);
    report.detail("formula", f.to_string());
    report.time("search", t);
    Ok(report)
}

struct FamilySpec {
    model: PathBuf,
    norms: Vec<PathBuf>,
    active: usize,
    observer: String,
}

fn parse_family_file(path: &Path) -> std::result::Result<FamilySpec, InputError> {
    let text = read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut model = None;
    let mut norms = Vec::new();
    let mut active = 0;
    let mut observer = None;
    let fail = |line: usize, msg: String| InputError(format!("{}: {}", path.display(), ParseError::new(line, 1, msg)));
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).map(|(k, v)| (k, v.trim())).unwrap_or((line, ""));
        if value.is_empty() {
            return Err(fail(i + 1, format!("`{key}` needs a value")));
        }
        match key {
            "model" => model = Some(base.join(value)),
            "norm" => norms.push(base.join(value)),
            "active" => {
                active = value.parse().map_err(|_| fail(i + 1, format!("bad index `{value}`")))?;
            }
            "observer" => observer = Some(value.to_string()),
            _ => return Err(fail(i + 1, format!("unknown key `{key}`"))),
        }
    }
    let lines = text.lines().count().max(1);
    Ok(FamilySpec {
        model: model.ok_or_else(|| fail(lines, "missing `model` line".into()))?,
        norms,
        active,
        observer: observer.ok_or_else(|| fail(lines, "missing `observer` line".into()))?,
    })
}

fn load_family(a: &RecognizeArgs) -> std::result::Result<NormFamily, InputError> {
    let mut spec = match &a.family {
        Some(p) => parse_family_file(p)?,
        None => FamilySpec {
            model: a.model.clone().expect("required by clap"),
            norms: a.norms.clone(),
            active: 0,
            observer: a.observer.clone().expect("required by clap"),
        },
    };
    if let Some(i) = a.active {
        spec.active = i;
    }
    let m = load_model(&spec.model)?;
    let members = spec.norms.iter().map(|p| load_norm(p, &m)).collect::<std::result::Result<Vec<_>, _>>()?;
    let agent =
        m.agent_index(&spec.observer).ok_or_else(|| InputError(format!("unknown agent `{}`", spec.observer)))?;
    Ok(NormFamily::observed_by(m, members, spec.active, agent)?)
}

fn step_doc(f: &NormFamily, member: usize, p: ProductState) -> StepDoc {
    StepDoc {
        state: f.mas().state_name(p.state).to_string(),
        norm: f.members()[member].norm_state_name(p.norm).to_string(),
    }
}

fn step_of(f: &NormFamily, member: usize, d: &StepDoc) -> std::result::Result<ProductState, InputError> {
    let state = f.mas().state_id(&d.state).ok_or_else(|| InputError(format!("unknown state `{}`", d.state)))?;
    let norm = f.members()[member]
        .norm_state_id(&d.norm)
        .ok_or_else(|| InputError(format!("unknown normative state `{}` of member {member}", d.norm)))?;
    Ok(ProductState { state, norm })
}

/// Names the states of a lasso witness.
pub fn lasso_doc(f: &NormFamily, w: &LassoWitness) -> WitnessDoc {
    let pair = |&(l, r): &(ProductState, ProductState)| [step_doc(f, f.active(), l), step_doc(f, w.rival, r)];
    WitnessDoc::Lasso {
        rival: w.rival,
        stem: w.stem.iter().map(pair).collect(),
        cycle: w.cycle.iter().map(pair).collect(),
    }
}

/// Names the states of a run of the active member.
pub fn path_doc(f: &NormFamily, path: &[ProductState]) -> WitnessDoc {
    WitnessDoc::Path { path: path.iter().map(|&p| step_doc(f, f.active(), p)).collect() }
}

fn replay(f: &NormFamily, nc1: bool, doc: &WitnessDoc) -> std::result::Result<(), InputError> {
    match (nc1, doc) {
        (true, WitnessDoc::Lasso { rival, stem, cycle }) => {
            if *rival >= f.len() {
                return Err(InputError(format!("invalid witness: no member {rival}")));
            }
            let pair = |p: &[StepDoc; 2]| Ok((step_of(f, f.active(), &p[0])?, step_of(f, *rival, &p[1])?));
            let w = LassoWitness {
                rival: *rival,
                stem: stem.iter().map(pair).collect::<std::result::Result<_, InputError>>()?,
                cycle: cycle.iter().map(pair).collect::<std::result::Result<_, InputError>>()?,
            };
            Ok(check_nc1_witness(f, &w)?)
        }
        (false, WitnessDoc::Path { path }) => {
            let p = path.iter().map(|d| step_of(f, f.active(), d)).collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(check_nc2_witness(f, &p)?)
        }
        (true, _) => Err(InputError("invalid witness: nc1 replays a lasso".into())),
        (false, _) => Err(InputError("invalid witness: nc2 replays a path".into())),
    }
}

fn cmd_recognize(nc1: bool, a: &RecognizeArgs) -> Outcome {
    let command = if nc1 { "nc1" } else { "nc2" };
    let t = Instant::now();
    let f = load_family(a)?;
    let loaded = Instant::now();

    if let Some(p) = &a.replay {
        let doc: WitnessDoc =
            serde_json::from_str(&read(p)?).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
        replay(&f, nc1, &doc)?;
        let mut report = Report::new(command, "replay-valid");
        report.witness = Some(serde_json::to_value(&doc).expect("witness serialises"));
        report.time("load", t);
        report.time("replay", loaded);
        return Ok(report);
    }

    let (verdict, doc, explored) = if nc1 {
        match decide_nc1(&f) {
            RecognitionVerdict::Nc1Unsuccessful(w) => ("unsuccessful", Some(lasso_doc(&f, &w)), None),
            _ => ("successful", None, None),
        }
    } else {
        let (v, stats) = decide_nc2_detailed(&f);
        match v {
            RecognitionVerdict::Nc2Successful(p) => ("successful", Some(path_doc(&f, &p)), Some(stats.explored)),
            _ => ("unsuccessful", None, Some(stats.explored)),
        }
    };
    let mut report = Report::new(command, verdict);
    report.detail("members", f.len());
    report.detail("active", f.active());
    if let Some(n) = explored {
        report.detail("explored", n);
    }
    report.time("load", t);
    report.time("decide", loaded);

    if let Some(depth) = a.depth {
        let b = Instant::now();
        let found = if nc1 { nc1_bruteforce(&f, depth).is_some() } else { nc2_bruteforce(&f, depth).is_some() };
        let decided = doc.is_some();
        report.detail("bruteforce_depth", depth);
        report.detail("bruteforce_agrees", found == decided);
        report.time("bruteforce", b);
    }
    if let Some(d) = &doc {
        let value = serde_json::to_value(d).expect("witness serialises");
        if let Some(p) = &a.witness_out {
            write(p, &(serde_json::to_string_pretty(&value).expect("witness serialises") + "\n"))?;
        }
        report.witness = Some(value);
    }
    Ok(report)
}

fn cmd_gen_eco(config: &Path, out: &Path) -> Outcome {
    let t = Instant::now();
    let cfg = in_file(config, EcoConfig::parse(&read(config)?))?;
    let eco = gen_ecosystem(&cfg)?;
    fs::create_dir_all(out).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    let mut files: Vec<String> = Vec::new();
    let mut emit = |name: &str, text: String| -> std::result::Result<(), InputError> {
        write(&out.join(name), &text)?;
        files.push(name.to_string());
        Ok(())
    };
    emit("model.mas", write_model(&eco.mas))?;
    emit("n1.norm", write_norm(&norm_round_robin(&eco), &eco.mas))?;
    emit("n2.norm", write_norm(&norm_fifo(&eco), &eco.mas))?;
    emit("n6.norm", write_norm(&norm_skip2(&eco), &eco.mas))?;
    if let Ok(statics) = static_norms_simple(&eco) {
        for (i, n) in statics.iter().enumerate() {
            emit(&format!("n{}.norm", i + 3), write_norm(n, &eco.mas))?;
        }
    }
    let (phi1, phi2) = objectives(&cfg);
    emit("phi1.ctl", format!("{phi1}\n"))?;
    emit("phi2.ctl", format!("{phi2}\n"))?;
    emit("phi.ctl", format!("{}\n", Formula::and(phi1, phi2)))?;
    if let Some(v) = eco.newcomer_agent() {
        let observer = &eco.mas.agents()[v];
        emit("family.fam", format!("model model.mas\nnorm n1.norm\nnorm n2.norm\nactive 0\nobserver {observer}\n"))?;
        emit("family26.fam", format!("model model.mas\nnorm n2.norm\nnorm n6.norm\nactive 0\nobserver {observer}\n"))?;
    }
    let mut report = Report::new("gen eco", "generated");
    report.detail("states", eco.mas.num_states());
    report.detail("files", json!(files));
    report.time("generate", t);
    Ok(report)
}

fn cmd_gen_nfa(nfa: &Path, out: &Path) -> Outcome {
    let t = Instant::now();
    let a = parse_nfa(&read(nfa)?).map_err(|e| InputError(format!("{}: {e}", nfa.display())))?;
    let (m, f) = build_nfa_recognition_instance(&a)?;
    fs::create_dir_all(out).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    write(&out.join("model.mas"), &write_model(&m))?;
    write(&out.join("t0.norm"), &write_norm(&f.members()[0], &m))?;
    write(&out.join("t1.norm"), &write_norm(&f.members()[1], &m))?;
    write(&out.join("family.fam"), "model model.mas\nnorm t0.norm\nnorm t1.norm\nactive 0\nobserver x\n")?;
    let mut report = Report::new("gen nfa-instance", "generated");
    report.detail("states", m.num_states());
    report.detail("files", json!(["model.mas", "t0.norm", "t1.norm", "family.fam"]));
    report.time("generate", t);
    Ok(report)
}
