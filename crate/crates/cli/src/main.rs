use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polylogic::algebra::{eval, is_valid, SearchLimits, Validity, Valuation, DEFAULT_BUDGET};
use polylogic::corpus::{self, NamedComplex};
use polylogic::formula::{bd, Formula};
use polylogic::nerve::realize;
use polylogic::pipeline::{
    decide_in_bd_logic, find_frame_countermodel, gamma_pointwise, polyhedral_countermodel, verify_dim_bd,
    verify_esakia, verify_hneg, verify_ji, verify_nerve,
};
use polylogic::poset::{Poset, DEFAULT_UPSET_CAP};
use polylogic::simplicial::{open_star, Scalar};
use polylogic::{Rational, RationalComplex};

#[derive(Parser)]
#[command(name = "polylogic", version, about = "Finite frames, definable polyhedra and countermodels")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Opts {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Maximum number of valuations an exhaustive search may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Maximum number of up-sets or lower-sets materialised.
    #[arg(long, global = true, default_value_t = DEFAULT_UPSET_CAP)]
    cap: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

impl Opts {
    fn limits(&self) -> SearchLimits {
        SearchLimits { cap: self.cap, budget: self.budget }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse, print and generate formulas.
    #[command(subcommand)]
    Formula(FormulaCmd),
    /// Inspect a poset file.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Evaluate or check a formula on a finite frame.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Build and query geometric simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Realize the nerve of a poset.
    #[command(subcommand)]
    Nerve(NerveCmd),
    /// Bounded countermodel search.
    Counter(CounterArgs),
    /// Run a verification suite.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// Parse and report structure.
    Parse { formula: String },
    /// Print in canonical form.
    Print { formula: String },
    /// The bounded-depth formula of index `d`.
    Bd { d: usize },
}

#[derive(Subcommand)]
enum PosetCmd {
    Depth {
        file: PathBuf,
    },
    /// All up-sets in canonical order.
    Upsets {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum FrameCmd {
    /// With a valuation: the truth set. Without: decide validity on the frame.
    Check {
        formula: String,
        poset: PathBuf,
        #[arg(long)]
        valuation: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Simplices in canonical order.
    Build {
        file: PathBuf,
    },
    /// Check that simplices meet in common faces.
    Verify {
        file: PathBuf,
    },
    Dim {
        file: PathBuf,
    },
    Faceposet {
        file: PathBuf,
    },
    /// The open star of a simplex.
    Star {
        simplex: String,
        file: PathBuf,
    },
    /// The simplex whose relative interior contains a point, e.g. `1/2,1/2`.
    Carrier {
        point: String,
        file: PathBuf,
    },
    /// Closed pseudo-manifold test; `d` defaults to the dimension.
    Pseudomanifold {
        file: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Json,
    Off,
}

#[derive(Subcommand)]
enum NerveCmd {
    Realize {
        poset: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        export: Export,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Refuted,
    NoCountermodel,
}

#[derive(Args)]
struct CounterArgs {
    formula: String,
    /// Only frames of depth at most `d`.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 5)]
    max_size: usize,
    /// Transfer the frame countermodel to a polyhedron (JSON bundle).
    #[arg(long)]
    polyhedral: bool,
    /// Exit 0 when the outcome matches, 1 otherwise.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Esakia,
    Dimbd,
    Ji,
    Hneg,
    Nerve,
    Gamma,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Directory with `complexes/*.json` and optionally `posets/*.json`.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Random closed pairs per complex (hneg).
    #[arg(long, default_value_t = 80)]
    trials: usize,
    /// Sample points per simplex (gamma).
    #[arg(long, default_value_t = 13)]
    per_simplex: usize,
    /// Random open pairs per complex (gamma).
    #[arg(long, default_value_t = 30)]
    pairs: usize,
    /// Largest generated poset (esakia, nerve).
    #[arg(long, default_value_t = corpus::MAX_CORPUS_POSET)]
    max_size: usize,
    /// Also run the pairwise intersection check on each realization (nerve).
    #[arg(long)]
    geometry: bool,
}

/// Text for plain mode and a value for `--json`, plus the exit status.
struct Output {
    text: String,
    value: Value,
    failed: bool,
}

impl Output {
    fn ok(text: impl Into<String>, value: Value) -> Self {
        Output { text: text.into(), value, failed: false }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_poset(path: &Path) -> Result<Poset> {
    Poset::from_json(&read(path)?).with_context(|| path.display().to_string())
}

fn load_complex(path: &Path) -> Result<RationalComplex> {
    RationalComplex::from_json(&read(path)?).with_context(|| path.display().to_string())
}

fn parse_formula(text: &str) -> Result<Formula> {
    text.parse::<Formula>().map_err(|e| anyhow::anyhow!("formula: {e}"))
}

fn parse_point(text: &str) -> Result<Vec<Rational>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| Rational::parse_scalar(s).with_context(|| format!("bad coordinate `{s}`")))
        .collect()
}

fn braces(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn formula_cmd(cmd: FormulaCmd) -> Result<Output> {
    Ok(match cmd {
        FormulaCmd::Parse { formula } => {
            let f = parse_formula(&formula)?;
            let text =
                format!("{f}\natoms: {}\nsize: {}\ndepth: {}", f.atoms().join(", "), f.size(), f.depth());
            Output::ok(
                text,
                json!({"formula": f.to_string(), "atoms": f.atoms(), "size": f.size(), "depth": f.depth()}),
            )
        }
        FormulaCmd::Print { formula } => {
            let f = parse_formula(&formula)?;
            Output::ok(f.to_string(), Value::from(f.to_string()))
        }
        FormulaCmd::Bd { d } => {
            let f = bd(d);
            Output::ok(f.to_string(), Value::from(f.to_string()))
        }
    })
}

fn poset_cmd(cmd: PosetCmd, opts: Opts) -> Result<Output> {
    Ok(match cmd {
        PosetCmd::Depth { file } => {
            let d = load_poset(&file)?.depth();
            Output::ok(d.to_string(), json!(d))
        }
        PosetCmd::Upsets { file } => {
            let p = load_poset(&file)?;
            let sets: Vec<Vec<String>> =
                p.all_upsets(opts.cap)?.into_iter().map(|u| p.set_names(u)).collect();
            let text = sets.iter().map(|s| braces(s)).collect::<Vec<_>>().join("\n");
            Output::ok(text, json!(sets))
        }
    })
}

fn frame_cmd(cmd: FrameCmd, opts: Opts) -> Result<Output> {
    let FrameCmd::Check { formula, poset, valuation } = cmd;
    let f = parse_formula(&formula)?;
    let frame = load_poset(&poset)?;
    if let Some(path) = valuation {
        let v = Valuation::from_json(&frame, &read(&path)?).with_context(|| path.display().to_string())?;
        let truth = eval(&frame, &v, &f)?;
        let names = frame.set_names(truth);
        let holds = truth == frame.all();
        return Ok(Output {
            text: format!(
                "{}\n{}",
                braces(&names),
                if holds { "true everywhere" } else { "not true everywhere" }
            ),
            value: json!({"formula": f.to_string(), "truth_set": names, "true_everywhere": holds}),
            failed: !holds,
        });
    }
    Ok(match is_valid(&frame, &f, opts.limits())? {
        Validity::Valid => Output::ok("valid", json!({"formula": f.to_string(), "status": "valid"})),
        Validity::Refuted(v) => {
            let truth = frame.set_names(eval(&frame, &v, &f)?);
            Output {
                text: format!("refuted: {}\ntruth set: {}", v.describe(&frame), braces(&truth)),
                value: json!({
                    "formula": f.to_string(),
                    "status": "refuted",
                    "valuation": v.to_json_value(&frame),
                    "truth_set": truth,
                }),
                failed: true,
            }
        }
    })
}

fn complex_cmd(cmd: ComplexCmd) -> Result<Output> {
    Ok(match cmd {
        ComplexCmd::Build { file } => {
            let k = load_complex(&file)?;
            Output::ok(k.names().join("\n"), k.geometry_json())
        }
        ComplexCmd::Verify { file } => {
            let k = load_complex(&file)?;
            let r = k.verify();
            let lines: Vec<String> = r
                .violations
                .iter()
                .map(|(a, b)| format!("{a} and {b} do not meet in a common face"))
                .collect();
            let text =
                if r.is_ok() { format!("ok ({} pairs checked)", r.pairs_checked) } else { lines.join("\n") };
            Output {
                text,
                value: json!({"ok": r.is_ok(), "pairs_checked": r.pairs_checked, "violations": r.violations}),
                failed: !r.is_ok(),
            }
        }
        ComplexCmd::Dim { file } => {
            let d = load_complex(&file)?.dim();
            Output::ok(d.to_string(), json!(d))
        }
        ComplexCmd::Faceposet { file } => {
            let p = load_complex(&file)?.face_poset().clone();
            let value = serde_json::to_value(p.to_file())?;
            Output::ok(p.to_json(), value)
        }
        ComplexCmd::Star { simplex, file } => {
            let k = load_complex(&file)?;
            let names = open_star(&k, &simplex)?.names(&k);
            Output::ok(braces(&names), json!(names))
        }
        ComplexCmd::Carrier { point, file } => {
            let k = load_complex(&file)?;
            let c = k.carrier(&parse_point(&point)?)?;
            Output::ok(k.name(c), Value::from(k.name(c)))
        }
        ComplexCmd::Pseudomanifold { file, dim } => {
            let k = load_complex(&file)?;
            let d = match dim {
                Some(d) => d,
                None if k.dim() >= 0 => k.dim() as usize,
                None => bail!("the empty complex has no dimension"),
            };
            let r = k.is_closed_pseudomanifold(d)?;
            let mut text = if r.holds { "holds".to_string() } else { "fails".to_string() };
            for (face, count) in &r.violators {
                text.push_str(&format!("\n{face}: in {count} top simplices"));
            }
            let violators: Vec<Value> =
                r.violators.iter().map(|(f, c)| json!({"face": f, "count": c})).collect();
            Output {
                text,
                value: json!({"holds": r.holds, "dim": d, "violators": violators}),
                failed: !r.holds,
            }
        }
    })
}

fn nerve_cmd(cmd: NerveCmd) -> Result<Output> {
    let NerveCmd::Realize { poset, export } = cmd;
    let k = realize::<Rational>(&load_poset(&poset)?)?;
    Ok(match export {
        Export::Json => {
            let g = k.geometry_json();
            Output::ok(serde_json::to_string_pretty(&g)?, g)
        }
        Export::Off => {
            let off = k.to_off()?;
            Output::ok(off.trim_end().to_string(), Value::from(off))
        }
    })
}

fn counter_cmd(args: CounterArgs, opts: Opts) -> Result<Output> {
    let f = parse_formula(&args.formula)?;
    let limits = opts.limits();
    let verdict = match (args.polyhedral, args.depth) {
        (true, d) => polyhedral_countermodel(&f, d.unwrap_or(args.max_size), args.max_size, limits)?,
        (false, Some(d)) => decide_in_bd_logic(&f, d, args.max_size, limits)?,
        (false, None) => find_frame_countermodel(&f, args.max_size, args.max_size, limits)?,
    };
    if !verdict.reverify(&f) {
        bail!("countermodel failed re-verification");
    }
    let value = verdict.to_json();
    let text = if args.polyhedral {
        serde_json::to_string_pretty(&value)?
    } else {
        match &value["status"] {
            Value::String(s) if s == "RefutedOnFrame" => format!(
                "refuted on a frame of size {} and depth {}\n{}",
                value["frame"]["elements"].as_array().map_or(0, |a| a.len()),
                value["depth"],
                serde_json::to_string(&value["valuation"])?
            ),
            _ => format!(
                "no countermodel up to size {} ({} frames checked)",
                args.max_size,
                verdict.bounds().frames_checked
            ),
        }
    };
    let failed = match args.expect {
        None => verdict.is_refuted(),
        Some(Expect::Refuted) => !verdict.is_refuted(),
        Some(Expect::NoCountermodel) => verdict.is_refuted(),
    };
    Ok(Output { text, value, failed })
}

fn suite_line(name: &str, passed: bool, report: &Value) -> String {
    format!("{} {name} {}", if passed { "PASS" } else { "FAIL" }, report)
}

fn suite_cmd(args: SuiteArgs, opts: Opts) -> Result<Output> {
    let complexes = || -> Result<Vec<NamedComplex>> {
        Ok(match &args.corpus {
            Some(dir) => corpus::load_complexes(dir)?,
            None => corpus::complexes(),
        })
    };
    let posets = || -> Result<Vec<(String, Poset)>> {
        let loaded = match &args.corpus {
            Some(dir) => corpus::load_posets(dir)?,
            None => Vec::new(),
        };
        let list = if loaded.is_empty() { corpus::posets(args.max_size) } else { loaded };
        Ok(list.into_iter().enumerate().map(|(i, p)| (format!("poset{}", i + 1), p)).collect())
    };
    let mut rows: Vec<(String, bool, Value)> = Vec::new();
    match args.suite {
        Suite::Esakia => {
            for (name, a) in posets()? {
                let r = verify_esakia(&a, opts.cap)?;
                rows.push((name, r.passed(), r.to_json()));
            }
        }
        Suite::Nerve => {
            for (name, a) in posets()? {
                let r = verify_nerve(&a, opts.cap, args.geometry)?;
                rows.push((name, r.passed(), r.to_json()));
            }
        }
        Suite::Dimbd => {
            for c in complexes()? {
                let r = verify_dim_bd(&c.complex, opts.limits())?;
                rows.push((c.name, r.passed(), r.to_json()));
            }
        }
        Suite::Ji => {
            for c in complexes()? {
                let r = verify_ji(&c.complex, opts.cap)?;
                rows.push((c.name, r.passed(), r.to_json()));
            }
        }
        Suite::Hneg => {
            for c in complexes()? {
                let r = verify_hneg(&c.complex, args.trials, opts.seed, opts.cap)?;
                rows.push((c.name, r.passed(), r.to_json()));
            }
        }
        Suite::Gamma => {
            for c in complexes()? {
                let r = gamma_pointwise(&c.complex, args.per_simplex, args.pairs, opts.seed, opts.cap)?;
                rows.push((c.name, r.passed(), r.to_json()));
            }
        }
    }
    let failures = rows.iter().filter(|r| !r.1).count();
    let mut text: Vec<String> = rows.iter().map(|(n, p, v)| suite_line(n, *p, v)).collect();
    text.push(format!("{} checked, {failures} failed", rows.len()));
    let results: Vec<Value> = rows.into_iter().map(|(n, _, v)| json!({"name": n, "report": v})).collect();
    Ok(Output {
        text: text.join("\n"),
        value: json!({"results": results, "failures": failures}),
        failed: failures > 0,
    })
}

fn run(cli: Cli) -> Result<Output> {
    let opts = cli.opts;
    match cli.command {
        Command::Formula(c) => formula_cmd(c),
        Command::Poset(c) => poset_cmd(c, opts),
        Command::Frame(c) => frame_cmd(c, opts),
        Command::Complex(c) => complex_cmd(c),
        Command::Nerve(c) => nerve_cmd(c),
        Command::Counter(a) => counter_cmd(a, opts),
        Command::Suite(a) => suite_cmd(a, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.opts.json;
    match run(cli) {
        Ok(out) => {
            let text = if json_mode {
                serde_json::to_string_pretty(&out.value).expect("serializes")
            } else {
                out.text
            };
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", chain.join(": "));
            ExitCode::from(2)
        }
    }
}
