//! Command-line interface.
//!
//! Exit codes: 0 verified, 1 falsified or mismatch, 2 usage or input error,
//! 3 resource ceiling hit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automata::text::{dfa_from_text, dfa_to_dot, dfao_from_text, dfao_to_dot, dfao_to_text};
use crate::automata::{AutomataError, Dfao};
use crate::logic::{parse_script, Command, CompileCache, LogicError, PredicateStore};
use crate::oracle::circular_critical_exponent;
use crate::rational::Rational;
use crate::sequences::{window, SequenceId};
use crate::theorems::{
    factor_exponents, pf_factor_exponents, pf_prefix_exponents, prefix_exponents, run_theorem, theorem_sequence,
    Prover, RunOptions, TheoremError, THEOREMS, TM_THEOREMS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "CCEXP_CACHE_DIR";

/// Rough memory cost of one subset-construction state, used to turn the
/// memory ceiling into a state limit.
const BYTES_PER_STATE: u64 = 256;

#[derive(Parser, Debug)]
#[command(
    name = "ccexp",
    version,
    about = "Circular critical exponents of automatic sequences, by automata"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Default)]
struct GlobalArgs {
    /// Config file of `key = value` lines (cache_dir, memory_ceiling, seed, sequence).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cache directory; overrides the environment and the config file.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Memory ceiling in bytes for automaton constructions.
    #[arg(long, global = true)]
    memory_ceiling: Option<u64>,
    /// Seed for randomized spot checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sequence bound to `T`: tm or pf.
    #[arg(long, global = true)]
    sequence: Option<String>,
    /// Print elapsed_ms=0 so output is reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a script of def/eval/first commands.
    Prove { script: PathBuf },
    /// Circular critical exponent of a word, prefix, or factor.
    Ccexp(CcexpArgs),
    /// Run a named theorem.
    Theorem {
        name: Option<String>,
        /// Run every Thue-Morse theorem.
        #[arg(long)]
        all: bool,
        /// With --all, also run the long paperfolding theorems.
        #[arg(long)]
        include_pf: bool,
    },
    /// Write a cached automaton as text or Graphviz.
    Export {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect or clear the cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("mode").required(true).multiple(false)))]
struct CcexpArgs {
    /// Letters of the word, one byte each.
    #[arg(long, group = "mode")]
    word: Option<String>,
    /// Length of the prefix.
    #[arg(long, group = "mode")]
    prefix: Option<u64>,
    /// Length and start of the factor.
    #[arg(long, group = "mode", num_args = 2, value_names = ["N", "S"])]
    factor: Option<Vec<u64>>,
    /// Compute by brute force; with --prefix/--factor, also check the DFAO.
    #[arg(long, conflicts_with = "word")]
    oracle: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Print the cache directory.
    Path,
    /// Count cached predicates and artifacts.
    List,
    /// Delete cached predicates and artifacts.
    Clear,
}

/// Resolved settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub memory_ceiling: Option<u64>,
    pub seed: u64,
    pub sequence: SequenceId,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from(".ccexp-cache"),
            memory_ceiling: None,
            seed: 1,
            sequence: SequenceId::ThueMorse,
        }
    }
}

impl Config {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |what: &str| format!("line {}: bad {what} `{v}`", i + 1);
            match k {
                "cache_dir" => self.cache_dir = PathBuf::from(v),
                "memory_ceiling" => self.memory_ceiling = Some(v.parse().map_err(|_| bad("memory_ceiling"))?),
                "seed" => self.seed = v.parse().map_err(|_| bad("seed"))?,
                "sequence" => self.sequence = v.parse().map_err(|_| bad("sequence"))?,
                other => return Err(format!("line {}: unknown key `{other}`", i + 1)),
            }
        }
        Ok(())
    }

    /// Defaults, then the config file, then the environment, then flags.
    fn resolve(g: &GlobalArgs, env_cache: Option<OsString>) -> Result<Config, String> {
        let mut c = Config::default();
        if let Some(path) = &g.config {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            c.apply_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        if let Some(dir) = env_cache.filter(|d| !d.is_empty()) {
            c.cache_dir = PathBuf::from(dir);
        }
        if let Some(dir) = &g.cache_dir {
            c.cache_dir = dir.clone();
        }
        if let Some(m) = g.memory_ceiling {
            c.memory_ceiling = Some(m);
        }
        if let Some(s) = g.seed {
            c.seed = s;
        }
        if let Some(s) = &g.sequence {
            c.sequence = s.parse().map_err(|e: crate::sequences::SequenceError| e.to_string())?;
        }
        Ok(c)
    }

    /// Subset-construction state limit derived from the memory ceiling.
    pub fn state_limit(&self) -> Option<usize> {
        self.memory_ceiling.map(|b| (b / BYTES_PER_STATE).max(1) as usize)
    }

    fn cache(&self) -> Result<CompileCache, LogicError> {
        CompileCache::new(&self.cache_dir)
    }

    fn prover(&self, seq: SequenceId) -> Result<Prover, LogicError> {
        Ok(Prover::new(seq)
            .with_cache(self.cache()?)
            .with_limit(self.state_limit()))
    }
}

/// A failure with its exit code.
struct Failure(i32, String);

impl From<LogicError> for Failure {
    fn from(e: LogicError) -> Self {
        let code = match &e {
            LogicError::Automata(AutomataError::ResourceLimit { .. }) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

impl From<TheoremError> for Failure {
    fn from(e: TheoremError) -> Self {
        let code = if e.is_resource_limit() {
            EXIT_RESOURCE
        } else {
            EXIT_USAGE
        };
        Failure(code, e.to_string())
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure(EXIT_USAGE, e.to_string())
}

struct Ctx<'a> {
    cfg: Config,
    timing: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn ms(&self, start: Instant) -> u128 {
        if self.timing {
            start.elapsed().as_millis()
        } else {
            0
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let cfg = match Config::resolve(&cli.global, std::env::var_os(CACHE_ENV)) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx {
        cfg,
        timing: !cli.global.no_timing,
        out,
    };
    let result = match cli.command {
        Cmd::Prove { script } => cmd_prove(&mut ctx, &script),
        Cmd::Ccexp(a) => cmd_ccexp(&mut ctx, a),
        Cmd::Theorem { name, all, include_pf } => cmd_theorem(&mut ctx, name, all, include_pf),
        Cmd::Export { name, format, out } => cmd_export(&mut ctx, &name, format, out.as_deref()),
        Cmd::Cache { action } => cmd_cache(&mut ctx, action),
    };
    let _ = ctx.out.flush();
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// Entry point for the binary.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

fn cmd_prove(ctx: &mut Ctx, script: &Path) -> Result<i32, Failure> {
    let text = fs::read_to_string(script).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", script.display())))?;
    let cmds = parse_script(&text).map_err(|e| {
        Failure(
            EXIT_USAGE,
            format!("{}:{}:{}: {}", script.display(), e.line, e.col, e.msg),
        )
    })?;
    let mut store = PredicateStore::new()
        .with_cache(ctx.cfg.cache()?)
        .with_limit(ctx.cfg.state_limit());
    let mut code = EXIT_OK;
    for cmd in cmds {
        let start = Instant::now();
        match cmd {
            Command::Def { name, formula } => {
                let states = store.define(&name, &formula)?.live_states().max(1);
                let ms = ctx.ms(start);
                writeln!(ctx.out, "{name}: {states} states elapsed_ms={ms}").map_err(io_fail)?;
            }
            Command::Eval { name, formula } => {
                let truth = store.eval_closed(&formula)?;
                let ms = ctx.ms(start);
                writeln!(ctx.out, "{name}: {truth} elapsed_ms={ms}").map_err(io_fail)?;
                if !truth {
                    code = EXIT_FALSE;
                    if let Some(cx) = store.counterexample(&formula)? {
                        let parts: Vec<String> = cx.iter().map(|(v, x)| format!("{v}={x}")).collect();
                        writeln!(ctx.out, "{name}: counterexample {}", parts.join(" ")).map_err(io_fail)?;
                    }
                }
            }
            Command::First { name, count } => {
                let d = store
                    .get(&name)
                    .ok_or_else(|| Failure(EXIT_USAGE, format!("unknown predicate `{name}`")))?;
                let vals: Vec<String> = d
                    .enumerate_accepted(count)
                    .into_iter()
                    .map(|v| match v.as_slice() {
                        [x] => x.to_string(),
                        _ => format!("({})", v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
                    })
                    .collect();
                writeln!(ctx.out, "first {name} ({}): {}", d.tracks().join(","), vals.join(" ")).map_err(io_fail)?;
            }
        }
    }
    Ok(code)
}

/// Exponent sets used for the prefix and factor DFAOs of a sequence.
fn exponent_sets(seq: SequenceId) -> (Vec<Rational>, Vec<Rational>) {
    match seq {
        SequenceId::ThueMorse => (prefix_exponents(), factor_exponents()),
        SequenceId::Paperfolding => (pf_prefix_exponents(), pf_factor_exponents()),
    }
}

/// Loads the named DFAO artifact, building and saving it when absent.
fn load_or_build(ctx: &Ctx, name: &str, factor: bool) -> Result<Dfao<Option<Rational>>, Failure> {
    let seq = ctx.cfg.sequence;
    let path = Prover::artifact_dir(&ctx.cfg.cache_dir, seq).join(format!("{name}.txt"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(m) = dfao_from_text(&text) {
            return Ok(m);
        }
    }
    let mut prover = ctx.cfg.prover(seq)?;
    let (pref, fac) = exponent_sets(seq);
    let m = if factor {
        prover.factor_dfao(&fac)?
    } else {
        prover.prefix_dfao(&pref)?
    };
    prover.save_artifact(name, &dfao_to_text(&m))?;
    Ok(m)
}

fn cmd_ccexp(ctx: &mut Ctx, a: CcexpArgs) -> Result<i32, Failure> {
    let seq = ctx.cfg.sequence;
    let (value, oracle_value) = if let Some(w) = a.word {
        let e = circular_critical_exponent(w.as_bytes()).map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
        (e, None)
    } else {
        let (n, s, name, factor) = match (a.prefix, a.factor) {
            (Some(n), _) => (n, 0, "dfao_prefix", false),
            (None, Some(v)) => (v[0], v[1], "dfao_factor", true),
            _ => unreachable!("clap enforces one mode"),
        };
        if n == 0 {
            return Err(Failure(EXIT_USAGE, "the empty word has no exponent".into()));
        }
        let brute = || circular_critical_exponent(&window(seq, s, n)).expect("nonempty");
        if a.oracle {
            let want = brute();
            let m = load_or_build(ctx, name, factor)?;
            let got = if factor { *m.eval(&[n, s]) } else { *m.eval(&[n]) };
            (want, Some(got))
        } else {
            let m = load_or_build(ctx, name, factor)?;
            let got = if factor { *m.eval(&[n, s]) } else { *m.eval(&[n]) };
            (got.ok_or_else(|| Failure(EXIT_USAGE, "undefined".into()))?, None)
        }
    };
    writeln!(ctx.out, "{value}").map_err(io_fail)?;
    match oracle_value {
        Some(got) if got != Some(value) => {
            let shown = got.map_or("undef".to_string(), |r| r.to_string());
            writeln!(ctx.out, "mismatch: automaton {shown}, oracle {value}").map_err(io_fail)?;
            Ok(EXIT_FALSE)
        }
        _ => Ok(EXIT_OK),
    }
}

fn cmd_theorem(ctx: &mut Ctx, name: Option<String>, all: bool, include_pf: bool) -> Result<i32, Failure> {
    let names: Vec<String> = match (name, all) {
        (Some(n), false) => vec![n],
        (None, true) => {
            let list: &[&str] = if include_pf { &THEOREMS } else { &TM_THEOREMS };
            list.iter().map(|s| s.to_string()).collect()
        }
        _ => return Err(Failure(EXIT_USAGE, "give a theorem name or --all".into())),
    };
    let opts = RunOptions {
        seed: ctx.cfg.seed,
        ..RunOptions::default()
    };
    let mut provers: Vec<Prover> = Vec::new();
    let mut code = EXIT_OK;
    for name in names {
        let seq = theorem_sequence(&name).ok_or_else(|| Failure(EXIT_USAGE, format!("unknown theorem `{name}`")))?;
        let idx = match provers.iter().position(|p| p.sequence() == seq) {
            Some(i) => i,
            None => {
                provers.push(ctx.cfg.prover(seq)?);
                provers.len() - 1
            }
        };
        let report = run_theorem(&mut provers[idx], &name, &opts)?;
        write!(ctx.out, "{}", report.render(ctx.timing)).map_err(io_fail)?;
        if !report.verified() {
            code = EXIT_FALSE;
        }
    }
    Ok(code)
}

fn cmd_export(ctx: &mut Ctx, name: &str, format: Format, out: Option<&Path>) -> Result<i32, Failure> {
    let path = Prover::artifact_dir(&ctx.cfg.cache_dir, ctx.cfg.sequence).join(format!("{name}.txt"));
    let text = fs::read_to_string(&path)
        .map_err(|_| Failure(EXIT_USAGE, format!("no automaton `{name}` in {}", path.display())))?;
    let bad = |e: AutomataError| Failure(EXIT_USAGE, format!("{}: {e}", path.display()));
    let rendered = match format {
        Format::Text => text,
        Format::Dot if text.lines().nth(1) == Some("kind: dfao") => {
            dfao_to_dot(&dfao_from_text::<String>(&text).map_err(bad)?)
        }
        Format::Dot => dfa_to_dot(&dfa_from_text(&text).map_err(bad)?),
    };
    match out {
        Some(p) => fs::write(p, rendered).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", p.display())))?,
        None => ctx.out.write_all(rendered.as_bytes()).map_err(io_fail)?,
    }
    Ok(EXIT_OK)
}

fn count_files(dir: &Path) -> usize {
    fs::read_dir(dir).map_or(0, |it| {
        it.filter_map(Result::ok)
            .filter(|e| e.path().extension().is_some_and(|x| x == "txt"))
            .count()
    })
}

fn cmd_cache(ctx: &mut Ctx, action: CacheAction) -> Result<i32, Failure> {
    let dir = ctx.cfg.cache_dir.clone();
    match action {
        CacheAction::Path => writeln!(ctx.out, "{}", dir.display()).map_err(io_fail)?,
        CacheAction::List => {
            let preds = if dir.exists() { ctx.cfg.cache()?.len()? } else { 0 };
            writeln!(ctx.out, "predicates: {preds}").map_err(io_fail)?;
            for seq in [SequenceId::ThueMorse, SequenceId::Paperfolding] {
                let adir = Prover::artifact_dir(&dir, seq);
                let mut names: Vec<String> = fs::read_dir(&adir)
                    .map(|it| {
                        it.filter_map(Result::ok)
                            .filter_map(|e| {
                                let p = e.path();
                                if p.extension()? != "txt" {
                                    return None;
                                }
                                Some(p.file_stem()?.to_string_lossy().into_owned())
                            })
                            .collect()
                    })
                    .unwrap_or_default();
                names.sort();
                writeln!(ctx.out, "artifacts {seq}: {}", names.join(" ")).map_err(io_fail)?;
            }
        }
        CacheAction::Clear => {
            if !dir.exists() {
                writeln!(ctx.out, "removed 0 predicates, 0 artifacts").map_err(io_fail)?;
                return Ok(EXIT_OK);
            }
            let preds = ctx.cfg.cache()?.clear()?;
            let adir = dir.join("artifacts");
            let arts = [SequenceId::ThueMorse, SequenceId::Paperfolding]
                .iter()
                .map(|&s| count_files(&Prover::artifact_dir(&dir, s)))
                .sum::<usize>();
            if adir.exists() {
                fs::remove_dir_all(&adir).map_err(io_fail)?;
            }
            writeln!(ctx.out, "removed {preds} predicates, {arts} artifacts").map_err(io_fail)?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file() {
        let mut c = Config::default();
        c.apply_file("# settings\nseed = 7\nsequence = pf\ncache_dir = /tmp/x # here\nmemory_ceiling=1024\n")
            .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.sequence, SequenceId::Paperfolding);
        assert_eq!(c.cache_dir, PathBuf::from("/tmp/x"));
        assert_eq!(c.state_limit(), Some(4));
        assert!(c.apply_file("colour = red").is_err());
        assert!(c.apply_file("seed = many").is_err());
        assert!(c.apply_file("seed").is_err());
    }

    #[test]
    fn precedence() {
        let g = GlobalArgs {
            cache_dir: Some(PathBuf::from("flag")),
            ..GlobalArgs::default()
        };
        let c = Config::resolve(&g, Some(OsString::from("env"))).unwrap();
        assert_eq!(c.cache_dir, PathBuf::from("flag"));
        let c = Config::resolve(&GlobalArgs::default(), Some(OsString::from("env"))).unwrap();
        assert_eq!(c.cache_dir, PathBuf::from("env"));
        let c = Config::resolve(&GlobalArgs::default(), None).unwrap();
        assert_eq!(c, Config::default());
    }
}
