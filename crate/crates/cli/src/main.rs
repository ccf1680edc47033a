//! `ekbound`: bounds on the Euler–Kronecker ratio from the command line.
//!
//! Exit codes: 0 success, 1 computation mismatch or record-level failure,
//! 2 usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ekbound_core::optimizer::{SweepPoint, DEFAULT_M_MAX, DEFAULT_PRIME_CUTOFF};
use ekbound_core::report::{
    all_match, evaluate_records, render_evaluation_text, render_json, render_text, reproduction_table, sig7,
};
use ekbound_core::seeds::{bundled_seeds, parse_seed_file};
use ekbound_core::{
    ff_closed_form, greedy_bound, lp_bound, search_quadratic, sweep_unconditional, BoundResult,
    CoefficientFamily, Error, Objective, SearchReport, SearchSpec, Sign, SweepMode,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "ekbound",
    version,
    about = "Asymptotic bounds for Euler-Kronecker constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower bound on liminf gamma_K/alpha_K from the constrained maximum
    Bound(BoundArgs),
    /// Unconditional greedy bound at several prime cutoffs
    Sweep(SweepArgs),
    /// Evaluate tower seeds from a JSON file (bundled examples by default)
    Evaluate(EvaluateArgs),
    /// Search quadratic fields with prescribed split primes
    Search(SearchArgs),
    /// Reproduce every published number with MATCH/MISMATCH status
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Grh,
    UncondFull,
    UncondFirstTerm,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Gamma,
    GammaTilde,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Gamma => Objective::GAMMA,
            ObjectiveArg::GammaTilde => Objective::GAMMA_TILDE,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Field {
    Nf,
    Ff,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Solver {
    Greedy,
    Lp,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct BoundArgs {
    #[arg(long, value_enum, default_value = "grh")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "gamma")]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value = "nf")]
    field: Field,
    /// Constant field size (function fields only)
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_PRIME_CUTOFF)]
    prime_cutoff: u64,
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    m_max: u32,
    #[arg(long, value_enum, default_value = "both")]
    solver: Solver,
    /// Replace the archimedean coefficient a_C
    #[arg(long, allow_negative_numbers = true)]
    arch_override: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "uncond-full")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "gamma")]
    objective: ObjectiveArg,
    /// Ascending prime cutoffs
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000,1000000")]
    cutoffs: Vec<u64>,
    #[arg(long, allow_negative_numbers = true)]
    arch_override: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct EvaluateArgs {
    /// Seed file; the bundled examples when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    /// JSON search spec; overrides the flags below
    #[arg(long)]
    input: Option<PathBuf>,
    /// Primes required to split
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    split: Vec<u64>,
    /// Number of ramified primes
    #[arg(long, default_value_t = 10)]
    t: usize,
    /// Largest prime allowed in the radicand
    #[arg(long, default_value_t = 50)]
    pool: u64,
    /// Sign of the radicand
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    sign: i64,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Write to stdout; a closed pipe (`| head`) ends the process quietly.
fn emit(text: &str) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(1);
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(&format!($($arg)*)) };
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(&format!("{}\n", format!($($arg)*))) };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Search(a) => cmd_search(a),
        Command::Table(a) => cmd_table(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn nf_family(mode: Mode, arch_override: Option<f64>) -> CoefficientFamily {
    let fam = match mode {
        Mode::Grh => CoefficientFamily::nf_grh(),
        Mode::UncondFull => CoefficientFamily::nf_uncond_full(),
        Mode::UncondFirstTerm => CoefficientFamily::nf_uncond_first_term(),
    };
    match arch_override {
        Some(a) => fam.with_arch_override(a),
        None => fam,
    }
}

fn cmd_bound(a: BoundArgs) -> Result<u8, Failure> {
    if a.field == Field::Ff {
        let q = a.q.ok_or_else(|| Failure::Usage("--field ff needs --q".into()))?;
        if a.objective == ObjectiveArg::GammaTilde {
            return Err(Failure::Usage(
                "gamma-tilde needs archimedean places; not available for --field ff".into(),
            ));
        }
        if a.solver == Solver::Greedy {
            return Err(Failure::Usage(
                "--field ff uses the lp solver and the closed form".into(),
            ));
        }
        if a.arch_override.is_some() || a.mode != Mode::Grh {
            return Err(Failure::Usage(
                "--mode and --arch-override apply to number fields only".into(),
            ));
        }
        return bound_ff(q, a.m_max.max(1), a.format);
    }
    if a.q.is_some() {
        return Err(Failure::Usage("--q applies to --field ff only".into()));
    }
    if a.arch_override.is_some_and(|v| !(v.is_finite() && v > 0.0)) {
        return Err(Failure::Usage("--arch-override must be positive".into()));
    }
    let family = nf_family(a.mode, a.arch_override);
    let objective: Objective = a.objective.into();
    let mut results = Vec::new();
    if matches!(a.solver, Solver::Greedy | Solver::Both) {
        results.push(greedy_bound(&family, objective, a.prime_cutoff)?);
    }
    if matches!(a.solver, Solver::Lp | Solver::Both) {
        results.push(lp_bound(&family, objective, a.prime_cutoff, a.m_max)?);
    }
    match a.format {
        Format::Json => {
            let items: Vec<_> = results
                .iter()
                .map(|r| {
                    let v = r.phi.validate(&r.family);
                    json!({ "result": r, "liminf_bound": r.liminf_bound(), "validation": v })
                })
                .collect();
            outln!("{}", serde_json::to_string_pretty(&items).expect("serialize"));
        }
        Format::Text => {
            for r in &results {
                out!("{}", describe_bound(r));
            }
        }
    }
    Ok(0)
}

fn describe_bound(r: &BoundResult) -> String {
    let v = r.phi.validate(&r.family);
    let mut out = format!(
        "solver {:?}  family {}  objective {}  cutoff {}  m_max {}\n",
        r.solver,
        r.family.name(),
        r.objective.name(),
        r.prime_cutoff,
        r.m_max
    );
    out += &format!("  value          {}\n", sig7(r.value));
    out += &format!("  liminf bound   {}\n", sig7(r.liminf_bound()));
    if let Some(c) = r.carrier {
        out += &format!("  carrier        phi_{c:?}\n");
    }
    out += &format!("  phi_R          {}\n", sig7(r.phi.phi_r));
    out += &format!("  phi_C          {}\n", sig7(r.phi.phi_c));
    for (q, m) in r.phi.finite.iter().filter(|(_, &m)| m > 0.0) {
        out += &format!("  phi_{:<10}{}\n", q.q, sig7(*m));
    }
    let primes: Vec<String> = r.included_primes.iter().map(u64::to_string).collect();
    out += &format!("  included       {{{}}}\n", primes.join(", "));
    if let Some(rej) = r.first_rejected {
        out += &format!(
            "  first rejected {} (ratio {} <= value {})\n",
            rej.p,
            sig7(rej.ratio),
            sig7(r.value)
        );
    }
    if let Some(p) = r.pivots {
        out += &format!("  pivots         {p}\n");
    }
    out += &format!(
        "  basic inequality slack {}, budget violations {}\n",
        sig7(v.basic_inequality_slack),
        v.budget_violations.len()
    );
    out
}

fn bound_ff(q: u64, m_max: u32, format: Format) -> Result<u8, Failure> {
    let family = CoefficientFamily::function_field(q)?;
    let lp = lp_bound(&family, Objective::GAMMA, 0, m_max)?;
    let closed = ff_closed_form(q)?;
    match format {
        Format::Json => {
            let out = json!({
                "lp": lp,
                "closed_form": closed,
                "liminf_bound": -closed.value,
            });
            outln!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Text => {
            out!("{}", describe_bound(&lp));
            outln!("closed form -1/(sqrt q + 1)  {}", sig7(-closed.value));
        }
    }
    Ok(0)
}

fn cmd_sweep(a: SweepArgs) -> Result<u8, Failure> {
    let mode = match a.mode {
        Mode::UncondFull => SweepMode::Full,
        Mode::UncondFirstTerm => SweepMode::FirstTerm,
        Mode::Grh => {
            return Err(Failure::Usage(
                "sweep runs the unconditional families; use --mode uncond-full or uncond-first-term".into(),
            ))
        }
    };
    if a.cutoffs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Failure::Usage("--cutoffs must be ascending".into()));
    }
    let points = sweep_unconditional(a.objective.into(), &a.cutoffs, mode, a.arch_override)?;
    match a.format {
        Format::Json => outln!("{}", serde_json::to_string_pretty(&points).expect("serialize")),
        Format::Text => {
            outln!(
                "{:>10}  {:>13}  {:>13}  {:>10}",
                "cutoff",
                "value",
                "liminf bound",
                "stop"
            );
            for SweepPoint {
                cutoff,
                value,
                stop_prime,
                ..
            } in points
            {
                let stop = stop_prime.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                outln!(
                    "{cutoff:>10}  {:>13}  {:>13}  {stop:>10}",
                    sig7(value),
                    sig7(-value)
                );
            }
        }
    }
    Ok(0)
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<u8, Failure> {
    let records = match &a.input {
        None => bundled_seeds(),
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            parse_seed_file(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
    };
    let rows = evaluate_records(&records);
    match a.format {
        Format::Json => outln!("{}", serde_json::to_string_pretty(&rows).expect("serialize")),
        Format::Text => out!("{}", render_evaluation_text(&rows)),
    }
    Ok(if rows.iter().any(|r| r.error.is_some()) {
        1
    } else {
        0
    })
}

fn cmd_search(a: SearchArgs) -> Result<u8, Failure> {
    let spec = match &a.input {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SearchSpec>(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => {
            let sign = Sign::from_int(a.sign).map_err(|e| Failure::Usage(e.to_string()))?;
            SearchSpec::new(a.split.clone(), a.t, a.pool, sign).with_top_k(a.top_k)
        }
    };
    let report = search_quadratic(&spec)?;
    match a.format {
        Format::Json => outln!("{}", serde_json::to_string_pretty(&report).expect("serialize")),
        Format::Text => out!("{}", describe_search(&report)),
    }
    Ok(0)
}

fn describe_search(r: &SearchReport) -> String {
    let mut out = format!(
        "pool of {} primes; {} subsets examined, {} admissible; {}{}\n",
        r.pool.len(),
        r.candidates_examined,
        r.admissible,
        if r.exhaustive {
            "exhaustive"
        } else {
            "branch and bound"
        },
        if r.complete {
            ""
        } else {
            " (budget exhausted, not certified optimal)"
        },
    );
    if r.conditional_on_predicate {
        out += "results are conditional on the built-in tower predicate\n";
    }
    if let Some(k) = r.smallest_skipped {
        out += &format!("best hit skips {k} of the smallest pool primes\n");
    }
    for (i, h) in r.hits.iter().enumerate() {
        out += &format!("{:>3}  {:>13}  d = {}\n", i + 1, sig7(h.value), h.seed.describe());
    }
    out
}

fn cmd_table(a: TableArgs) -> Result<u8, Failure> {
    let rows = reproduction_table()?;
    match a.format {
        Format::Json => outln!("{}", render_json(&rows)),
        Format::Text => out!("{}", render_text(&rows)),
    }
    Ok(if all_match(&rows) { 0 } else { 1 })
}
