//! `reeb-toolkit`: JSON-first command line front end for `reeb-core`.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 degenerate tie,
//! 4 cap hit or interrupted (partial results).

mod error;
mod input;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use reeb_core::arith::json_int;
use reeb_core::{
    answer1_area_obstruction, check_theorem_alt, check_theorem_main, enumerate_cylindrical_with,
    enumerate_feasible_with, fib_odd, par, proposition_nope_instance, validate, BigInt, CancelToken, Execution,
    SearchOptions, Verdict,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{Emitter, Format, Record, Summary};

#[derive(Debug, Parser)]
#[command(name = "reeb-toolkit", version, about = "Reeb orbits, indices and building skeletons on 4d ellipsoids")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for searches, capped at the available parallelism.
    #[arg(long, global = true, env = "REEB_TOOLKIT_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conley–Zehnder index of one orbit.
    Cz {
        /// `a=1,b=5/2,eps=b`, JSON, @path or -.
        #[arg(long)]
        ellipsoid: String,
        /// `alpha,13` or JSON.
        #[arg(long)]
        orbit: String,
    },
    /// The first N orbits in action order.
    Spectrum {
        #[arg(long)]
        ellipsoid: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Fredholm index and action defect of asymptotic data.
    Index {
        /// AsymptoticData JSON, @path or -.
        #[arg(long)]
        data: String,
    },
    /// Action-feasible data with a given positive end.
    Enumerate {
        /// `symplectization:<ellipsoid>`, `cobordism:<cobordism>`, bare ellipsoid or JSON.
        #[arg(long)]
        setting: String,
        #[arg(long)]
        positive: String,
        /// `neg=6,mult=12` or JSON.
        #[arg(long)]
        caps: Option<String>,
    },
    /// Index-0 cylindrical buildings from α^k on the inner end to α^l on the outer end.
    Buildings {
        /// `inner:<ellipsoid>;outer:<ellipsoid>`, JSON, @path or -.
        #[arg(long)]
        cobordism: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        /// `levels=3,mult=12` or JSON.
        #[arg(long)]
        caps: Option<String>,
    },
    /// Hypotheses of the α-to-α cylinder existence result.
    CheckMain {
        #[arg(long)]
        cobordism: String,
        #[arg(long)]
        k: u64,
    },
    /// Hypotheses of the CZ-step variant.
    CheckAlt {
        #[arg(long)]
        cobordism: String,
        #[arg(long)]
        k: u64,
    },
    /// Odd-index Fibonacci number g_n = F_{2n-1}.
    Fibonacci {
        #[arg(long)]
        n: u64,
    },
    /// Instance of the Fibonacci-staircase non-existence family.
    Nope {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c1: String,
    },
    /// Area obstruction for five β ends against α^12.
    Answer1 {
        #[arg(long)]
        c: String,
    },
    /// Diagnostics of a building skeleton.
    Validate {
        /// Building JSON, @path or -.
        #[arg(long)]
        building: String,
    },
}

fn int(n: &BigInt) -> Value {
    json_int::serialize(n, serde_json::value::Serializer).unwrap_or_else(|_| Value::String(n.to_string()))
}

fn compact(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn execution(jobs: Option<usize>) -> Execution {
    let jobs = jobs.unwrap_or_else(par::available_parallelism).clamp(1, par::available_parallelism());
    if jobs == 1 {
        return Execution::Sequential;
    }
    par::init_threads(jobs);
    Execution::Parallel
}

fn search_options(jobs: Option<usize>) -> SearchOptions {
    let token = CancelToken::new();
    let handler = token.clone();
    let _ = ctrlc::set_handler(move || handler.cancel());
    SearchOptions::with_execution(execution(jobs)).cancel_with(token)
}

fn verdict_record(v: &Verdict) -> Result<Record, CliError> {
    let l = v.witness.as_ref().map_or("-".to_string(), |w| w.l.to_string());
    let mut r = Record::new(v)?.cell("applicable", v.applicable).cell("ℓ", l);
    for reason in &v.reasons {
        r = r.cell(&reason.id, format!("{} {}", reason.holds, compact(&reason.values)));
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut out = Emitter::new(cli.format);
    let mut code = 0;
    match cli.command {
        Command::Cz { ellipsoid, orbit } => {
            let e = input::ellipsoid(&ellipsoid)?;
            let o = input::orbit(&orbit)?;
            let cz = e.cz_index(&o);
            let action = e.action(&o);
            let rec = Record::new(json!({ "ellipsoid": e, "orbit": o, "action": action, "cz": int(&cz) }))?
                .cell("ellipsoid", &e)
                .cell("orbit", o)
                .cell("action", action)
                .cell("cz", cz);
            out.emit(rec)?;
        }
        Command::Spectrum { ellipsoid, count } => {
            let e = input::ellipsoid(&ellipsoid)?;
            for o in e.spectrum(count) {
                let rank = e.spectral_rank(&o);
                let cz = e.cz_index(&o);
                let action = e.action(&o);
                let rec = Record::new(json!({ "rank": int(&rank), "orbit": o, "action": action, "cz": int(&cz) }))?
                    .cell("rank", rank)
                    .cell("orbit", o)
                    .cell("action", action)
                    .cell("cz", cz);
                out.emit(rec)?;
            }
        }
        Command::Index { data } => {
            let d = input::data(&data)?;
            let idx = d.fredholm_index();
            let defect = d.action_defect();
            let mut json = serde_json::to_value(&d).map_err(|e| CliError::json("output", e))?;
            if let Value::Object(m) = &mut json {
                m.insert("index".into(), int(&idx));
                m.insert(
                    "action_defect".into(),
                    serde_json::to_value(&defect).map_err(|e| CliError::json("output", e))?,
                );
                m.insert("action_feasible".into(), d.is_action_feasible().into());
                m.insert("trivial_cover".into(), d.is_trivial_cover().into());
                m.insert("generic".into(), d.admits_regular_simple_model().into());
            }
            let rec = Record::new(json)?
                .cell("data", &d)
                .cell("index", idx)
                .cell("action_defect", defect)
                .cell("action_feasible", d.is_action_feasible())
                .cell("trivial_cover", d.is_trivial_cover())
                .cell("generic", d.admits_regular_simple_model());
            out.emit(rec)?;
        }
        Command::Enumerate { setting, positive, caps } => {
            let s = input::setting(&setting)?;
            let pos = input::orbit(&positive)?;
            let caps = input::feasibility_caps(caps.as_deref())?;
            let opts = search_options(cli.jobs);
            let t = Instant::now();
            let found = enumerate_feasible_with(&s, pos, caps, &opts);
            let elapsed = t.elapsed().as_secs_f64();
            for d in &found.items {
                let rec = Record::new(d)?
                    .cell("data", d)
                    .cell("index", d.fredholm_index())
                    .cell("action_defect", d.action_defect());
                out.emit(rec)?;
            }
            out.summary(&Summary {
                count: found.items.len(),
                caps,
                cap_hit: found.cap_hit,
                interrupted: found.interrupted,
                elapsed,
            })?;
            if !found.is_complete() {
                code = 4;
            }
        }
        Command::Buildings { cobordism, k, l, caps } => {
            let cob = input::cobordism(&cobordism)?;
            let caps = input::building_caps(caps.as_deref())?;
            let opts = search_options(cli.jobs);
            let t = Instant::now();
            let found = enumerate_cylindrical_with(&cob, k, l, caps, &opts)?;
            let elapsed = t.elapsed().as_secs_f64();
            for b in &found.items {
                let levels = b.levels().len();
                let rec = Record::new(b)?.cell("levels", levels).cell("building", b.to_string().replace('\n', " | "));
                out.emit(rec)?;
            }
            out.summary(&Summary {
                count: found.items.len(),
                caps,
                cap_hit: found.cap_hit,
                interrupted: found.interrupted,
                elapsed,
            })?;
            if !found.is_complete() {
                code = 4;
            }
        }
        Command::CheckMain { cobordism, k } => {
            let cob = input::cobordism(&cobordism)?;
            out.emit(verdict_record(&check_theorem_main(&cob, k)?)?)?;
        }
        Command::CheckAlt { cobordism, k } => {
            let cob = input::cobordism(&cobordism)?;
            out.emit(verdict_record(&check_theorem_alt(&cob, k)?)?)?;
        }
        Command::Fibonacci { n } => {
            if n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            let g = fib_odd(n);
            out.emit(Record::new(json!({ "n": n, "value": int(&g) }))?.cell("n", n).cell("value", g))?;
        }
        Command::Nope { n, c1 } => {
            let c1 = reeb_core::arith::parse_rational(&c1)?;
            let inst = proposition_nope_instance(n, &c1)?;
            let rec = Record::new(&inst)?
                .cell("n", inst.n)
                .cell("c1", &inst.c1)
                .cell("inner", &inst.inner)
                .cell("outer", &inst.outer)
                .cell("inner_orbit", inst.inner_orbit)
                .cell("outer_orbit", inst.outer_orbit)
                .cell("cz_inner", &inst.cz_inner)
                .cell("cz_outer", &inst.cz_outer)
                .cell("hypothesis_g_odd", inst.hypothesis_g_odd)
                .cell("cz_equal", inst.cz_equal)
                .cell("nonexistence_verified", inst.nonexistence_verified);
            out.emit(rec)?;
        }
        Command::Answer1 { c } => {
            let c = reeb_core::arith::parse_rational(&c)?;
            let r = answer1_area_obstruction(&c)?;
            let rec = Record::new(&r)?
                .cell("c", &r.c)
                .cell("data", &r.data)
                .cell("defect", &r.defect)
                .cell("obstructed", r.obstructed);
            out.emit(rec)?;
        }
        Command::Validate { building } => {
            let b = input::building(&building)?;
            let d = validate(&b);
            let violations = d.violations.len();
            let rec = Record::new(&d)?
                .cell("cylindrical", d.cylindrical)
                .cell("total_index", &d.total_index)
                .cell("curves", d.curves.len())
                .cell("violations", compact(&d.violations));
            out.emit(rec)?;
            out.finish()?;
            return if d.cylindrical { Ok(0) } else { Err(CliError::NotCylindrical(violations)) };
        }
    }
    out.finish()?;
    Ok(code)
}

fn report(e: &CliError) {
    eprintln!("{}", e.to_json());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report(&CliError::Usage(e.render().to_string().trim().to_string()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
