//! Command line front end. Reports go to stdout as JSON, summaries to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value as Json};

use crate::analysis::{
    check_levy, solve, solve_interval, solve_parity, strategy_attainment, CheckReport, LevyParams, NumMode, Objective,
    Value, ValueReport,
};
use crate::config::Config;
use crate::gallery::{self, Params};
use crate::mdp::{graph::is_acyclic_up_to_sinks, materialize, ExplicitMdp, MdpModel};
use crate::num::{fmt_rat, parse_rat, to_f64, Rat};
use crate::strategy::{fix_strategy, induce_chain, sample_runs, MdStrategy, Strategy, StrategyClass};
use crate::synthesis::{
    cobuchi_eps_md, optimal_parity_1bit, parity012_opt_md, plaster_core_with_gamma, reach_eps_md, safety_eps_md,
    sea_urchin_rounds, OneBitOptions,
};
use crate::transform::{
    acyclify, condition, ladderize, layer, markov_from_acyclified, truncate, LayeredMdp, TruncMode,
};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "parity-forge", version, about = "Exact solving and strategy synthesis for parity MDPs")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Size, branching and color summary.
    Info { model: String },
    /// Applies one reduction and prints the resulting model.
    Transform {
        model: String,
        #[arg(long)]
        op: Op,
        /// Horizon for lazy results (defaults to the configured horizon).
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value = "pess")]
        mode: ModeArg,
    },
    /// Values of every state.
    Solve {
        model: String,
        /// parity, reach[:ids] or safety[:ids]
        #[arg(long, default_value = "parity")]
        objective: String,
        /// Force exact arithmetic regardless of the configured mode.
        #[arg(long)]
        exact: bool,
    },
    /// Synthesizes a strategy and reports what it attains.
    Synthesize {
        model: String,
        /// parity, cobuchi, parity012, reach[:ids] or safety[:ids]
        #[arg(long, default_value = "parity")]
        objective: String,
        #[arg(long, value_enum, default_value = "md")]
        class: ClassArg,
        /// 0 asks for an optimal strategy where the class allows it.
        #[arg(long, default_value = "1/10")]
        epsilon: String,
    },
    /// Evaluates a strategy, exactly or by simulation.
    Evaluate {
        model: String,
        strategy: PathBuf,
        /// Number of simulated runs; exact evaluation when absent.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Runs bounded sea-urchin rounds on the layered model.
    Urchin {
        model: String,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
    },
    /// Runs an invariant suite; on every gallery family when no model is given.
    Check {
        model: Option<String>,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Op {
    Ladderize,
    Acyclify,
    Layer,
    Condition,
    Truncate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Pess,
    Opt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Md,
    Markov,
    #[value(name = "1bit")]
    OneBit,
    #[value(name = "1bit-markov")]
    OneBitMarkov,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Levy,
    Conditioning,
    Layering,
    All,
}

/// A model resolved to desk scale.
pub struct Loaded {
    pub name: String,
    pub lazy: Box<dyn MdpModel>,
    /// The model itself when finite, else its pessimistic truncation.
    pub mdp: ExplicitMdp,
    /// Optimistic truncation, only for infinite models.
    pub optimistic: Option<ExplicitMdp>,
}

impl Loaded {
    pub fn finite(&self) -> bool {
        self.optimistic.is_none()
    }
}

fn family_doc_params(v: &Json) -> Result<Params> {
    let mut out = Params::new();
    let Some(obj) = v.as_object() else {
        return Ok(out);
    };
    for (k, x) in obj {
        let s = match x {
            Json::String(s) => s.clone(),
            Json::Array(a) => a
                .iter()
                .map(|y| y.as_str().map(str::to_string).unwrap_or_else(|| y.to_string()))
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        };
        out.insert(k.clone(), s);
    }
    Ok(out)
}

/// Resolves a file (explicit or family JSON) or a family spec like
/// `walk(p=1/3)`.
pub fn load_model(arg: &str, cfg: &Config) -> Result<Loaded> {
    let (name, params) = if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)?;
        let v: Json = serde_json::from_str(&text)?;
        match v.get("family").and_then(Json::as_str) {
            Some(f) => (f.to_string(), family_doc_params(v.get("params").unwrap_or(&Json::Null))?),
            None => {
                let m = ExplicitMdp::from_json(&text)?;
                return Ok(Loaded { name: arg.to_string(), lazy: Box::new(m.clone()), mdp: m, optimistic: None });
            }
        }
    } else {
        gallery::parse_spec(arg)?
    };
    let lazy = gallery::build(&name, &params)?;
    if gallery::is_finite(&name, &params) {
        let (m, fr) = materialize(&*lazy, usize::MAX, cfg.branch_cap)?;
        if fr.is_empty() {
            return Ok(Loaded { name, lazy, mdp: m, optimistic: None });
        }
    }
    let init = lazy.initial();
    let pess = truncate(&*lazy, &init, cfg.horizon, cfg.branch_cap, TruncMode::Pessimistic)?;
    let opt = truncate(&*lazy, &init, cfg.horizon, cfg.branch_cap, TruncMode::Optimistic)?;
    Ok(Loaded { name, lazy, mdp: pess, optimistic: Some(opt) })
}

/// Parses `parity`, `reach[:a,b]` and `safety[:a,b]`. Without ids the
/// target is every even-colored state for reach and every odd-colored state
/// (the states to avoid) for safety.
pub fn parse_objective(s: &str, m: &ExplicitMdp) -> Result<Objective> {
    let (kind, ids) = match s.split_once(':') {
        Some((k, ids)) => (k, Some(ids)),
        None => (s, None),
    };
    let mask = |even: bool| -> Result<Vec<bool>> {
        match ids {
            Some(ids) => m.mask_of(ids.split(',').map(str::trim).filter(|x| !x.is_empty())),
            None => Ok(m.mask_where(|c| (c % 2 == 0) == even)),
        }
    };
    match kind {
        "parity" if ids.is_none() => Ok(Objective::Parity),
        "reach" => Ok(Objective::Reach(mask(true)?)),
        "safety" => Ok(Objective::Safety(mask(false)?)),
        _ => Err(Error::Parse(format!("unknown objective {s:?}"))),
    }
}

fn pretty(v: &Json) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

fn ids(m: &ExplicitMdp) -> Vec<String> {
    (0..m.len()).map(|i| m.id(i).to_string()).collect()
}

/// Runs the front end; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let res = Config::load(cli.config.as_deref()).and_then(|cfg| dispatch(&cli.command, &cfg, out, err));
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, cfg: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Info { model } => {
            let l = load_model(model, cfg)?;
            let (j, line) = info(&l);
            writeln!(out, "{}", pretty(&j))?;
            writeln!(err, "{line}")?;
            Ok(0)
        }
        Command::Transform { model, op, l, cap, mode } => {
            let lm = load_model(model, cfg)?;
            let h = l.unwrap_or(cfg.horizon);
            let cap = cap.unwrap_or(cfg.branch_cap);
            let tm = match mode {
                ModeArg::Pess => TruncMode::Pessimistic,
                ModeArg::Opt => TruncMode::Optimistic,
            };
            let res = transform(&lm, *op, h, cap, tm)?;
            writeln!(out, "{}", res.to_json_pretty())?;
            writeln!(err, "{:?}: {} states, {} edges", op, res.len(), res.edge_count())?;
            Ok(0)
        }
        Command::Solve { model, objective, exact } => {
            let l = load_model(model, cfg)?;
            let obj = parse_objective(objective, &l.mdp)?;
            let rep = solve_report(&l, &obj, cfg, *exact)?;
            writeln!(out, "{}", pretty(&rep.to_json()))?;
            writeln!(err, "solved {} states of {} ({})", l.mdp.len(), l.name, rep.objective)?;
            Ok(0)
        }
        Command::Synthesize { model, objective, class, epsilon } => {
            let l = load_model(model, cfg)?;
            let eps = parse_rat(epsilon)?;
            let (j, ok) = synthesize(&l, objective, *class, &eps, cfg)?;
            writeln!(out, "{}", pretty(&j))?;
            writeln!(err, "synthesized {} strategy for {}; checks {}", j["strategy"]["class"], l.name, pass(ok))?;
            Ok(if ok { 0 } else { 4 })
        }
        Command::Evaluate { model, strategy, mc, steps, seed } => {
            let l = load_model(model, cfg)?;
            let sigma = Strategy::from_json(&std::fs::read_to_string(strategy)?)?;
            let j = evaluate(&l, &sigma, *mc, *steps, seed.unwrap_or(cfg.seed))?;
            writeln!(out, "{}", pretty(&j))?;
            writeln!(err, "evaluated {} on {}", sigma.class, l.name)?;
            Ok(0)
        }
        Command::Urchin { model, rounds } => {
            let l = load_model(model, cfg)?;
            let (j, ok) = urchin(&l, *rounds, cfg)?;
            writeln!(out, "{}", pretty(&j))?;
            writeln!(err, "{rounds} urchin rounds on {}; checks {}", l.name, pass(ok))?;
            Ok(if ok { 0 } else { 4 })
        }
        Command::Check { model, suite } => {
            let targets: Vec<Loaded> = match model {
                Some(m) => vec![load_model(m, cfg)?],
                None => gallery::list().iter().map(|f| load_model(f.name, cfg)).collect::<Result<Vec<_>>>()?,
            };
            let mut all = Map::new();
            let mut ok = true;
            for l in &targets {
                let rep = run_suite(l, *suite, cfg)?;
                ok &= rep.ok();
                writeln!(err, "{}: {} ({} checks)", l.name, pass(rep.ok()), rep.items.len())?;
                for f in rep.failures() {
                    writeln!(err, "  FAIL {}: {}", f.name, f.detail)?;
                }
                all.insert(l.name.clone(), rep.to_json());
            }
            writeln!(out, "{}", pretty(&Json::Object(all)))?;
            Ok(if ok { 0 } else { 4 })
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn info(l: &Loaded) -> (Json, String) {
    let m = &l.mdp;
    let colors: Vec<u32> = m.colors().into_iter().collect();
    let max_out = (0..m.len()).map(|i| m.succ(i).len()).max().unwrap_or(0);
    let j = json!({
        "model": l.name,
        "finite": l.finite(),
        "states": m.len(),
        "controlled": m.controlled_count(),
        "random": m.len() - m.controlled_count(),
        "edges": m.edge_count(),
        "max_out_degree": max_out,
        "colors": colors,
        "acyclic_up_to_sinks": is_acyclic_up_to_sinks(m).is_ok(),
        "initial": m.initial().iter().map(|&i| m.id(i)).collect::<Vec<_>>(),
    });
    let line = format!(
        "{}: {} states ({} controlled), {} edges, colors {:?}{}",
        l.name,
        m.len(),
        m.controlled_count(),
        m.edge_count(),
        colors,
        if l.finite() { "" } else { ", truncated" }
    );
    (j, line)
}

pub fn transform(l: &Loaded, op: Op, h: usize, cap: usize, mode: TruncMode) -> Result<ExplicitMdp> {
    match op {
        Op::Ladderize => {
            let lad = ladderize(&l.lazy, Some(1));
            let init = lad.initial();
            truncate(&lad, &init, h, cap, mode)
        }
        Op::Acyclify => {
            let a = acyclify(l.mdp.clone());
            let init = a.initial();
            truncate(&a, &init, h, cap, mode)
        }
        Op::Layer => Ok(layer(&l.mdp).mdp),
        Op::Condition => {
            let v = solve_parity(&l.mdp).values;
            Ok(condition(&l.mdp, &v)?.mdp)
        }
        Op::Truncate => {
            let init = l.lazy.initial();
            truncate(&l.lazy, &init, h, cap, mode)
        }
    }
}

fn bounds_of(l: &Loaded, obj: &Objective, pess: &[Rat]) -> Option<Vec<(Rat, Rat)>> {
    let opt_m = l.optimistic.as_ref()?;
    let obj2 = match obj {
        Objective::Parity => Objective::Parity,
        Objective::Reach(t) => Objective::Reach(remap(&l.mdp, opt_m, t)),
        Objective::Safety(t) => Objective::Safety(remap(&l.mdp, opt_m, t)),
    };
    let ov = solve(opt_m, &obj2).values;
    Some(
        (0..l.mdp.len())
            .map(|i| {
                let hi = opt_m.index_of(l.mdp.id(i)).map(|j| ov[j].clone()).unwrap_or_else(Rat::one);
                (pess[i].clone(), hi)
            })
            .collect(),
    )
}

fn remap(from: &ExplicitMdp, to: &ExplicitMdp, mask: &[bool]) -> Vec<bool> {
    (0..to.len()).map(|j| from.index_of(to.id(j)).is_some_and(|i| mask[i])).collect()
}

pub fn solve_report(l: &Loaded, obj: &Objective, cfg: &Config, exact: bool) -> Result<ValueReport> {
    let m = &l.mdp;
    if cfg.mode == NumMode::Float && !exact {
        let iv = solve_interval(m, obj, cfg.tolerance);
        return Ok(ValueReport {
            objective: obj.describe(m),
            mode: NumMode::Float,
            ids: ids(m),
            values: iv.into_iter().map(|(a, b)| Value::Interval(a, b)).collect(),
            witness: None,
            bounds: None,
        });
    }
    let sol = solve(m, obj);
    let mut rep = ValueReport::exact(obj.describe(m), ids(m), &sol.values);
    rep.witness = Some(sol.witness.to_strategy(m));
    rep.bounds = bounds_of(l, obj, &sol.values);
    Ok(rep)
}

fn md_for(m: &ExplicitMdp, objective: &str, eps: &Rat) -> Result<(MdStrategy, Option<CheckReport>)> {
    let eps_pos = eps > &Rat::zero();
    match objective {
        "parity" => Ok((solve_parity(m).witness, None)),
        "cobuchi" => {
            let (s, r) = cobuchi_eps_md(m, eps)?;
            Ok((s, Some(r.checks)))
        }
        "parity012" => {
            let (s, r) = parity012_opt_md(m)?;
            Ok((s, Some(r)))
        }
        o => match parse_objective(o, m)? {
            Objective::Safety(t) if eps_pos => Ok((safety_eps_md(m, &t, eps)?, None)),
            Objective::Reach(t) if eps_pos => Ok((reach_eps_md(m, &t, eps)?, None)),
            obj => Ok((solve(m, &obj).witness, None)),
        },
    }
}

fn plaster_1bit(src: &ExplicitMdp, eps: &Rat, cfg: &Config) -> Result<(Strategy, CheckReport, LayeredMdp)> {
    let l = layer(src);
    if let Err(s) = l.is_acyclic_up_to_sinks() {
        return Err(Error::NotAcyclic(l.mdp.id(s).to_string()));
    }
    let mut mask = vec![false; l.mdp.len()];
    for &s in src.initial() {
        mask[l.state_node(s, 0)] = true;
    }
    let l0: Vec<usize> = (0..mask.len()).filter(|&i| l.closure(&mask)[i]).collect();
    let (tau, rep) = plaster_core_with_gamma(&l.mdp, &l.sibling, &l0, eps, cfg.gamma()?.as_ref())?;
    Ok((l.unlayer_strategy(src, &tau), rep.checks, l))
}

pub fn synthesize(l: &Loaded, objective: &str, class: ClassArg, eps: &Rat, cfg: &Config) -> Result<(Json, bool)> {
    if eps < &Rat::zero() || eps >= &Rat::one() {
        return Err(Error::BadParams("epsilon must lie in [0,1)".into()));
    }
    let m = &l.mdp;
    let parity = objective == "parity";
    let mut checks = CheckReport::new("synthesize");
    let sigma = match class {
        ClassArg::Md => {
            let (s, c) = md_for(m, objective, eps)?;
            checks.extend(c.unwrap_or_else(|| CheckReport::new("md")));
            s.to_strategy(m).without_sinks()
        }
        ClassArg::OneBit if parity && eps.is_zero() => {
            let ob = optimal_parity_1bit(m, &OneBitOptions::default())?;
            checks.extend(ob.checks);
            ob.strategy.without_sinks()
        }
        ClassArg::OneBit if parity => {
            let (u, c, _) = plaster_1bit(m, eps, cfg)?;
            checks.extend(c);
            u.without_sinks()
        }
        ClassArg::OneBit => {
            let (s, c) = md_for(m, objective, eps)?;
            checks.extend(c.unwrap_or_else(|| CheckReport::new("md")));
            s.to_strategy(m).without_sinks().retag(StrategyClass::KBit(1))?
        }
        ClassArg::Markov | ClassArg::OneBitMarkov => {
            let a = acyclify(m.clone());
            let init = a.initial();
            let am = truncate(&a, &init, cfg.horizon, cfg.branch_cap, TruncMode::Pessimistic)?;
            let u = if class == ClassArg::OneBitMarkov && parity {
                let e = if eps.is_zero() { cfg_eps() } else { eps.clone() };
                let (u, c, _) = plaster_1bit(&am, &e, cfg)?;
                checks.extend(c);
                u
            } else {
                let (s, c) = md_for(&am, objective, eps)?;
                checks.extend(c.unwrap_or_else(|| CheckReport::new("md")));
                let s = s.to_strategy(&am);
                if class == ClassArg::OneBitMarkov {
                    s.retag(StrategyClass::KBit(1))?
                } else {
                    s
                }
            };
            markov_from_acyclified(&u.without_sinks())?
        }
    };
    let obj = match objective {
        "parity" | "cobuchi" | "parity012" => Objective::Parity,
        o => parse_objective(o, m)?,
    };
    let values = solve(m, &obj).values;
    let att = strategy_attainment(m, &sigma, m.initial(), &obj)?;
    let mut init = Map::new();
    for (k, &s) in m.initial().iter().enumerate() {
        let floor = if eps.is_zero() { values[s].clone() } else { &values[s] - eps };
        let ok = att[k] >= floor || (matches!(obj, Objective::Safety(_)) && att[k] >= &values[s] * (Rat::one() - eps));
        checks.push(
            format!("attainment {}", m.id(s)),
            ok,
            format!("attains {} against value {}", fmt_rat(&att[k]), fmt_rat(&values[s])),
        );
        init.insert(m.id(s).into(), json!({"value": fmt_rat(&values[s]), "attainment": fmt_rat(&att[k])}));
    }
    let ok = checks.ok();
    let j = json!({
        "model": l.name,
        "objective": objective,
        "epsilon": fmt_rat(eps),
        "truncated": !l.finite(),
        "strategy": serde_json::to_value(sigma.to_doc())?,
        "initial": Json::Object(init),
        "checks": checks.to_json(),
    });
    Ok((j, ok))
}

/// ε used when an optimal 1-bit Markov strategy is requested: plastering
/// needs ε > 0, and on the acyclified truncation a small one suffices.
fn cfg_eps() -> Rat {
    crate::num::rat(1, 1000)
}

/// Wilson score interval at 95%.
pub fn wilson(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959964f64;
    let nf = n as f64;
    let p = successes as f64 / nf;
    let denom = 1.0 + z * z / nf;
    let centre = (p + z * z / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn evaluate(l: &Loaded, sigma: &Strategy, mc: Option<usize>, steps: usize, seed: u64) -> Result<Json> {
    let m = &l.mdp;
    let init = m.initial();
    let Some(n) = mc else {
        let att = strategy_attainment(m, sigma, init, &Objective::Parity)?;
        let mut vals = Map::new();
        for (k, &s) in init.iter().enumerate() {
            vals.insert(m.id(s).into(), json!(fmt_rat(&att[k])));
        }
        return Ok(json!({"model": l.name, "mode": "exact", "truncated": !l.finite(), "attainment": vals}));
    };
    let ic = induce_chain(m, sigma, init)?;
    let mut vals = Map::new();
    for &s in init {
        let start = ic.start(s).expect("start in chain");
        let runs = sample_runs(&ic.chain, start, steps, n, seed);
        // a run counts as won when the largest color of its second half is even
        let wins = runs
            .iter()
            .filter(|r| r.states[r.states.len() / 2..].iter().map(|&x| ic.chain.color(x)).max().unwrap_or(1) % 2 == 0)
            .count();
        let (lo, hi) = wilson(wins, n);
        vals.insert(
            m.id(s).into(),
            json!({"runs": n, "wins": wins, "estimate": wins as f64 / n as f64, "wilson95": [lo, hi]}),
        );
    }
    Ok(json!({"model": l.name, "mode": "monte-carlo", "steps": steps, "seed": seed, "surrogate": vals}))
}

pub fn urchin(l: &Loaded, rounds: usize, cfg: &Config) -> Result<(Json, bool)> {
    let params = cfg.urchin.params()?;
    // the construction needs every state winning almost surely, which the
    // pessimistic sink breaks
    let src = l.optimistic.as_ref().unwrap_or(&l.mdp);
    let lay = layer(src);
    let mut mask = vec![false; lay.mdp.len()];
    for &s in src.initial() {
        mask[lay.state_node(s, 0)] = true;
    }
    let closed = lay.closure(&mask);
    let l0: Vec<usize> = (0..closed.len()).filter(|&i| closed[i]).collect();
    let out = sea_urchin_rounds(&lay.mdp, &lay.sibling, &l0, rounds, &params)?;
    let trace: Vec<Json> = out
        .rounds
        .iter()
        .map(|r| {
            json!({
                "round": r.round,
                "radius": r.radius,
                "body": r.body,
                "A": r.a,
                "B": r.b,
                "Gamma": r.g,
                "p": r.p.iter().map(fmt_rat).collect::<Vec<_>>(),
                "p_f64": r.p.iter().map(to_f64).collect::<Vec<_>>(),
            })
        })
        .collect();
    let fixed: Vec<&str> = (0..lay.mdp.len()).filter(|&i| out.fixed[i]).map(|i| lay.mdp.id(i)).collect();
    let provenance: Vec<Json> = out.provenance.iter().map(|(k, v)| json!({"step": k, "states": v})).collect();
    let j = json!({
        "model": l.name,
        "truncation": if l.finite() { "none" } else { "optimistic" },
        "rounds": trace,
        "fixed": fixed,
        "strategy": serde_json::to_value(out.strategy.to_strategy(&lay.mdp).to_doc())?,
        "provenance": provenance,
        "checks": out.checks.to_json(),
    });
    Ok((j, out.checks.ok()))
}

/// Invariant suites on one model.
pub fn run_suite(l: &Loaded, suite: Suite, cfg: &Config) -> Result<CheckReport> {
    let m = &l.mdp;
    let mut rep = CheckReport::new(&format!("{suite:?}").to_lowercase());
    if matches!(suite, Suite::Levy | Suite::All) {
        let sol = solve_parity(m);
        let all = vec![true; m.len()];
        let chain = fix_strategy(m, &sol.witness, &all)?;
        rep.extend(check_levy(&chain, &LevyParams::default()));
    }
    if matches!(suite, Suite::Conditioning | Suite::All) {
        let v = solve_parity(m).values;
        match condition(m, &v) {
            Ok(c) => {
                let bad_row = (0..c.mdp.len())
                    .filter(|&i| !c.mdp.is_controlled(i))
                    .find(|&i| c.mdp.random_row(i).iter().fold(Rat::zero(), |a, (_, p)| a + p) != Rat::one());
                rep.push(
                    "conditioned rows sum to 1",
                    bad_row.is_none(),
                    bad_row.map(|i| c.mdp.id(i).to_string()).unwrap_or_default(),
                );
                let cv = solve_parity(&c.mdp).values;
                let bad = cv.iter().position(|x| !x.is_one());
                rep.push(
                    "conditioned values are 1",
                    bad.is_none(),
                    bad.map(|i| format!("{} has {}", c.mdp.id(i), fmt_rat(&cv[i]))).unwrap_or_default(),
                );
            }
            Err(Error::EmptyConditioned) => rep.push("conditioned MDP", true, "no state has positive value"),
            Err(e) => return Err(e),
        }
    }
    if matches!(suite, Suite::Layering | Suite::All) {
        let lay = layer(m);
        let structure = lay.check_structure(m);
        rep.push("layered structure", structure.is_ok(), structure.err().unwrap_or_default());
        if is_acyclic_up_to_sinks(m).is_ok() {
            rep.push("acyclicity preserved", lay.is_acyclic_up_to_sinks().is_ok(), "");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let all: Vec<usize> = (0..m.len()).collect();
        for k in 0..5 {
            let u = gallery::random_1bit(&mut rng, m);
            let tau = lay.layer_strategy(m, &u)?;
            let direct = strategy_attainment(m, &u, &all, &Objective::Parity)?;
            let starts: Vec<usize> = all.iter().map(|&s| lay.state_node(s, 0)).collect();
            let via = strategy_attainment(&lay.mdp, &tau.to_strategy(&lay.mdp), &starts, &Objective::Parity)?;
            rep.push(format!("1-bit/MD correspondence #{k}"), direct == via, "");
        }
    }
    Ok(rep)
}
