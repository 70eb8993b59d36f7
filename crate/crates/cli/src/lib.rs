//! Command dispatch for the `shtuka` binary.

use clap::{Args, Parser, Subcommand};

use shtuka_core::charstack::{fixed_groupoid_torus_with, loop_image};
use shtuka_core::excursion::{xi_from_rep, ExcursionDatum};
use shtuka_core::groups::{EnumerateOptions, Word};
use shtuka_core::reptheory::Representation;
use shtuka_core::shtuka::{
    check_trace_space, chern_check, enumeration_check, excursion_action_check, hecke_check, legged_space,
    load_scenario, run_check, run_selftest, span_check, t_algebra_check, tautological_loops,
    verify_frobenius_product, verify_s_equals_t, BuildOptions, Report, Scenario, SelftestOptions, SelftestReport,
};
use shtuka_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "shtuka", version, about = "Exact finite models of character stacks, excursions and twisted traces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Built-in scenario name or path to a scenario file.
    #[arg(long, global = true)]
    pub scenario: Option<String>,
    /// Representation name; defaults to every representation of the scenario.
    #[arg(long, global = true)]
    pub rep: Option<String>,
    /// Comma-separated leg representations.
    #[arg(long, global = true, value_delimiter = ',')]
    pub legs: Vec<String>,
    /// Maximal loop length for `excursion span`.
    #[arg(long, global = true)]
    pub loop_length: Option<usize>,
    /// Write the JSON report to this path (`-` for stdout).
    #[arg(long, global = true)]
    pub json: Option<String>,
    /// Refuse target groups larger than this
    #[arg(long, global = true)]
    pub max_group_order: Option<usize>,
    /// Node budget for the homomorphism search
    #[arg(long, global = true)]
    pub max_search_nodes: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Homomorphism orbits; with `--torus`, the fixed-point groupoid.
    Locsys {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
        #[arg(long)]
        torus: bool,
    },
    /// Excursion functions.
    #[command(subcommand)]
    Excursion(ExcursionCommand),
    /// HH₀ of the twist bimodule and the Hecke commutation isos.
    Hh {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
    },
    /// The (legged) trace space and its comparison with invariant sections.
    Trace {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
    },
    /// `S = T` for one or all representations.
    StCheck {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
    },
    /// Partial Frobenius maps on the legged space.
    Frobenius {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
    },
    /// Hattori–Stallings classes against the tautological excursion.
    Chern {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
    },
    /// The full acceptance suite.
    Selftest {
        #[arg(long, default_value_t = SelftestOptions::default().seed)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum ExcursionCommand {
    /// Evaluate the excursion of `ξ_rep` along loops (default: the tautological pair).
    Eval {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
        /// Semicolon-separated words in the mapping-torus generators, e.g. `t; 1`.
        #[arg(long)]
        loops: Option<String>,
    },
    /// Span of excursion functions inside the class functions.
    Span {
        #[arg(id = "scenario_pos", value_name = "SCENARIO")]
        scenario: Option<String>,
    },
}

/// What a command produced.
pub enum Outcome {
    Checks(Report),
    Selftest(SelftestReport),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Checks(r) => r.passed(),
            Outcome::Selftest(r) => r.passed(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Outcome::Checks(r) => r.render(),
            Outcome::Selftest(r) => {
                let mut out: String = r.criteria.iter().map(|c| c.line() + "\n").collect();
                for c in &r.criteria {
                    for f in c.failures() {
                        out += &format!("  criterion {}: {}: {}\n", c.id, f.name, f.detail);
                    }
                }
                let verdict = if r.passed() { "selftest passed" } else { "SELFTEST FAILED" };
                out + &format!("{verdict} ({} ms)\n", r.elapsed_ms)
            }
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Outcome::Checks(r) => r.to_json(),
            Outcome::Selftest(r) => serde_json::to_string_pretty(r).expect("report serializes"),
        }
    }
}

fn scenario_arg(positional: &Option<String>, flags: &Flags) -> Result<String> {
    match (positional, &flags.scenario) {
        (Some(p), Some(f)) if p != f => {
            Err(Error::Scenario { path: "--scenario".into(), msg: format!("given both {p:?} and {f:?}") })
        }
        (Some(p), _) => Ok(p.clone()),
        (None, Some(f)) => Ok(f.clone()),
        (None, None) => Err(Error::Scenario { path: "--scenario".into(), msg: "no scenario given".into() }),
    }
}

fn build_options(flags: &Flags) -> BuildOptions {
    let mut o = BuildOptions::default();
    if let Some(n) = flags.max_group_order {
        o.max_group_order = n;
    }
    if let Some(n) = flags.max_search_nodes {
        o.max_search_nodes = n;
    }
    o
}

fn enumerate_options(flags: &Flags) -> EnumerateOptions {
    let mut o = EnumerateOptions::default();
    if let Some(n) = flags.max_search_nodes {
        o.max_nodes = n;
    }
    o
}

fn selected_reps(s: &Scenario, flags: &Flags) -> Result<Vec<(String, Representation)>> {
    match &flags.rep {
        Some(n) => Ok(vec![(n.clone(), s.rep(n)?.clone())]),
        None => Ok(s.reps.clone()),
    }
}

fn legs(s: &Scenario, flags: &Flags) -> Result<Vec<(String, Representation)>> {
    flags.legs.iter().map(|n| Ok((n.clone(), s.rep(n)?.clone()))).collect()
}

fn images_text(s: &Scenario, images: &[usize]) -> String {
    let names = &s.presentation.generators;
    names.iter().zip(images).map(|(n, &x)| format!("{n} ↦ {}", s.group.element(x))).collect::<Vec<_>>().join(", ")
}

fn locsys(s: &Scenario, torus: bool, flags: &Flags) -> Result<Report> {
    let mut report = Report::new(if torus { "locsys --torus" } else { "locsys" }, Some(s.name.clone()));
    report.push(run_check("homomorphism orbits", |b| {
        let c = s.char_groupoid();
        for (i, o) in c.orbits().orbits.iter().enumerate() {
            let rho = &c.homs()[o.representative];
            b.text(
                format!("orbit {i}"),
                format!("[{}] size {} weight 1/{}", images_text(s, &rho.images), o.members.len(), o.stabilizer.len()),
            );
        }
        b.text("homomorphisms", c.homs().len().to_string());
        b.text("cardinality", c.cardinality().to_string());
        Ok(())
    }));
    // the pairs description is the scenario's own; --torus recomputes it from the mapping torus
    let torus_fixed;
    let f = if torus {
        torus_fixed = fixed_groupoid_torus_with(s.fixed().presentation(), &s.phi, &s.group, enumerate_options(flags))?;
        &torus_fixed
    } else {
        &**s.fixed()
    };
    report.push(run_check(if torus { "fixed groupoid (mapping torus)" } else { "fixed groupoid (pairs)" }, |b| {
        let g = &s.group;
        for (i, o) in f.orbits().orbits.iter().enumerate() {
            let rep = f.object(o.representative);
            b.text(
                format!("orbit {i}"),
                format!(
                    "[{}; t ↦ {}] size {} weight 1/{}",
                    images_text(s, &rep.rho.images),
                    g.element(rep.g),
                    o.members.len(),
                    o.stabilizer.len()
                ),
            );
        }
        b.text("objects", f.objects().len().to_string());
        b.text("cardinality", f.cardinality().to_string());
        Ok(())
    }));
    report.push(enumeration_check(s, enumerate_options(flags)));
    Ok(report)
}

fn parse_loops(s: &Scenario, text: &str) -> Result<Vec<Word>> {
    let torus = s.fixed().torus();
    text.split(';').map(|w| Word::parse(w.trim(), &torus.generators)).collect()
}

fn excursion_eval(s: &Scenario, loops: Option<&str>, flags: &Flags) -> Result<Report> {
    let mut report = Report::new("excursion eval", Some(s.name.clone()));
    let loops = match loops {
        Some(t) => parse_loops(s, t)?,
        None => tautological_loops(s),
    };
    let legs = legs(s, flags)?;
    let torus = s.fixed().torus();
    for (rn, a) in selected_reps(s, flags)? {
        let xi = xi_from_rep(&a)?;
        let d = ExcursionDatum::new(xi, loops.clone())?;
        let label = format!("{rn}; loops {}", loops.iter().map(|w| w.display(&torus.generators)).collect::<Vec<_>>().join(", "));
        report.push(run_check(format!("excursion values [{label}]"), |b| {
            let f = shtuka_core::excursion::evaluate_excursion(&d, s.fixed())?;
            b.vector("values by orbit", &f.values);
            // χ_a(σ(γ₁) σ(γ₂)⁻¹) at each orbit representative
            let ch = a.character();
            let oracle = (0..s.fixed().orbit_count())
                .map(|o| {
                    let rep = s.fixed().representative(o);
                    let imgs =
                        loops.iter().map(|w| loop_image(rep, w, &s.group)).collect::<Result<Vec<_>>>()?;
                    let x = imgs.iter().skip(1).fold(imgs[0], |acc, &y| s.group.mul(acc, s.group.inv(y)));
                    Ok(ch.at(x).clone())
                })
                .collect::<Result<Vec<_>>>();
            if loops.len() == 2 {
                let oracle = oracle?;
                b.expect(f.values == oracle, || "values differ from the character oracle".into());
            }
            Ok(())
        }));
        report.push(excursion_action_check(s, &label, &d, &legs));
    }
    Ok(report)
}

fn excursion_span(s: &Scenario, flags: &Flags) -> Result<Report> {
    let mut report = Report::new("excursion span", Some(s.name.clone()));
    let gens = match &flags.rep {
        Some(_) => selected_reps(s, flags)?,
        None if !s.span_reps.is_empty() => {
            s.span_reps.iter().map(|n| Ok((n.clone(), s.rep(n)?.clone()))).collect::<Result<Vec<_>>>()?
        }
        None => s.reps.clone(),
    };
    let l = flags.loop_length.or(s.loop_length).unwrap_or(1);
    report.push(span_check(s, &gens, l));
    Ok(report)
}

fn hh(s: &Scenario, flags: &Flags) -> Result<Report> {
    let mut report = Report::new("hh", Some(s.name.clone()));
    let legs = legs(s, flags)?;
    let reps: Vec<Representation> = legs.iter().map(|(_, r)| r.clone()).collect();
    report.push(run_check("HH₀ of the twist bimodule", |b| {
        let space = legged_space(s, &reps)?;
        b.text("algebra dimension", s.algebra_dim().to_string());
        b.text("HH₀ dimension", space.hh.dim().to_string());
        b.text("block dims", format!("{:?}", space.hh.block_dims()));
        match &space.dense {
            Some(d) => {
                b.text("dense HH₀ dimension", d.hh.dim().to_string());
                b.expect(d.hh.dim() == space.hh.dim(), || "dense and orbitwise HH₀ differ".into());
            }
            None => b.note("dense bimodule too large; orbitwise HH₀ only"),
        }
        Ok(())
    }));
    for (rn, r) in selected_reps(s, flags)? {
        report.push(hecke_check(s, &rn, &r));
    }
    Ok(report)
}

fn trace(s: &Scenario, flags: &Flags) -> Result<Report> {
    let mut report = Report::new("trace", Some(s.name.clone()));
    report.push(check_trace_space(s, &legs(s, flags)?));
    let reps = selected_reps(s, flags)?;
    for i in 0..reps.len() {
        for j in i..reps.len() {
            report.push(t_algebra_check(s, (&reps[i].0, &reps[i].1), (&reps[j].0, &reps[j].1)));
        }
    }
    Ok(report)
}

fn st_check(s: &Scenario, flags: &Flags) -> Result<Report> {
    let mut report = Report::new("st-check", Some(s.name.clone()));
    let legs = legs(s, flags)?;
    for (rn, a) in selected_reps(s, flags)? {
        report.push(verify_s_equals_t(s, &rn, &a, &legs));
    }
    Ok(report)
}

fn frobenius(s: &Scenario, flags: &Flags) -> Result<Report> {
    let mut report = Report::new("frobenius", Some(s.name.clone()));
    if flags.legs.is_empty() {
        let reps = s.reps.clone();
        for i in 0..reps.len() {
            for j in i..reps.len() {
                report.push(verify_frobenius_product(s, &[reps[i].clone(), reps[j].clone()]));
            }
        }
    } else {
        report.push(verify_frobenius_product(s, &legs(s, flags)?));
    }
    Ok(report)
}

fn chern(s: &Scenario, flags: &Flags) -> Result<Report> {
    if !s.is_circle() {
        return Err(Error::Scenario {
            path: "presentation".into(),
            msg: "chern needs a scenario with trivial source group and identity endomorphism".into(),
        });
    }
    let mut report = Report::new("chern", Some(s.name.clone()));
    for (rn, a) in selected_reps(s, flags)? {
        report.push(chern_check(s, &rn, &a));
    }
    Ok(report)
}

/// Run one command. Errors are problems with the input; failed identities are
/// reported inside the outcome.
pub fn run_command(cmd: &Command, flags: &Flags) -> Result<Outcome> {
    let load = |p: &Option<String>| load_scenario(&scenario_arg(p, flags)?, build_options(flags));
    let report = match cmd {
        Command::Selftest { seed } => {
            return Ok(Outcome::Selftest(run_selftest(SelftestOptions { seed: *seed, ..SelftestOptions::default() })))
        }
        Command::Locsys { scenario, torus } => locsys(&load(scenario)?, *torus, flags)?,
        Command::Excursion(ExcursionCommand::Eval { scenario, loops }) => {
            excursion_eval(&load(scenario)?, loops.as_deref(), flags)?
        }
        Command::Excursion(ExcursionCommand::Span { scenario }) => excursion_span(&load(scenario)?, flags)?,
        Command::Hh { scenario } => hh(&load(scenario)?, flags)?,
        Command::Trace { scenario } => trace(&load(scenario)?, flags)?,
        Command::StCheck { scenario } => st_check(&load(scenario)?, flags)?,
        Command::Frobenius { scenario } => frobenius(&load(scenario)?, flags)?,
        Command::Chern { scenario } => chern(&load(scenario)?, flags)?,
    };
    Ok(Outcome::Checks(report))
}
