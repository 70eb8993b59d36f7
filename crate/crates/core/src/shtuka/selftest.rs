//! The full acceptance suite over the built-in scenarios plus seeded random cases.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{make_context, CycNumber, Vector};
use crate::excursion::{evaluate_excursion, xi_star, ExcursionDatum, XiDatum};
use crate::groups::{EnumerateOptions, Permutation, Word};
use crate::reptheory::Representation;
use crate::tracecalc::{cyclicity_iso, random_bimodule, SmallAlgebra};

use super::checks::{
    check_trace_space, chern_check, enumeration_check, span_check, verify_frobenius_product, verify_s_equals_t,
    verify_s_equals_t_on,
};
use super::report::{run_check, CheckResult};
use super::scenario::{
    build_scenario, builtin_names, BuildOptions, GroupSpec, PresentationSpec, RepSpec, Scenario, ScenarioFile,
};
use super::space::legged_space;

#[derive(Clone, Copy, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    pub random_scenarios: usize,
    pub cyclicity_pairs: usize,
    pub excursion_data: usize,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 20_240_917, random_scenarios: 20, cyclicity_pairs: 50, excursion_data: 100 }
    }
}

/// Per-scenario budget for criterion 1.
pub const VACUUM_LIMIT_MS: u64 = 10_000;
/// Budget for criterion 2.
pub const LEGS_LIMIT_MS: u64 = 30_000;
/// Budget for the whole suite.
pub const SUITE_LIMIT_MS: u64 = 180_000;

/// The scenarios named by criteria 1, 2 and 7.
pub const CORE_SCENARIOS: [&str; 3] = ["z3-frobenius", "s3-inertia", "f2-swap"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let failed = self.failures().len();
        let detail = if failed == 0 {
            format!("{} checks", self.checks.len())
        } else {
            format!("{failed} of {} checks failed; first: {}", self.checks.len(), self.failures()[0].name)
        };
        format!("[{tag}] criterion {:>2}: {} ({detail}, {} ms)", self.id, self.title, self.elapsed_ms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub criteria: Vec<CriterionResult>,
    pub elapsed_ms: u64,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionResult::passed)
    }

    pub fn criterion(&self, id: u8) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

fn timed(id: u8, title: &str, body: impl FnOnce(&mut Vec<CheckResult>)) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    body(&mut checks);
    CriterionResult { id, title: title.into(), checks, elapsed_ms: start.elapsed().as_millis() as u64 }
}

fn budget(name: String, elapsed_ms: u64, limit_ms: u64) -> CheckResult {
    run_check(name, |b| {
        b.text("elapsed ms", elapsed_ms.to_string());
        b.expect(elapsed_ms < limit_ms, || format!("took {elapsed_ms} ms, budget {limit_ms} ms"));
        Ok(())
    })
}

fn failed(name: impl Into<String>, e: Error) -> CheckResult {
    run_check(name, |_| Err(e))
}

fn load(name: &str, checks: &mut Vec<CheckResult>) -> Option<Scenario> {
    match Scenario::builtin(name) {
        Ok(s) => Some(s),
        Err(e) => {
            checks.push(failed(format!("load {name}"), e));
            None
        }
    }
}

fn named_reps(s: &Scenario) -> Vec<(String, Representation)> {
    s.reps.clone()
}

/// Criterion 1: `S = T` on the trace space for every representation.
pub fn criterion_vacuum() -> CriterionResult {
    timed(1, "S = T, vacuum case", |checks| {
        for name in CORE_SCENARIOS {
            let start = Instant::now();
            let Some(s) = load(name, checks) else { continue };
            for (rn, a) in &s.reps {
                let mut c = verify_s_equals_t(&s, rn, a, &[]);
                c.name = format!("{name}: {}", c.name);
                checks.push(c);
            }
            checks.push(budget(format!("{name}: runtime"), start.elapsed().as_millis() as u64, VACUUM_LIMIT_MS));
        }
    })
}

/// Leg tuples of length one and two, unordered with repetition.
pub fn leg_choices(s: &Scenario) -> Vec<Vec<(String, Representation)>> {
    let reps = named_reps(s);
    let mut out: Vec<Vec<_>> = reps.iter().map(|r| vec![r.clone()]).collect();
    for i in 0..reps.len() {
        for j in i..reps.len() {
            out.push(vec![reps[i].clone(), reps[j].clone()]);
        }
    }
    out
}

/// Criterion 2: `S = T` on one- and two-legged spaces.
pub fn criterion_legs() -> CriterionResult {
    let start = Instant::now();
    let mut c = timed(2, "S = T with legs", |checks| {
        for name in CORE_SCENARIOS {
            let Some(s) = load(name, checks) else { continue };
            for legs in leg_choices(&s) {
                let reps: Vec<Representation> = legs.iter().map(|(_, r)| r.clone()).collect();
                let space = match legged_space(&s, &reps) {
                    Ok(sp) => sp,
                    Err(e) => {
                        checks.push(failed(format!("{name}: legged space"), e));
                        continue;
                    }
                };
                for (rn, a) in &s.reps {
                    let mut c = verify_s_equals_t_on(&s, &space, rn, a, &legs);
                    c.name = format!("{name}: {}", c.name);
                    checks.push(c);
                }
            }
        }
    });
    c.checks.push(budget("runtime".into(), start.elapsed().as_millis() as u64, LEGS_LIMIT_MS));
    c
}

fn word_text(rng: &mut ChaCha8Rng, names: &[String], max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    let parts: Vec<String> = (0..len)
        .map(|_| {
            let n = names.choose(rng).expect("nonempty").clone();
            match rng.gen_range(0..3) {
                0 => format!("{n}^-1"),
                1 => format!("{n}^2"),
                _ => n,
            }
        })
        .collect();
    parts.join(" ")
}

/// A random scenario with `|G| ≤ 12`, at most two generators and two relators, and a valid `φ`.
pub fn random_scenario(rng: &mut ChaCha8Rng, index: usize) -> Result<Scenario> {
    for _ in 0..10_000 {
        let degree = rng.gen_range(2..=4);
        let perms: Vec<Permutation> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let mut img: Vec<u32> = (0..degree as u32).collect();
                img.shuffle(rng);
                Permutation::new(img).expect("shuffle is a bijection")
            })
            .collect();
        let order = crate::groups::FinGroup::from_permutations(degree, &perms)?.order();
        if order > 12 {
            continue;
        }
        let rank = rng.gen_range(0..=2);
        let names: Vec<String> = ["a", "b"][..rank].iter().map(|s| s.to_string()).collect();
        let relators = if rank == 0 {
            Vec::new()
        } else {
            (0..rng.gen_range(0..=2)).map(|_| word_text(rng, &names, 3)).collect()
        };
        let phi: BTreeMap<String, String> = names.iter().map(|n| (n.clone(), word_text(rng, &names, 2))).collect();
        let file = ScenarioFile {
            name: format!("random-{index}"),
            description: "seeded random scenario".into(),
            group: GroupSpec { degree, generators: perms.iter().map(ToString::to_string).collect() },
            presentation: PresentationSpec { generators: names, relators },
            phi,
            conductor: None,
            reps: vec![
                RepSpec { name: "trivial".into(), kind: "trivial".into(), k: None, matrices: None },
                RepSpec { name: "perm".into(), kind: "permutation".into(), k: None, matrices: None },
            ],
            module: None,
            checks: Default::default(),
        };
        match build_scenario(&file, BuildOptions::default()) {
            Ok(s) => return Ok(s),
            Err(Error::Scenario { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::CheckFailed("no valid random scenario found".into()))
}

/// Criterion 3: both pipelines agree on all built-ins and on random scenarios.
pub fn criterion_two_traces(opts: SelftestOptions) -> CriterionResult {
    timed(3, "two-trace agreement", |checks| {
        for name in builtin_names() {
            let Some(s) = load(name, checks) else { continue };
            let mut legs: Vec<Vec<(String, Representation)>> = vec![Vec::new()];
            legs.extend(s.reps.iter().map(|r| vec![r.clone()]));
            for l in legs {
                let mut c = check_trace_space(&s, &l);
                c.name = format!("{name}: {}", c.name);
                checks.push(c);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for i in 0..opts.random_scenarios {
            match random_scenario(&mut rng, i) {
                Ok(s) => {
                    for l in [Vec::new(), vec![s.reps[1].clone()]] {
                        let mut c = check_trace_space(&s, &l);
                        c.name = format!("{}: {}", s.name, c.name);
                        checks.push(c);
                    }
                }
                Err(e) => checks.push(failed(format!("random scenario {i}"), e)),
            }
        }
    })
}

/// Criterion 4: excursion functions span all class functions.
pub fn criterion_span() -> CriterionResult {
    timed(4, "excursion generation", |checks| {
        for (name, gens) in [("s3-inertia", &["trivial", "sign", "std"][..]), ("z3-frobenius", &["chi1"][..])] {
            let Some(s) = load(name, checks) else { continue };
            let reps: Result<Vec<(String, Representation)>> =
                gens.iter().map(|g| Ok((g.to_string(), s.rep(g)?.clone()))).collect();
            match reps {
                Ok(r) => {
                    let mut c = span_check(&s, &r, 1);
                    c.name = format!("{name}: {}", c.name);
                    checks.push(c);
                }
                Err(e) => checks.push(failed(format!("{name}: reps"), e)),
            }
        }
    })
}

/// Criterion 5: Chern classes are tautological excursions.
pub fn criterion_chern() -> CriterionResult {
    timed(5, "Chern = tautological excursion", |checks| {
        for name in ["s3-inertia", "z4-circle"] {
            let Some(s) = load(name, checks) else { continue };
            for (rn, a) in &s.reps {
                let mut c = chern_check(&s, rn, a);
                c.name = format!("{name}: {}", c.name);
                checks.push(c);
            }
        }
    })
}

/// Criterion 6: cyclicity on random bimodule pairs.
pub fn criterion_cyclicity(opts: SelftestOptions) -> CriterionResult {
    timed(6, "cyclicity", |checks| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6379_636c);
        let ctx = match make_context(1) {
            Ok(c) => c,
            Err(e) => return checks.push(failed("context", e)),
        };
        for i in 0..opts.cyclicity_pairs {
            let (ka, kb) = (SmallAlgebra::random(&mut rng), SmallAlgebra::random(&mut rng));
            let a = Arc::new(ka.build(&ctx));
            let b = Arc::new(kb.build(&ctx));
            let q = random_bimodule(&mut rng, &ctx, (&a, ka), (&b, kb), 3);
            let p = random_bimodule(&mut rng, &ctx, (&b, kb), (&a, ka), 3);
            checks.push(run_check(format!("pair {i} ({ka:?}, {kb:?})"), |c| {
                let (q, p) = (q?, p?);
                let iso = cyclicity_iso(&q, &p)?;
                c.text("HH₀ dims", format!("{} / {}", iso.hh_qp.dim(), iso.hh_pq.dim()));
                c.expect(iso.hh_qp.dim() == iso.hh_pq.dim(), || "HH₀ dimensions differ".into());
                c.expect(iso.forward.mat_mul(&iso.backward)?.is_identity(), || "flip ∘ flip ≠ id".into());
                c.expect(iso.backward.mat_mul(&iso.forward)?.is_identity(), || "flip ∘ flip ≠ id".into());
                Ok(())
            }));
        }
    })
}

/// Criterion 7: partial Frobenius maps on two-legged spaces.
pub fn criterion_partial_frobenius() -> CriterionResult {
    timed(7, "partial Frobenius", |checks| {
        for name in builtin_names() {
            let Some(s) = load(name, checks) else { continue };
            for legs in leg_choices(&s).into_iter().filter(|l| l.len() == 2) {
                let mut c = verify_frobenius_product(&s, &legs);
                c.name = format!("{name}: {}", c.name);
                checks.push(c);
            }
        }
    })
}

/// Criterion 8: Burnside counts and agreement of the two fixed-locus descriptions.
pub fn criterion_enumeration(opts: SelftestOptions) -> CriterionResult {
    timed(8, "enumeration invariants", |checks| {
        let eopts = EnumerateOptions::default();
        for name in builtin_names() {
            let Some(s) = load(name, checks) else { continue };
            let mut c = enumeration_check(&s, eopts);
            c.name = format!("{name}: {}", c.name);
            checks.push(c);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for i in 0..opts.random_scenarios {
            match random_scenario(&mut rng, i) {
                Ok(s) => {
                    let mut c = enumeration_check(&s, eopts);
                    c.name = format!("{}: {}", s.name, c.name);
                    checks.push(c);
                }
                Err(e) => checks.push(failed(format!("random scenario {i}"), e)),
            }
        }
    })
}

fn random_vector(rng: &mut ChaCha8Rng, s: &Scenario, n: usize) -> Vector {
    (0..n).map(|_| CycNumber::from_int(&s.ctx, rng.gen_range(-2..=2))).collect()
}

/// A datum on `k` random slots with random invariant `v` and `v*`.
pub fn random_xi(rng: &mut ChaCha8Rng, s: &Scenario, k: usize) -> Result<XiDatum> {
    let reps: Vec<Representation> = (0..k).map(|_| s.reps.choose(rng).expect("reps").1.clone()).collect();
    let full = reps.iter().skip(1).try_fold(reps[0].clone(), |acc, r| acc.tensor(r))?;
    let p = full.averaging_projector()?;
    let pt = p.transpose();
    let mut v = p.apply(&random_vector(rng, s, full.dim()))?;
    for _ in 0..4 {
        if !crate::exactfield::vec_is_zero(&v) {
            break;
        }
        v = p.apply(&random_vector(rng, s, full.dim()))?;
    }
    let vstar = pt.apply(&random_vector(rng, s, full.dim()))?;
    XiDatum::new(&s.group, &s.ctx, reps, v, vstar)
}

fn random_loop(rng: &mut ChaCha8Rng, rank: usize) -> Word {
    let words = crate::excursion::words_up_to(rank, 2);
    words.choose(rng).expect("nonempty").clone()
}

/// Criterion 9: `∗`-multiplicativity, orbit constancy and loop-conjugation invariance.
pub fn criterion_excursion_laws(opts: SelftestOptions) -> CriterionResult {
    timed(9, "excursion algebra laws", |checks| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6578_6375);
        let scenarios: Vec<Scenario> = CORE_SCENARIOS.iter().filter_map(|n| load(n, checks)).collect();
        if scenarios.is_empty() {
            return;
        }
        for i in 0..opts.excursion_data {
            let s = &scenarios[i % scenarios.len()];
            let rank = s.fixed().torus().rank();
            checks.push(run_check(format!("datum {i} on {}", s.name), |b| {
                let k = rng.gen_range(1..=2);
                let loops: Vec<Word> = (0..k).map(|_| random_loop(&mut rng, rank)).collect();
                let (x1, x2) = (random_xi(&mut rng, s, k)?, random_xi(&mut rng, s, k)?);
                let d1 = ExcursionDatum::new(x1.clone(), loops.clone())?;
                let d2 = ExcursionDatum::new(x2.clone(), loops.clone())?;
                let d12 = ExcursionDatum::new(xi_star(&x1, &x2)?, loops.clone())?;
                // evaluate_excursion checks constancy on every orbit member
                let (f1, f2, f12) =
                    (evaluate_excursion(&d1, s.fixed())?, evaluate_excursion(&d2, s.fixed())?, evaluate_excursion(&d12, s.fixed())?);
                b.vector("Exc(ξ₁ ∗ ξ₂)", &f12.values);
                b.expect(f12 == f1.mul(&f2), || "Exc(ξ₁ ∗ ξ₂) ≠ Exc(ξ₁) Exc(ξ₂)".into());
                for (o, orbit) in s.fixed().orbits().orbits.iter().enumerate() {
                    for &m in &orbit.members {
                        b.expect(d1.value_at(s.fixed().object(m))? == f1.values[o], || format!("value varies on orbit {o}"));
                    }
                }
                let delta = random_loop(&mut rng, rank);
                let conj: Vec<Word> = loops.iter().map(|w| delta.concat(w).concat(&delta.inverse())).collect();
                let dc = ExcursionDatum::new(x1, conj)?;
                b.expect(evaluate_excursion(&dc, s.fixed())? == f1, || "simultaneous loop conjugation changes the value".into());
                Ok(())
            }));
        }
    })
}

/// Everything, with criterion 10 timing the whole run.
pub fn run_selftest(opts: SelftestOptions) -> SelftestReport {
    let start = Instant::now();
    let mut criteria = vec![
        criterion_vacuum(),
        criterion_legs(),
        criterion_two_traces(opts),
        criterion_span(),
        criterion_chern(),
        criterion_cyclicity(opts),
        criterion_partial_frobenius(),
        criterion_enumeration(opts),
        criterion_excursion_laws(opts),
    ];
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let all_passed = criteria.iter().all(CriterionResult::passed);
    let mut suite = vec![budget("suite runtime".into(), elapsed_ms, SUITE_LIMIT_MS)];
    suite.push(run_check("criteria 1-9 pass", |b| {
        b.expect(all_passed, || "some criterion failed".into());
        Ok(())
    }));
    criteria.push(CriterionResult { id: 10, title: "full selftest".into(), checks: suite, elapsed_ms });
    SelftestReport { criteria, elapsed_ms }
}
