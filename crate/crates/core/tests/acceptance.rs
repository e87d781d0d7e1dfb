//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diagchase::comcut::comcut;
use diagchase::commerge::{commerge, Assumption};
use diagchase::corpus::{builtin_registry, epi_f, epi_mepi_pf, epi_mepi_proof, mono_f, mono_monom_pf, mono_monom_proof};
use diagchase::fixtures::{cut_example_q, five_q, five_squares};
use diagchase::formula::{formula_dual, Formula};
use diagchase::kernel::{dual_sequent, Biproof, Direction, Kernel, Proof, RewriteTarget, Tactic};
use diagchase::model::{battery, eval_predicate, formula_eval, model_dual, FinCatModel};
use diagchase::paths::{closure, Bipath};
use diagchase::syntax::{parse_formula_in, parse_proof, Scope};

use common::*;

const FIVE_LEMMA_LIMIT: Duration = Duration::from_secs(1);
const FIG3_LIMIT: Duration = Duration::from_secs(10);
const SOUNDNESS_SWEEP_LIMIT: Duration = Duration::from_secs(60);
const COMCUT_SWEEP_LIMIT: Duration = Duration::from_secs(60);
const MONO_EPI_LIMIT: Duration = Duration::from_secs(1);
const BATTERY_LIMIT: Duration = Duration::from_secs(120);

const SWEEP_SIZE: usize = 500;
const MUTANTS: usize = 100;
const RANDOM_FORMULAS: usize = 200;
const INVOLUTION_SAMPLES: usize = 1000;
const RANDOM_STATEMENTS: usize = 300;

/// Extra statements with proofs, checked alongside the mono/epi pair.
const EXTRA_THEOREMS: &[(&str, &str, &str)] = &[
    (
        "composite_of_triangle",
        "forall compQ . commute($0) -> @Comp(restrA([0], $0), restrA([2], $0), restrA([1], $0))",
        "intro; intro_imply; witness $0; and_intro { eq_refl }; and_intro { eq_refl }; and_intro { eq_refl }; assumption 0",
    ),
    (
        "pasting_squares",
        "forall {n: 6, arcs: (0, 1), (1, 2), (0, 3), (1, 4), (2, 5), (3, 4), (4, 5)} . \
         commute(restrA([0, 2, 3, 5], $0)) -> commute(restrA([1, 3, 4, 6], $0)) -> commute($0)",
        "intro; intro_imply; intro_imply; comauto",
    ),
    (
        "restriction_commutes",
        "forall compQ . commute($0) -> commute(restrA([0, 1], $0))",
        "intro; intro_imply; comauto",
    ),
];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        out.detail = format!("{}; {:.3}s (limit {}s)", out.detail, took.as_secs_f64(), limit.as_secs());
        out.ok &= took < limit;
    } else {
        out.detail = format!("{}; {:.3}s", out.detail, took.as_secs_f64());
    }
    out
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn oracle_full(q: &diagchase::Quiver, assms: &[Assumption]) -> bool {
    NaiveRelation::new(q, &assumption_generators(q, assms)).is_full()
}

fn five_lemma() -> Outcome {
    let q = five_q();
    let squares: Vec<Assumption> = five_squares().into_iter().map(Assumption::Subquiver).collect();
    let all = commerge(&q, &squares).unwrap() && oracle_full(&q, &squares);
    let mut threes = 0;
    for drop in 0..4 {
        let mut three = squares.clone();
        three.remove(drop);
        if !commerge(&q, &three).unwrap() && !oracle_full(&q, &three) {
            threes += 1;
        }
    }
    outcome(all && threes == 4, format!("four squares merge: {all}; three-square subsets rejected: {threes}/4"))
}

fn cut_example() -> Outcome {
    let q = cut_example_q();
    let cut = comcut(&q).unwrap();
    let full = |bs: &[Bipath]| {
        let gens: Vec<_> = bs.iter().map(|b| (b.u, b.v, b.left.clone(), b.right.clone())).collect();
        NaiveRelation::new(&q, &gens).is_full()
    };
    let complete = full(&cut);
    let sufficient_fives = (0..cut.len())
        .filter(|&skip| {
            let five: Vec<Bipath> = cut.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, b)| b.clone()).collect();
            five.len() == 5 && full(&five)
        })
        .count();
    outcome(
        cut.len() == 6 && complete && sufficient_fives > 0,
        format!("{} bipaths; closure full: {complete}; sufficient 5-subsets: {sufficient_fives}", cut.len()),
    )
}

fn soundness_sweep() -> Outcome {
    let mut r = rng(0x5eed_0001);
    let (mut accepted, mut unsound) = (0, 0);
    for _ in 0..SWEEP_SIZE {
        let q = random_dag(&mut r, 6, 10);
        let assms = random_assumptions(&mut r, &q);
        if commerge(&q, &assms).unwrap() {
            accepted += 1;
            if !oracle_full(&q, &assms) {
                unsound += 1;
            }
        }
    }
    outcome(unsound == 0, format!("{SWEEP_SIZE} quivers, {accepted} accepted by commerge, {unsound} unsound"))
}

fn comcut_sweep() -> Outcome {
    let mut r = rng(0x5eed_0002);
    let (mut not_full, mut not_merged, mut bipaths) = (0, 0, 0);
    for _ in 0..SWEEP_SIZE {
        let q = random_dag(&mut r, 6, 10);
        let cut = comcut(&q).unwrap();
        bipaths += cut.len();
        if !closure(&q, &cut).unwrap().is_full() {
            not_full += 1;
        }
        let assms: Vec<Assumption> = cut.into_iter().map(Assumption::Bipath).collect();
        if !commerge(&q, &assms).unwrap() {
            not_merged += 1;
        }
    }
    outcome(
        not_full == 0 && not_merged == 0,
        format!("{SWEEP_SIZE} quivers, {bipaths} bipaths; closure not full: {not_full}; commerge false: {not_merged}"),
    )
}

fn mono_epi() -> Outcome {
    let reg = builtin_registry();
    let k = Kernel::new(&reg);
    let primal = k.check_proof(&mono_monom_pf(), &mono_monom_proof());
    let bp = Biproof::from_primal(mono_monom_proof());
    let bi = k.check_biproof(&mono_monom_pf(), &bp) == Ok(true);
    let by_duality = k.check_proof(&epi_mepi_pf(), &epi_mepi_proof());
    let dual_script = k.check_proof(&epi_mepi_pf(), &bp.dual);
    outcome(
        primal && bi && by_duality && dual_script,
        format!("mono_monom: {primal}; biproof: {bi}; epi_mepi by dual lemma: {by_duality}; by dual script: {dual_script}"),
    )
}

fn scope() -> Scope {
    Scope::corpus()
}

/// Statements with a proof the kernel accepts.
fn proved_corpus() -> Vec<(String, Formula, Proof)> {
    let mut out = vec![
        ("mono_monomPF".to_string(), mono_monom_pf(), mono_monom_proof()),
        ("epi_mepiPF".to_string(), epi_mepi_pf(), epi_mepi_proof()),
    ];
    for (name, f, pf) in EXTRA_THEOREMS {
        out.push((name.to_string(), parse_formula_in(f, &[], &scope()).unwrap(), parse_proof(pf).unwrap()));
    }
    out
}

fn mutate<R: Rng>(r: &mut R, pf: &Proof) -> Proof {
    let mut steps = pf.0.clone();
    let n = steps.len();
    match r.gen_range(0..6) {
        0 if n > 0 => {
            steps.remove(r.gen_range(0..n));
        }
        1 if n > 1 => {
            let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
            steps.swap(i, j);
        }
        2 if n > 0 => {
            let i = r.gen_range(0..n);
            steps.insert(i, steps[i].clone());
        }
        3 => {
            let t = [Tactic::Intro, Tactic::IntroImply, Tactic::Comauto, Tactic::EqRefl, Tactic::TrueIntro, Tactic::Assumption(0)]
                .choose(r)
                .unwrap()
                .clone();
            let i = r.gen_range(0..=n);
            steps.insert(i, t);
        }
        _ if n > 0 => {
            let i = r.gen_range(0..n);
            let bump = |x: usize, r: &mut R| if r.gen_bool(0.5) { x + 1 } else { x.saturating_sub(1) };
            steps[i] = match steps[i].clone() {
                Tactic::Assumption(k) => Tactic::Assumption(bump(k, r)),
                Tactic::Glue(k) => Tactic::Glue(bump(k, r)),
                Tactic::Compose(k, p) => Tactic::Compose(bump(k, r), p),
                Tactic::ElimImply(k, p) => Tactic::ElimImply(bump(k, r), p),
                Tactic::RewriteEqD { eq, direction, occurrence, target } => Tactic::RewriteEqD {
                    eq,
                    direction: match direction {
                        Direction::Forward => Direction::Backward,
                        Direction::Backward => Direction::Forward,
                    },
                    occurrence,
                    target: match target {
                        RewriteTarget::Goal => RewriteTarget::Premise(0),
                        RewriteTarget::Premise(_) => RewriteTarget::Goal,
                    },
                },
                _ => Tactic::Comauto,
            };
        }
        _ => steps.push(Tactic::Intro),
    }
    Proof(steps)
}

fn proof_duality() -> Outcome {
    let reg = builtin_registry();
    let k = Kernel::new(&reg);
    let corpus = proved_corpus();
    let mut r = rng(0x5eed_0003);
    let (mut agree, mut total, mut accepted) = (0, 0, 0);
    let mut check = |f: &Formula, pf: &Proof| {
        let bp = Biproof::from_primal(pf.clone());
        let primal = k.check_proof(f, &bp.primal);
        let dual = k.check_proof(&formula_dual(f), &bp.dual);
        total += 1;
        agree += (primal == dual) as usize;
        accepted += primal as usize;
    };
    for (_, f, pf) in &corpus {
        check(f, pf);
    }
    for _ in 0..MUTANTS {
        let (_, f, pf) = corpus.choose(&mut r).unwrap();
        let mut m = mutate(&mut r, pf);
        if r.gen_bool(0.3) {
            m = mutate(&mut r, &m);
        }
        check(f, &m);
    }
    outcome(agree == total, format!("{agree}/{total} biproofs agree ({accepted} primal proofs accepted)"))
}

fn models() -> Vec<(&'static str, FinCatModel)> {
    battery().into_iter().map(|(n, c)| (n, FinCatModel::new(c).unwrap())).collect()
}

fn semantic_duality() -> Outcome {
    let mut r = rng(0x5eed_0004);
    let mut formulas: Vec<Formula> = proved_corpus().into_iter().map(|(_, f, _)| f).collect();
    formulas.extend((0..RANDOM_FORMULAS).map(|_| random_closed_formula(&mut r)));
    let (mut agree, mut total) = (0, 0);
    for (_, m) in models() {
        let dm = model_dual(m.clone());
        for f in &formulas {
            total += 1;
            agree += (formula_eval(&m, &[], f).unwrap() == formula_eval(&dm, &[], &formula_dual(f)).unwrap()) as usize;
        }
        // predicates with a parameter
        for a in 0..m.cat.morphism_count() {
            let arg = [m.arrow(a)];
            for p in [mono_f(), epi_f()] {
                total += 1;
                let primal = eval_predicate(&m, &p, &arg).unwrap();
                agree += (primal == eval_predicate(&dm, &p.dual(), &arg).unwrap()) as usize;
            }
        }
    }
    outcome(agree == total, format!("{agree}/{total} evaluations agree across {} models", models().len()))
}

fn end_to_end() -> Outcome {
    let reg = builtin_registry();
    let k = Kernel::new(&reg);
    let (mut proved, mut true_everywhere) = (0, 0);
    let mut failures = Vec::new();
    for (name, f, pf) in proved_corpus() {
        if !k.check_proof(&f, &pf) {
            failures.push(format!("{name} not proved"));
            continue;
        }
        proved += 1;
        let mut holds = true;
        for (model, m) in models() {
            if formula_eval(&m, &[], &f) != Ok(true) {
                failures.push(format!("{name} fails in {model}"));
                holds = false;
            }
        }
        true_everywhere += holds as usize;
    }
    // random statements closed by short proofs
    let mut r = rng(0x5eed_0006);
    let mut random_proved = 0;
    for _ in 0..RANDOM_STATEMENTS {
        let s = random_sequent(&mut r);
        let f = s.to_formula();
        let mut steps = vec![Tactic::Intro; s.context.len()];
        steps.push(Tactic::IntroImply);
        let closers = [Tactic::Comauto, Tactic::EqRefl, Tactic::TrueIntro, Tactic::Assumption(0)];
        for closer in closers {
            let mut pf = steps.clone();
            pf.push(closer);
            let pf = Proof(pf);
            if !k.check_proof(&f, &pf) {
                continue;
            }
            random_proved += 1;
            for (model, m) in models() {
                if formula_eval(&m, &[], &f) != Ok(true) {
                    failures.push(format!("{f:?} by {pf:?} fails in {model}"));
                }
            }
            break;
        }
    }
    outcome(
        failures.is_empty(),
        format!("{proved} corpus statements proved and {true_everywhere} true in all models; {random_proved} random statements proved; failures {failures:?}"),
    )
}

fn involutions() -> Outcome {
    let mut r = rng(0x5eed_0005);
    let mut bad = 0;
    for _ in 0..INVOLUTION_SAMPLES {
        let q = random_quiver(&mut r, 6, 10);
        bad += (q.dual().dual() != q) as usize;
    }
    for _ in 0..INVOLUTION_SAMPLES {
        let ctx = vec![random_dag(&mut r, 3, 3)];
        let f = random_formula(&mut r, &ctx, 3, 2);
        bad += (formula_dual(&formula_dual(&f)) != f) as usize;
    }
    for _ in 0..INVOLUTION_SAMPLES {
        let s = random_sequent(&mut r);
        bad += (dual_sequent(&dual_sequent(&s)) != s) as usize;
    }
    outcome(bad == 0, format!("{} samples, {bad} counterexamples", 3 * INVOLUTION_SAMPLES))
}

fn example_mono() -> Outcome {
    let mut mismatches = 0;
    let (mut monic_seen, mut non_monic_false) = (false, false);
    for (_, m) in models() {
        for a in 0..m.cat.morphism_count() {
            let verdict = eval_predicate(&m, &mono_f(), &[m.arrow(a)]).unwrap();
            let oracle = is_monic(&m.cat, a);
            mismatches += (verdict != oracle) as usize;
            monic_seen |= verdict && oracle;
            non_monic_false |= !verdict && !oracle;
        }
    }
    outcome(
        mismatches == 0 && monic_seen && non_monic_false,
        format!("mismatches with table search: {mismatches}; non-monic rejected: {non_monic_false}; monic accepted: {monic_seen}"),
    )
}

fn main() {
    type Check = Box<dyn FnOnce() -> Outcome>;
    let checks: Vec<(&str, Check)> = vec![
        ("five-lemma commerge", Box::new(|| timed(Some(FIVE_LEMMA_LIMIT), five_lemma))),
        ("comcut example", Box::new(|| timed(Some(FIG3_LIMIT), cut_example))),
        ("commerge soundness sweep", Box::new(|| timed(Some(SOUNDNESS_SWEEP_LIMIT), soundness_sweep))),
        ("comcut fullness sweep", Box::new(|| timed(Some(COMCUT_SWEEP_LIMIT), comcut_sweep))),
        ("mono/epi corpus", Box::new(|| timed(Some(MONO_EPI_LIMIT), mono_epi))),
        ("proof-level duality", Box::new(|| timed(None, proof_duality))),
        ("semantic duality", Box::new(|| timed(None, semantic_duality))),
        ("end-to-end soundness", Box::new(|| timed(Some(BATTERY_LIMIT), end_to_end))),
        ("structural involutions", Box::new(|| timed(None, involutions))),
        ("mono predicate semantics", Box::new(|| timed(None, example_mono))),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let out = check();
        failed += !out.ok as usize;
        println!("{} {name}: {}", if out.ok { "PASS" } else { "FAIL" }, out.detail);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
