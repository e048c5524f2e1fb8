//! Acceptance criteria. Runs as a plain binary and prints one line per
//! criterion; exits non-zero if any criterion fails.
//!
//! All comparisons are exact (set equality, verdict equality, exact rational
//! LP), so there are no numeric tolerances.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use beliefmerge::distance::{DistanceKind, DistanceVector, HammingTable};
use beliefmerge::formula::{parse_formula, Formula, Model, ModelSet, Profile, Universe};
use beliefmerge::geometry::{algorithm1, critical_weight_set, Point2};
use beliefmerge::instancegen::{model_at, random_suite, realize, replicated_blocks, VectorSpec};
use beliefmerge::lp::{feasible, minimality_system};
use beliefmerge::maxcons::maxcons_disjunction;
use beliefmerge::merge::{
    common_witness, excluding_subset, merge_fixed, merge_scheme, multi_source_merge, undominated, Instance,
    SourceProfile,
};
use beliefmerge::postulates::{
    check_arbitration_duplicate, check_disjunctive, check_majority, check_postulate, closest_pairs_merge,
    disjunctive_expert_weights, ic4_counterexample, ic8_counterexample, run_suite, standard_suite, Aux, Check,
    OperatorConfig, Postulate, Status,
};
use beliefmerge::weights::{WeightScheme, WeightVector};
use num_rational::BigRational;

type Outcome = Result<String, String>;

const SEED: u64 = 20_240_601;
const H: DistanceKind = DistanceKind::Hamming;
const D: DistanceKind = DistanceKind::Drastic;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn at(inst: &Instance, v: &[u64]) -> Result<Model, String> {
    model_at(inst, v)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("no model realizes {v:?}"))
}

fn vectors(inst: &Instance, kind: &DistanceKind) -> Vec<DistanceVector> {
    inst.points(kind).unwrap().into_iter().map(|(_, d)| d).collect()
}

fn wv(v: &[u64]) -> WeightVector {
    WeightVector::from_integers(v).unwrap()
}

fn criterion_1() -> Outcome {
    let inst = realize(&VectorSpec::parse("3,0;1,1;0,3").unwrap(), None).unwrap();
    let b = at(&inst, &[1, 1])?;
    let c = at(&inst, &[0, 3])?;
    let equal = merge_scheme(&inst, &WeightScheme::Equal, &H).unwrap().models;
    ensure!(equal == ModelSet::from([b]), "equal merge has {} models", equal.len());
    let skewed = merge_fixed(&inst, &wv(&[2, 1]), &H).unwrap();
    ensure!(skewed == ModelSet::from([b, c]), "[2,1] merge has {} models", skewed.len());
    Ok("equal -> {B}, [2,1] -> {B, C}".into())
}

fn criterion_2() -> Outcome {
    let inst = realize(&VectorSpec::parse("3,0;2,2;0,3").unwrap(), None).unwrap();
    let expected = ModelSet::from([at(&inst, &[3, 0])?, at(&inst, &[0, 3])?]);
    let r = merge_scheme(&inst, &WeightScheme::AllPositive, &H).unwrap();
    ensure!(r.models == expected, "AllPositive merge selected {} models", r.models.len());
    let sys = minimality_system(
        &DistanceVector::new(vec![2, 2]),
        &[DistanceVector::new(vec![3, 0]), DistanceVector::new(vec![0, 3])],
    )
    .unwrap();
    ensure!(!feasible(&sys).unwrap().is_feasible(), "system for [2,2] is feasible");
    Ok("[2,2] excluded, system infeasible".into())
}

fn binary_table() -> DistanceKind {
    DistanceKind::Table(HammingTable::binary())
}

fn criteria_3_and_4() -> (Outcome, Outcome) {
    let suite = random_suite(500, SEED, 1..=4, 1..=4, &half()).unwrap();
    let mut mismatch3 = 0;
    let mut mismatch4 = 0;
    for inst in &suite {
        let all = merge_scheme(inst, &WeightScheme::AllPositive, &D).unwrap().models;
        if all != maxcons_disjunction(inst).unwrap() {
            mismatch3 += 1;
        }
        if all != undominated(inst, &D).unwrap() {
            mismatch4 += 1;
        }
        let bin = binary_table();
        if merge_scheme(inst, &WeightScheme::AllPositive, &bin).unwrap().models != undominated(inst, &bin).unwrap() {
            mismatch4 += 1;
        }
    }
    let c3 = if mismatch3 == 0 { Ok("500 instances, 0 mismatches".into()) } else { Err(format!("{mismatch3} mismatches")) };
    let c4 = if mismatch4 == 0 { Ok("500 instances x 2 distances, 0 mismatches".into()) } else { Err(format!("{mismatch4} mismatches")) };
    (c3, c4)
}

fn criterion_5() -> Outcome {
    let one = replicated_blocks(1).unwrap();
    let r = merge_scheme(&one, &WeightScheme::AllPositive, &H).unwrap();
    ensure!(r.models.len() == 3, "k=1 merge has {} models", r.models.len());
    let all = vectors(&one, &H);
    let selected: Vec<DistanceVector> = one
        .points(&H)
        .unwrap()
        .into_iter()
        .filter(|(m, _)| r.models.contains(m))
        .map(|(_, d)| d)
        .collect();
    ensure!(common_witness(&selected, &all).unwrap().is_none(), "one vector selects all three models");

    let two = replicated_blocks(2).unwrap();
    let all = vectors(&two, &H);
    let corners: Vec<DistanceVector> = [[3, 0, 3, 0], [3, 0, 0, 3], [0, 3, 3, 0], [0, 3, 0, 3]]
        .iter()
        .map(|v| DistanceVector::new(v.to_vec()))
        .collect();
    let selected: BTreeSet<DistanceVector> = two
        .points(&H)
        .unwrap()
        .into_iter()
        .filter(|(m, _)| merge_scheme(&two, &WeightScheme::AllPositive, &H).unwrap().models.contains(m))
        .map(|(_, d)| d)
        .collect();
    for c in &corners {
        ensure!(selected.contains(c), "corner {c} not selected");
    }
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let pair = [corners[i].clone(), corners[j].clone()];
            ensure!(
                common_witness(&pair, &all).unwrap().is_none(),
                "{} and {} share a witness",
                corners[i],
                corners[j]
            );
        }
    }
    Ok("k=1: 3 models, no single vector; k=2: 4 corners pairwise infeasible".into())
}

fn criterion_6() -> Outcome {
    let suite = random_suite(300, SEED ^ 6, 1..=4, 1..=3, &half()).unwrap();
    let mut checked = 0;
    for (k, inst) in suite.iter().enumerate() {
        let points = inst.points(&H).unwrap();
        let all: Vec<DistanceVector> = points.iter().map(|(_, d)| d.clone()).collect();
        for (model, d) in &points {
            let full = !feasible(&minimality_system(d, &all).unwrap()).unwrap().is_feasible();
            let sub = excluding_subset(model, inst, &H).unwrap();
            ensure!(full == sub.is_some(), "instance {k}: exclusion disagrees with the full system");
            if let Some(sub) = sub {
                checked += 1;
                ensure!(sub.len() <= inst.m(), "instance {k}: {} certifying models for m={}", sub.len(), inst.m());
                let vs: Vec<DistanceVector> =
                    sub.iter().map(|j| points.iter().find(|(p, _)| p == j).unwrap().1.clone()).collect();
                ensure!(
                    !feasible(&minimality_system(d, &vs).unwrap()).unwrap().is_feasible(),
                    "instance {k}: restricted system is feasible"
                );
            }
        }
    }
    Ok(format!("300 instances, {checked} excluded models certified"))
}

fn criterion_7() -> Outcome {
    let suite = random_suite(300, SEED ^ 7, 1..=6, 2..=2, &half()).unwrap();
    for (k, inst) in suite.iter().enumerate() {
        let expected = merge_scheme(inst, &WeightScheme::AllPositive, &H).unwrap().models;
        let a1 = algorithm1(inst, &H).unwrap();
        ensure!(a1 == expected, "instance {k}: algorithm1 differs");
        let pts: BTreeSet<Point2> = vectors(inst, &H).iter().map(|d| Point2::from_vector(d).unwrap()).collect();
        let crit = WeightScheme::explicit(critical_weight_set(&pts)).unwrap();
        let via_crit = merge_scheme(inst, &crit, &H).unwrap().models;
        ensure!(via_crit == expected, "instance {k}: critical weight set differs");
    }
    Ok("300 instances, 0 mismatches".into())
}

fn cfg(kind: DistanceKind, s: &str) -> OperatorConfig {
    OperatorConfig::new(kind, WeightScheme::parse(s).unwrap())
}

fn criterion_8() -> Outcome {
    let kinds = [H, D, DistanceKind::Table(HammingTable::coarse_example()), binary_table()];
    let schemes = ["equal", "expert", "all"];
    for kind in &kinds {
        for s in schemes {
            let c = cfg(kind.clone(), s);
            for p in [Postulate::Ic0, Postulate::Ic1, Postulate::Ic2, Postulate::Ic3, Postulate::Ic7] {
                let r = run_suite(Check::Postulate(p), &c, 100, SEED).unwrap();
                ensure!(r.failed == 0, "{p:?} fails under {s}/{kind}: {:?}", r.first_failure);
            }
        }
    }
    for kind in [H, D] {
        for s in schemes {
            let c = cfg(kind.clone(), s);
            ensure!(c.scheme.is_permutation_closed(), "{s} is not permutation closed");
            let r = run_suite(Check::Postulate(Postulate::Ic4), &c, 100, SEED).unwrap();
            ensure!(r.failed == 0, "IC4 fails under {s}/{kind}: {:?}", r.first_failure);
        }
    }

    let (inst, c) = ic4_counterexample().unwrap();
    let v = check_postulate(Postulate::Ic4, &c, &inst, &Aux::None).unwrap();
    ensure!(v.status == Status::Fail, "IC4 counterexample verdict {:?}", v.status);
    let f1 = inst.profile().get(0);
    let f2 = inst.profile().get(1);
    let merged = c.merge(&inst).unwrap().models;
    ensure!(
        merged.iter().any(|m| f1.evaluate(m)) && !merged.iter().any(|m| f2.evaluate(m)),
        "IC4 counterexample merge is not consistent with F1 only"
    );

    let (inst, extra, k) = ic8_counterexample().unwrap();
    let v = check_postulate(Postulate::Ic8, &cfg(H, "all"), &inst, &Aux::Constraints(extra.clone())).unwrap();
    ensure!(v.status == Status::Fail, "IC8 verdict {:?}", v.status);
    let narrowed = inst.with_constraints(inst.constraints().clone().and(extra)).unwrap();
    ensure!(merge_fixed(&narrowed, &wv(&[2, 1]), &H).unwrap().contains(&k), "K not selected under [2,1]");
    let u = inst.universe();
    ensure!(
        v.witness.map(|w| w.models) == Some(vec![k.display(u).to_string()]),
        "IC8 witness is not K"
    );

    let ua = Universe::new(&["a"]).unwrap();
    let a = parse_formula("a", &ua).unwrap();
    let na = parse_formula("!a", &ua).unwrap();
    for reps in 1..=5 {
        let v = check_majority(&ua, &cfg(H, "all"), &a, &na, reps).unwrap();
        ensure!(v.status == Status::Fail, "majority verdict {:?} for reps={reps}", v.status);
    }

    for inst in standard_suite(200, SEED).unwrap() {
        ensure!(check_arbitration_duplicate(&cfg(H, "all"), &inst).unwrap().passed(), "arbitration fails");
    }
    Ok("IC0-IC3, IC7 pass; IC4 pass and counterexample fails; IC8 and majority fail; arbitration passes".into())
}

fn formula_pairs(n: usize) -> (Universe, Vec<Formula>) {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let u = Universe::new(&names).unwrap();
    let models: Vec<Model> = u.all_models().collect();
    let formulas = (1u32..(1 << models.len()))
        .map(|mask| {
            let chosen: Vec<&Model> = models.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| m).collect();
            Formula::from_models(chosen)
        })
        .collect();
    (u, formulas)
}

fn criterion_9() -> Outcome {
    let mut pairs = 0;
    for n in [2, 3] {
        let (u, formulas) = formula_pairs(n);
        let c = cfg(H, &format!("expert:{}", n + 1));
        for f1 in &formulas {
            for f2 in &formulas {
                let inst =
                    Instance::new(u.clone(), Formula::Const(true), Profile::new(vec![f1.clone(), f2.clone()]).unwrap())
                        .unwrap();
                let got = c.merge(&inst).unwrap().models;
                let want = closest_pairs_merge(&u, f1, f2).unwrap();
                ensure!(got == want, "closest pairs differ for n={n}: {} vs {}", f1.display(&u), f2.display(&u));
                pairs += 1;
            }
        }
    }
    let mut checked = 0;
    for kind in [H, D] {
        for inst in standard_suite(300, SEED ^ 9).unwrap() {
            for a in disjunctive_expert_weights(&kind, inst.n(), inst.m()) {
                let c = OperatorConfig::new(kind.clone(), WeightScheme::Expert(Some(a)));
                let v = check_disjunctive(&c, &inst).unwrap();
                ensure!(v.passed(), "Expert({a}) under {kind} is not disjunctive: {:?}", v.witness);
                checked += 1;
            }
        }
    }
    Ok(format!("{pairs} formula pairs match closest pairs; {checked} expert merges disjunctive"))
}

fn criterion_10() -> Outcome {
    let u = Universe::new(&["x", "y", "z"]).unwrap();
    let src = |fs: &[&str]| fs.iter().map(|f| parse_formula(f, &u).unwrap()).collect::<Vec<_>>();
    let sp = SourceProfile::new(vec![src(&["x", "y", "z"]), src(&["!x", "!y"]), src(&["!x", "!z"])]).unwrap();
    let r = multi_source_merge(&u, &Formula::Const(true), &sp, &WeightScheme::AllPositive, &H).unwrap();
    let lone_x = Model::from_literals(&u, &["x", "!y", "!z"]).unwrap();
    ensure!(!r.models.contains(&lone_x), "{{x, !y, !z}} selected");
    let flat = Instance::new(u.clone(), Formula::Const(true), Profile::new(sp.flatten()).unwrap()).unwrap();
    ensure!(maxcons_disjunction(&flat).unwrap().contains(&lone_x), "{{x, !y, !z}} missing from maxcons");

    let u2 = Universe::new(&["x", "y"]).unwrap();
    let src2 = |fs: &[&str]| fs.iter().map(|f| parse_formula(f, &u2).unwrap()).collect::<Vec<_>>();
    let sp = SourceProfile::new(vec![src2(&["x", "y"]), src2(&["!x", "!y"])]).unwrap();
    let r = multi_source_merge(&u2, &Formula::Const(true), &sp, &WeightScheme::Equal, &H).unwrap();
    ensure!(r.models.len() == 4, "equal merge has {} models", r.models.len());
    Ok("{x, !y, !z} excluded but in maxcons; equal merge has 4 models".into())
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(u32, Outcome)> = vec![(1, guarded(criterion_1)), (2, guarded(criterion_2))];
    match catch_unwind(criteria_3_and_4) {
        Ok((c3, c4)) => results.extend([(3, c3), (4, c4)]),
        Err(_) => results.extend([(3, Err("panicked".into())), (4, Err("panicked".into()))]),
    }
    results.push((5, guarded(criterion_5)));
    results.push((6, guarded(criterion_6)));
    results.push((7, guarded(criterion_7)));
    results.push((8, guarded(criterion_8)));
    results.push((9, guarded(criterion_9)));
    results.push((10, guarded(criterion_10)));

    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
