//! One line per acceptance criterion. Run with
//! `cargo test -p nkconf --test acceptance`; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{data, random_perm, random_points};
use nkconf::{
    are_isomorphic, canonical_code, chirotope_from_points, classify_orientability, dualize, enumerate_configurations,
    enumerate_naive, euler_counts, feasibility_gate, generalize, is_chirotope, orientability, pappus, pappus_points,
    reorient, CensusEntry, Configuration, EnumerateOptions, Outcome, Rank3Matroid, SolverOptions, Verdict,
    WiringDiagram,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn census(n: usize, k: usize) -> Vec<CensusEntry> {
    enumerate_configurations(n, k, &EnumerateOptions::default()).expect("enumerable")
}

fn gate_reproduction() -> Check {
    let start = Instant::now();
    let v = |n, k| feasibility_gate(n, k).map(|g| g.verdict).map_err(|e| e.to_string());
    ensure(v(15, 4)? == Verdict::Impossible, || "gate(15,4) is not Impossible".into())?;
    ensure(v(16, 4)? == Verdict::Unresolved, || "gate(16,4) is not Unresolved".into())?;
    for k in 3..=12i64 {
        let last_bad = k * k + k - 5;
        ensure(v(last_bad, k)? == Verdict::Impossible, || format!("gate({last_bad},{k}) should be Impossible"))?;
        ensure(v(last_bad + 1, k)? == Verdict::Unresolved, || {
            format!("gate({},{k}) should be Unresolved", last_bad + 1)
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:.2?}"))?;
    Ok(format!("boundary verified for k = 3..12 in {t:.2?}"))
}

fn census_reproduction(c16: &[CensusEntry], t: Duration) -> Check {
    ensure(c16.len() == 19, || format!("found {} classes", c16.len()))?;
    ensure(t < Duration::from_secs(30 * 60), || format!("took {t:.2?}"))?;
    Ok(format!("19 classes of 16_4 in {t:.2?}"))
}

fn orientability_reproduction(c16: &[CensusEntry]) -> Check {
    let (classified, summary) = classify_orientability(16, 4, SolverOptions::default(), &EnumerateOptions::default())
        .map_err(|e| e.to_string())?;
    let codes = |c: &[CensusEntry]| c.iter().map(|e| e.code.clone()).collect::<Vec<_>>();
    ensure(codes(&classified) == codes(c16), || "classification census differs from enumeration".into())?;
    ensure(summary.classes == 19 && summary.non_orientable == 19, || format!("{summary:?}"))?;
    ensure(summary.orientable == 0 && summary.budget_exceeded == 0, || format!("{summary:?}"))?;
    let slowest = classified.iter().map(|e| e.orientability.as_ref().unwrap().stats.elapsed).max().unwrap();
    ensure(slowest < Duration::from_secs(60), || format!("slowest class took {slowest:.2?}"))?;
    Ok(format!("19/19 NonOrientable, 0 BudgetExceeded, slowest class {slowest:.2?}"))
}

fn gate_consistency() -> Check {
    let (classified, summary) = classify_orientability(15, 4, SolverOptions::default(), &EnumerateOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(summary.gate == Some(Verdict::Impossible), || "gate(15,4) not Impossible".into())?;
    ensure(!classified.is_empty() && summary.non_orientable == classified.len(), || format!("{summary:?}"))?;
    Ok(format!("{} classes of 15_4, all NonOrientable", classified.len()))
}

fn oracle_equivalence() -> Check {
    let mut parts = Vec::new();
    for (n, k) in [(7, 3), (8, 3), (9, 3), (10, 3), (13, 4)] {
        let fast: BTreeSet<_> = census(n, k).into_iter().map(|e| e.code).collect();
        let slow: BTreeSet<_> = enumerate_naive(n, k).map_err(|e| e.to_string())?.iter().map(canonical_code).collect();
        ensure(fast == slow, || format!("{n}_{k}: orderly {} classes, naive {}", fast.len(), slow.len()))?;
        parts.push(format!("{n}_{k}:{}", fast.len()));
    }
    Ok(format!("identical class sets ({})", parts.join(" ")))
}

fn positive_controls() -> Check {
    for n in 5..=8 {
        let r = orientability(&Rank3Matroid::free(n), SolverOptions::default());
        ensure(matches!(r.outcome, Outcome::Orientable(_)), || {
            format!("free matroid on {n} points: {}", r.outcome.label())
        })?;
    }
    let m = generalize(&pappus());
    let chi = chirotope_from_points(&pappus_points()).map_err(|e| e.to_string())?;
    ensure(is_chirotope(&chi, &m).unwrap().valid, || "Pappus coordinates are not a witness".into())?;
    let r = orientability(&m, SolverOptions::default());
    ensure(matches!(r.outcome, Outcome::Orientable(_)), || format!("Pappus: {}", r.outcome.label()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..200 {
        let count = rng.gen_range(3..=8);
        let spread = rng.gen_range(1..=6);
        let chi = chirotope_from_points(&random_points(count, spread, &mut rng)).map_err(|e| e.to_string())?;
        if chi.is_identically_zero() {
            continue;
        }
        let m = chi.underlying_matroid().map_err(|e| e.to_string())?;
        ensure(is_chirotope(&chi, &m).unwrap().valid, || format!("random point set {round} rejected"))?;
    }
    Ok("free 5..8 and Pappus orientable; 200 random point sets accepted".into())
}

fn counting_consistency() -> Check {
    let mut checked = Vec::new();
    for name in ["pappus", "desargues"] {
        let c = Configuration::parse(&data(&format!("{name}_polar.json"))).map_err(|e| e.to_string())?;
        let w = WiringDiagram::parse(&data(&format!("{name}_polar.wiring"))).map_err(|e| e.to_string())?;
        ensure(w.validate().valid, || format!("{name}: invalid wiring"))?;
        ensure(w.realizes(&c).map_err(|e| e.to_string())?.is_some(), || format!("{name}: does not realize"))?;
        let got = w.cell_counts().map_err(|e| e.to_string())?;
        let want = euler_counts(c.n() as i64, c.k() as i64).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{name}: {got:?} != {want:?}"))?;
        ensure(got.f0 - got.f1 + got.f2 == 2 && 3 * got.f2 <= 2 * got.f1, || format!("{name}: {got:?}"))?;
        checked.push(format!("{name} {}_{} ({}, {}, {})", c.n(), c.k(), got.f0, got.f1, got.f2));
    }
    Ok(checked.join("; "))
}

fn invariant_suites(c16: &[CensusEntry]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut corpus: Vec<CensusEntry> = Vec::new();
    for n in 7..=10 {
        corpus.extend(census(n, 3));
    }
    for n in 13..=15 {
        corpus.extend(census(n, 4));
    }
    corpus.extend(c16.iter().cloned());

    for e in &corpus {
        let n = e.configuration.n();
        for _ in 0..100 {
            let moved = e.configuration.relabel(&random_perm(n, &mut rng)).unwrap();
            ensure(canonical_code(&moved) == e.code, || format!("code changed under relabeling of {}", e.code))?;
        }
        let back = dualize(&dualize(&e.configuration));
        ensure(are_isomorphic(&e.configuration, &back).is_some(), || format!("dualize twice changed {}", e.code))?;
    }

    let mut witnesses = Vec::new();
    for n in 9..=10 {
        let (entries, _) = classify_orientability(n, 3, SolverOptions::default(), &EnumerateOptions::default())
            .map_err(|e| e.to_string())?;
        for e in entries {
            if let Some(Outcome::Orientable(chi)) = e.orientability.map(|r| r.outcome) {
                witnesses.push((chi, generalize(&e.configuration)));
            }
        }
    }
    for (chi, m) in &witnesses {
        for _ in 0..20 {
            let flips: Vec<usize> = (0..chi.n()).filter(|_| rng.gen_bool(0.5)).collect();
            ensure(is_chirotope(&reorient(chi, &flips), m).unwrap().valid, || "reorientation broke a witness".into())?;
        }
    }

    for (n, k) in [(12, 3), (15, 4)] {
        let runs: Vec<Vec<CensusEntry>> = [1, 2, 8]
            .into_iter()
            .map(|w| {
                enumerate_configurations(n, k, &EnumerateOptions { workers: Some(w), ..Default::default() }).unwrap()
            })
            .collect();
        ensure(runs[0] == runs[1] && runs[1] == runs[2], || format!("{n}_{k} census depends on worker count"))?;
    }
    Ok(format!(
        "{} census entries x 100 relabelings, dual involution, {} witnesses reoriented, workers 1/2/8 agree",
        corpus.len(),
        witnesses.len()
    ))
}

fn main() {
    let start = Instant::now();
    let c16 = census(16, 4);
    let t16 = start.elapsed();

    let criteria: Vec<Criterion> = vec![
        ("gate reproduction", Box::new(gate_reproduction)),
        ("census reproduction", Box::new(|| census_reproduction(&c16, t16))),
        ("orientability reproduction", Box::new(|| orientability_reproduction(&c16))),
        ("gate consistency", Box::new(gate_consistency)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("positive controls", Box::new(positive_controls)),
        ("geometry/counting consistency", Box::new(counting_consistency)),
        ("invariant suites", Box::new(|| invariant_suites(&c16))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS - {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL - {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.2?}", 8 - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
