//! Acceptance checks. Each criterion runs in isolation and prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use k3fib::algebra::{Field, FieldKind, Place, RatFunc, F9, P9};
use k3fib::corpus::{builtin_corpus, verify_all, verify_step, CorpusSummary, FibrationRecord};
use k3fib::lattice::{
    a2_complement, a2sq_complement, compare_with_table, enumerate_fibration_lattices, gram_det, niemeier_roots,
    RootLabel, RootSystem, COMPLEMENT_TABLE,
};
use k3fib::model::{
    add_points, apply_map, discriminant, negate, parse_point, validate_k3, CurveK, K3Verdict, ModelMap, SurfacePoint,
    WeierstrassModel,
};
use k3fib::mordell::{find_two_torsion, height, search_polynomial_sections, torsion_order, HeightContext};
use k3fib::tate::{classify_all, quasi_mu, KodairaType};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn record(recs: &[FibrationRecord], id: u32) -> &FibrationRecord {
    recs.iter().find(|r| r.id == id).expect("record present")
}

fn sys(s: &str) -> RootSystem {
    RootSystem::parse(s).unwrap()
}

// ---- 1 ----

fn criterion_1() -> Outcome {
    let mut labels: Vec<RootLabel> = (1..=24).map(RootLabel::A).collect();
    labels.extend((4..=24).map(RootLabel::D));
    labels.extend([6, 7, 8].map(RootLabel::E));
    for l in &labels {
        // |det| is n+1, 4, 3, 2, 1; the sign is (−1)^rank for the negative definite form
        let magnitude = match l {
            RootLabel::A(n) => *n as i64 + 1,
            RootLabel::D(_) => 4,
            RootLabel::E(6) => 3,
            RootLabel::E(7) => 2,
            RootLabel::E(_) => 1,
        };
        let sign = if l.rank() % 2 == 0 { 1 } else { -1 };
        let det = gram_det(*l).map_err(|e| e.to_string())?;
        ensure(det == sign * magnitude, format!("det {l} = {det}, expected {}", sign * magnitude))?;
        ensure(det == l.det_formula(), format!("det_formula disagrees for {l}"))?;
    }
    Ok(format!("{} root lattices of rank <= 24", labels.len()))
}

// ---- 2 ----

/// The printed complement table, row by row, as functions of the label.
fn printed_complements(l: RootLabel) -> (Option<RootSystem>, Option<RootSystem>) {
    let empty = Some(RootSystem::empty());
    let one = |l: RootLabel| Some(RootSystem::new(vec![l]));
    match l {
        RootLabel::A(1) => (None, None),
        RootLabel::A(2) | RootLabel::A(3) => (empty, None),
        RootLabel::A(4) => (one(RootLabel::A(1)), None),
        RootLabel::A(5) | RootLabel::A(6) => (one(RootLabel::A(l.rank() - 3)), empty),
        RootLabel::A(n) => (one(RootLabel::A(n - 3)), one(RootLabel::A(n - 6))),
        RootLabel::D(4) => (empty, None),
        RootLabel::D(5) => (Some(sys("A1^2")), None),
        RootLabel::D(6) => (Some(sys("A3")), empty),
        RootLabel::D(7) => (one(RootLabel::D(4)), empty),
        RootLabel::D(8) => (one(RootLabel::D(5)), Some(sys("A1^2"))),
        RootLabel::D(9) => (one(RootLabel::D(6)), Some(sys("A3"))),
        RootLabel::D(n) => (one(RootLabel::D(n - 3)), one(RootLabel::D(n - 6))),
        RootLabel::E(6) => (Some(sys("A2^2")), Some(sys("A2"))),
        RootLabel::E(7) => (Some(sys("A5")), Some(sys("A2"))),
        RootLabel::E(_) => (Some(sys("E6")), Some(sys("A2^2"))),
    }
}

fn criterion_2() -> Outcome {
    ensure(COMPLEMENT_TABLE.len() == 10, "complement table must have 10 rows")?;
    let mut labels: Vec<RootLabel> = (2..=24).map(RootLabel::A).collect();
    labels.extend((4..=24).map(RootLabel::D));
    labels.extend([6, 7, 8].map(RootLabel::E));
    for l in labels {
        let (a2, a2sq) = printed_complements(l);
        ensure(a2_complement(l) == a2, format!("A2 complement in {l}: {:?}", a2_complement(l)))?;
        ensure(a2sq_complement(l) == a2sq, format!("A2^2 complement in {l}: {:?}", a2sq_complement(l)))?;
    }
    let niemeier = niemeier_roots();
    ensure(niemeier.len() == 23, format!("{} Niemeier systems", niemeier.len()))?;
    for n in &niemeier {
        ensure(n.rank() == 24, format!("{n} has rank {}", n.rank()))?;
    }
    let rows = enumerate_fibration_lattices();
    ensure(rows.len() == 52, format!("enumeration gives {} rows", rows.len()))?;
    for r in &rows {
        ensure(r.roots.rank() + r.mw_rank == 20, format!("row {:?} violates rank + MW rank = 20", r.code))?;
    }
    let cmp = compare_with_table(&rows);
    ensure(cmp.is_consistent(), format!("missing {:?}, extra {:?}", cmp.missing, cmp.extra))?;
    ensure(cmp.matched + cmp.errata.len() == 52, "rows unaccounted for")?;
    let errata: Vec<String> =
        cmp.errata.iter().map(|e| format!("{} -> {}", e.printed.roots, e.computed.roots)).collect();
    Ok(format!("23 Niemeier systems, 52 rows ({} exact, errata: {})", cmp.matched, errata.join(", ")))
}

// ---- 3 ----

const MUST_MATCH: &[u32] = &[
    1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 29, 30, 31, 32, 33,
    34, 35, 36, 37, 38, 39, 40, 42, 43, 44, 51,
];

fn criterion_3(summary: &CorpusSummary, elapsed: Duration) -> Outcome {
    let mut problems = Vec::new();
    for id in MUST_MATCH {
        let rep = summary.reports.iter().find(|r| r.id == *id).expect("record");
        if !rep.fibers_match {
            problems.push(format!(
                "record {id}: expected {}, computed {}",
                rep.expected,
                rep.computed.as_deref().unwrap_or("?")
            ));
        }
    }
    for rep in summary.reports.iter().filter(|r| r.verdict == "elliptic") {
        if rep.sum_v_delta != Some(24) {
            problems.push(format!("record {}: sum v(Delta) = {:?}", rep.id, rep.sum_v_delta));
        }
    }
    if summary.fibers_matched < 45 {
        problems.push(format!("only {}/52 match", summary.fibers_matched));
    }
    for rep in summary.reports.iter().filter(|r| !r.fibers_match) {
        let logged = rep.errata.iter().any(|e| e.operation == "classify_all" && !e.computed.is_empty());
        if !logged {
            problems.push(format!("record {}: mismatch without an erratum", rep.id));
        }
    }
    if elapsed >= Duration::from_secs(60) {
        problems.push(format!("corpus took {elapsed:?}"));
    }
    if problems.is_empty() {
        Ok(format!("{}/52 match, corpus in {:.2}s", summary.fibers_matched, elapsed.as_secs_f64()))
    } else {
        Err(problems.join("; "))
    }
}

// ---- 4 ----

fn criterion_4(recs: &[FibrationRecord]) -> Outcome {
    for id in [38, 41, 48, 49, 50] {
        let m = &record(recs, id).model;
        ensure(discriminant(m).is_zero(), format!("record {id}: Delta != 0"))?;
        ensure(validate_k3(m) == K3Verdict::QuasiElliptic, format!("record {id}: {:?}", validate_k3(m)))?;
    }
    let kinds = |id: u32| -> Result<Vec<KodairaType>, String> {
        let cfg = classify_all(&record(recs, id).model).map_err(|e| e.to_string())?;
        let mut v: Vec<KodairaType> = cfg.fibers.iter().map(|f| f.kodaira).filter(|k| *k != KodairaType::II).collect();
        v.sort();
        Ok(v)
    };
    let k38 = kinds(38)?;
    ensure(k38 == vec![KodairaType::IVStar, KodairaType::IVStar, KodairaType::IIStar], format!("record 38: {k38:?}"))?;
    let k41 = kinds(41)?;
    ensure(k41 == vec![KodairaType::IV; 10], format!("record 41: {k41:?}"))?;
    Ok("records 38, 41, 48, 49, 50 quasi-elliptic; 38 = IV* IV* II*, 41 = 10 x IV".into())
}

// ---- 5 ----

fn order(m: &WeierstrassModel, p: &SurfacePoint) -> Result<Option<u32>, String> {
    let ctx = HeightContext::new(m.clone()).map_err(|e| e.to_string())?;
    torsion_order(&ctx, p, 12).map_err(|e| e.to_string())
}

fn criterion_5(recs: &[FibrationRecord]) -> Outcome {
    let r1 = record(recs, 1);
    let corrected = &r1.corrected_sections.first().ok_or("record 1 has no corrected section")?.1.point;
    ensure(order(&r1.model, corrected)? == Some(4), "record 1: corrected point is not of order 4")?;
    let p = parse_point("(0,t^2)").unwrap();
    ensure(order(&record(recs, 19).model, &p)? == Some(5), "record 19: (0,t^2) is not of order 5")?;
    let p = parse_point("(0,t^4)").unwrap();
    ensure(order(&record(recs, 12).model, &p)? == Some(3), "record 12: (0,t^4) is not of order 3")?;
    for id in [2, 6, 7, 21, 23, 27, 29] {
        let m = &record(recs, id).model;
        let two = find_two_torsion(m);
        ensure(two.len() == 3, format!("record {id}: {} points of order 2", two.len()))?;
        for t in &two {
            ensure(order(m, t)? == Some(2), format!("record {id}: {t} is not of order 2"))?;
        }
    }
    let mut checked = 0;
    for r in recs.iter().filter(|r| validate_k3(&r.model) == K3Verdict::QuasiElliptic) {
        let mut pts: Vec<SurfacePoint> = r.effective_sections().into_iter().map(|s| s.point).collect();
        pts.extend(search_polynomial_sections(&r.model, 4));
        for p in &pts {
            ensure(order(&r.model, p)? == Some(3), format!("record {}: {p} is not of order 3", r.id))?;
            checked += 1;
        }
    }
    Ok(format!("torsion orders 4, 5, 3; full 2-torsion on 7 records; {checked} quasi-elliptic sections of order 3"))
}

// ---- 6 ----

fn criterion_6(summary: &CorpusSummary) -> Outcome {
    let mut n = 0;
    for rep in summary.reports.iter().filter(|r| r.fibers_match) {
        ensure(
            rep.rank_match == Some(true),
            format!("record {}: Shioda-Tate {:?} vs {}", rep.id, rep.shioda_tate_rank, rep.mw_rank),
        )?;
        n += 1;
    }
    Ok(format!("{n} matching records agree"))
}

// ---- 7 ----

fn criterion_7(summary: &CorpusSummary) -> Outcome {
    for id in [1, 29, 38, 40, 41] {
        let rep = summary.reports.iter().find(|r| r.id == id).expect("record");
        let disc = rep.disc.as_ref().ok_or(format!("record {id}: no discriminant check"))?;
        ensure(disc.pass && disc.disc_ns == "-9", format!("record {id}: disc NS = {}", disc.disc_ns))?;
    }
    Ok("disc NS = -9 for records 1, 29, 38, 40, 41".into())
}

// ---- 8 ----

fn criterion_8(recs: &[FibrationRecord], summary: &CorpusSummary) -> Outcome {
    let mut torsion = 0;
    for rep in &summary.reports {
        for s in rep.sections.iter().filter(|s| s.torsion_order.is_some()) {
            ensure(s.height.as_deref() == Some("0"), format!("record {}: h({}) = {:?}", rep.id, s.point, s.height))?;
            torsion += 1;
        }
    }
    let r5 = record(recs, 5);
    let ctx = HeightContext::new(r5.model.clone()).map_err(|e| e.to_string())?;
    let h = height(&ctx, &parse_point("(1,1)").unwrap()).map_err(|e| e.to_string())?;
    ensure(h == Rational64::new(3, 2), format!("h((1,1)) = {h}"))?;
    ensure(h * 24 / 4 == Rational64::from_integer(9), "24 h / 4 != 9")?;
    let rep5 = summary.reports.iter().find(|r| r.id == 5).unwrap();
    ensure(
        rep5.errata.iter().any(|e| e.claim.contains("5/2") && e.computed.contains("3/2")),
        "no erratum for the claimed height 5/2",
    )?;
    Ok(format!("{torsion} torsion sections of height 0; h((1,1)) = 3/2 on record 5, 5/2 logged"))
}

// ---- 9 ----

fn criterion_9(recs: &[FibrationRecord]) -> Outcome {
    let mut lines = Vec::new();
    for (source, target) in [(1, 5), (1, 4), (1, 9), (11, 13), (21, 22)] {
        let start = Instant::now();
        let step = verify_step(recs, target).map_err(|e| format!("{source} -> {target}: {e}"))?;
        let elapsed = start.elapsed();
        ensure(step.source == source, format!("record {target} derives from {}", step.source))?;
        ensure(step.dimension == 1, format!("{source} -> {target}: dimension {}", step.dimension))?;
        ensure(step.pole_mismatches.is_empty(), format!("{source} -> {target}: {:?}", step.pole_mismatches))?;
        ensure(
            step.comparison.identified && step.comparison.map.is_some(),
            format!("{source} -> {target}: not identified ({:?})", step.comparison),
        )?;
        ensure(step.passed(), format!("{source} -> {target}: step report failed"))?;
        ensure(elapsed < Duration::from_secs(5), format!("{source} -> {target}: {elapsed:?}"))?;
        lines.push(format!("{source}->{target} {:.1}ms", elapsed.as_secs_f64() * 1000.0));
    }
    Ok(lines.join(", "))
}

// ---- 10 ----

const CASES: u32 = 256;

fn runner(seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

fn f9() -> impl Strategy<Value = F9> {
    (0i64..3, 0i64..3).prop_map(|(a, b)| F9::new(a, b))
}

fn f9_nonzero() -> impl Strategy<Value = F9> {
    f9().prop_filter("nonzero", |a| !a.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = P9> {
    vec(f9(), 0..=max_deg + 1).prop_map(P9::from_coeffs)
}

fn nonzero_ratfunc(max_deg: usize) -> impl Strategy<Value = RatFunc> {
    (poly(max_deg), poly(max_deg))
        .prop_filter("nonzero", |(n, d)| !n.is_zero() && !d.is_zero())
        .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn case<E: std::fmt::Display>(r: Result<bool, E>, what: &str) -> Result<(), TestCaseError> {
    match r {
        Ok(true) => Ok(()),
        Ok(false) => Err(TestCaseError::fail(what.to_string())),
        Err(e) => Err(TestCaseError::fail(format!("{what}: {e}"))),
    }
}

/// Sections of several records: the listed ones, their negatives, and a polynomial search.
fn section_pools(recs: &[FibrationRecord]) -> Vec<(WeierstrassModel, Vec<SurfacePoint>)> {
    [2, 5, 12, 19, 21]
        .iter()
        .map(|id| {
            let r = record(recs, *id);
            let mut pts: Vec<SurfacePoint> = r.effective_sections().into_iter().map(|s| s.point).collect();
            pts.extend(search_polynomial_sections(&r.model, 3));
            pts.push(SurfacePoint::Zero);
            (r.model.clone(), pts)
        })
        .collect()
}

fn group_law(recs: &[FibrationRecord]) -> Result<(), String> {
    let pools = section_pools(recs);
    let strat = (0..pools.len(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), -2i64..=2, -2i64..=2);
    runner(0x6b33_0001)
        .run(&strat, |(k, i, j, a, b)| {
            let (m, pts) = &pools[k];
            let p = k3fib::model::multiply_point(m, i.get(pts), a).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let q = k3fib::model::multiply_point(m, j.get(pts), b).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let sum = add_points(m, &p, &q);
            case(sum.clone().and_then(|s| add_points(m, &s, &negate(&q))).map(|r| r == p), "(P+Q)-Q = P")?;
            case(add_points(m, &q, &p).and_then(|s| sum.map(|t| s == t)), "P+Q = Q+P")?;
            Ok(())
        })
        .map_err(|e| format!("group law: {e}"))?;

    let r2 = &record(recs, 2).model;
    let mut pts = search_polynomial_sections(r2, 4);
    pts.extend(find_two_torsion(r2));
    let triple = (any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>());
    runner(0x6b33_0002)
        .run(&triple, |(i, j, k)| {
            let (p, q, r) = (i.get(&pts), j.get(&pts), k.get(&pts));
            let left = add_points(r2, p, q).and_then(|pq| add_points(r2, &pq, r));
            let right = add_points(r2, q, r).and_then(|qr| add_points(r2, p, &qr));
            case(left.and_then(|l| right.map(|rr| l == rr)), "(P+Q)+R = P+(Q+R) on record 2")
        })
        .map_err(|e| format!("associativity: {e}"))
}

fn delta_covariance() -> Result<(), String> {
    let strat =
        (poly(4), poly(8), poly(12), nonzero_ratfunc(2), poly(3), poly(2).prop_filter("nonzero", |d| !d.is_zero()));
    runner(0x6b33_0003)
        .run(&strat, |(a2, a4, a6, u, rn, rd)| {
            let c = CurveK { a2: a2.into(), a4: a4.into(), a6: a6.into() };
            let phi = ModelMap { u: u.clone(), r: RatFunc::new(rn, rd).unwrap() };
            let image = c.apply_map(&phi).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let expected = &c.discriminant() * &u.pow(-12);
            prop_assert_eq!(image.discriminant(), expected);
            Ok(())
        })
        .map_err(|e| format!("Delta covariance: {e}"))
}

fn fiber_types(m: &WeierstrassModel) -> Result<BTreeMap<Place, KodairaType>, String> {
    let cfg = classify_all(m).map_err(|e| e.to_string())?;
    Ok(cfg.fibers.iter().map(|f| (f.place.clone(), f.kodaira)).collect())
}

fn tate_invariance(recs: &[FibrationRecord]) -> Result<(), String> {
    let elliptic: Vec<(WeierstrassModel, BTreeMap<Place, KodairaType>)> = recs
        .iter()
        .filter(|r| validate_k3(&r.model) == K3Verdict::Elliptic)
        .map(|r| fiber_types(&r.model).map(|t| (r.model.clone(), t)))
        .collect::<Result<_, _>>()?;
    let strat = (0..elliptic.len(), f9_nonzero(), poly(4));
    runner(0x6b33_0004)
        .run(&strat, |(k, u, r)| {
            let (m, before) = &elliptic[k];
            let phi = ModelMap { u: RatFunc::constant(u), r: r.into() };
            let image = apply_map(m, &phi).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let after = fiber_types(&image).map_err(TestCaseError::fail)?;
            prop_assert_eq!(&after, before);
            Ok(())
        })
        .map_err(|e| format!("Tate invariance: {e}"))
}

fn quasi_mu_invariance() -> Result<(), String> {
    let places = Place::all_rational(FieldKind::F9);
    let strat = (poly(12), poly(4));
    runner(0x6b33_0005)
        .run(&strat, |(f, g)| {
            let shifted = &f + &g.pow(3);
            for v in &places {
                let a = quasi_mu(&f, v).ok();
                let b = quasi_mu(&shifted, v).ok();
                prop_assert_eq!(a, b, "place {}", v);
            }
            Ok(())
        })
        .map_err(|e| format!("quasi mu invariance: {e}"))
}

fn criterion_10(recs: &[FibrationRecord]) -> Outcome {
    group_law(recs)?;
    delta_covariance()?;
    tate_invariance(recs)?;
    quasi_mu_invariance()?;
    Ok(format!("group law, associativity, Delta covariance, Tate invariance, quasi mu: {CASES} cases each"))
}

fn run(n: u32, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(msg) => {
            println!("criterion {n:>2}: PASS ({secs:.2}s) {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n:>2}: FAIL ({secs:.2}s) {msg}");
            false
        }
    }
}

fn main() {
    let recs = builtin_corpus().expect("builtin corpus parses");
    let start = Instant::now();
    let summary = verify_all(&recs);
    let corpus_time = start.elapsed();

    let results = [
        run(1, criterion_1),
        run(2, criterion_2),
        run(3, || criterion_3(&summary, corpus_time)),
        run(4, || criterion_4(&recs)),
        run(5, || criterion_5(&recs)),
        run(6, || criterion_6(&summary)),
        run(7, || criterion_7(&summary)),
        run(8, || criterion_8(&recs, &summary)),
        run(9, || criterion_9(&recs)),
        run(10, || criterion_10(&recs)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
