//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.

mod common;

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use skrates::bounds::{
    crossing_ratio, generate_certificates, outer_check, BoundKind, BoundCertificate, OuterRegion, PinCurve,
    TreePinRegion,
};
use skrates::capacity::capacity;
use skrates::entropy::entropy;
use skrates::greedy::{
    covering_lp_value, crossing_weights, greedy_mu, greedy_value, laminate, CoverMeasure, LaminationMode,
    SubmodularCheck, TableFunction,
};
use skrates::mmi::mmi;
use skrates::protocol::{
    build_tree_protocol, measured_rates, minimal_blocklength, verify_protocol, ExhaustiveOutcome, SecrecyVerdict,
};
use skrates::rational::{format, int, min, ratio};
use skrates::source::enumerate_partitions;
use skrates::tree_packing::{enumerate_spanning_trees, max_packing, packing_to_rates, TreePacking};
use skrates::{catalog, Caps, HypergraphSource, Partition, RatePoint, Rational, VertexSet};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn caps() -> Caps {
    Caps::default()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn point(key: Rational, rates: Vec<Rational>) -> Result<RatePoint, String> {
    RatePoint::new(key, rates).map_err(err)
}

fn partition(s: &HypergraphSource, blocks: &[&[&str]]) -> Result<Partition, String> {
    let owned: Vec<Vec<&str>> = blocks.iter().map(|b| b.to_vec()).collect();
    s.partition_from_ids(&owned).map_err(err)
}

fn motivating() -> Outcome {
    let s = catalog::motivating();
    let cap = capacity(&s, &caps()).map_err(err)?;
    ensure!(cap.capacity == int(1), "C_S = {}", format(&cap.capacity));
    ensure!(cap.rco == int(2), "R_CO = {}", format(&cap.rco));
    let expected = partition(&s, &[&["1"], &["2", "3"]])?;
    ensure!(cap.mmi.fundamental == expected, "fundamental partition {:?}", s.render_partition(&cap.mmi.fundamental));

    let region = OuterRegion::new(&s, &caps()).map_err(err)?;
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..50 {
        let key = common::rational(&mut rng, 2, 4);
        let rates: Vec<Rational> = (0..3).map(|_| common::rational(&mut rng, 2, 4)).collect();
        let inside = key <= int(1) && rates[1] >= key;
        let p = point(key, rates)?;
        let got = region.check(&p).map_err(err)?.is_feasible();
        ensure!(got == inside, "membership of {p:?}: outer says {got}, region says {inside}");
    }
    for r in [int(0), ratio(1, 2), int(1), int(2)] {
        let v = region.max_key_rate(&r).map_err(err)?;
        let want = min(&r, &int(1));
        ensure!(v == want, "C_S({}) bound = {}, expected {}", format(&r), format(&v), format(&want));
    }
    Ok(())
}

fn triangle() -> Outcome {
    let s = catalog::triangle();
    let cap = capacity(&s, &caps()).map_err(err)?;
    ensure!(cap.capacity == ratio(3, 2) && cap.rco == ratio(3, 2), "C_S = {}, R_CO = {}", format(&cap.capacity), format(&cap.rco));
    let singletons = Partition::singletons(s.all_vertices()).map_err(err)?;
    let alpha = crossing_ratio(&s, &singletons).map_err(err)?;
    ensure!(alpha == ratio(1, 2), "alpha = {}", format(&alpha));

    let region = OuterRegion::new(&s, &caps()).map_err(err)?;
    for k in [int(0), ratio(1, 2), int(1), ratio(3, 2)] {
        let least = region.min_total_rate(&k).map_err(err)?;
        ensure!(least == Some(k.clone()), "min r(V) at r_K = {}: {:?}", format(&k), least);
    }
    for r in [int(0), ratio(3, 4), ratio(3, 2), int(3)] {
        let v = region.max_key_rate(&r).map_err(err)?;
        ensure!(v == min(&r, &ratio(3, 2)), "C_S({}) bound = {}", format(&r), format(&v));
    }
    let curve = PinCurve::new(&s, &caps()).map_err(err)?;
    ensure!(curve.communication_complexity() == ratio(3, 2), "R_S = {}", format(&curve.communication_complexity()));
    let smallest = region.min_total_rate(&ratio(3, 2)).map_err(err)?;
    ensure!(smallest == Some(ratio(3, 2)), "outer R_S = {smallest:?}");

    let (value, packing) = max_packing(&s, &caps()).map_err(err)?;
    ensure!(value == ratio(3, 2), "packing value {}", format(&value));
    let rates = packing_to_rates(&packing);
    ensure!(rates == point(ratio(3, 2), vec![ratio(1, 2); 3])?, "packing rates {rates:?}");
    Ok(())
}

fn pin_curves() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    for case in 0..20 {
        let m = rng.gen_range(3..=6);
        let s = common::connected_pin(&mut rng, m, 3, 3);
        let c = capacity(&s, &caps()).map_err(err)?.capacity;
        let region = OuterRegion::new(&s, &caps()).map_err(err)?;
        let k = int(m as i64 - 2);
        let knee = &k * &c;
        let samples = [int(0), &knee * ratio(1, 3), knee.clone(), &knee + ratio(1, 2), &knee * int(2) + int(1)];
        for r in samples {
            let v = region.max_key_rate(&r).map_err(err)?;
            let want = min(&(&r / &k), &c);
            ensure!(v == want, "case {case} (m = {m}): bound at R = {} is {}, expected {}", format(&r), format(&v), format(&want));
        }
        let (_, packing) = max_packing(&s, &caps()).map_err(err)?;
        let rates = packing_to_rates(&packing);
        ensure!(rates.total() == &k * &rates.key_rate, "case {case}: r(V) = {}", format(&rates.total()));
    }
    Ok(())
}

fn tree_pins() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    for case in 0..10 {
        let m = rng.gen_range(3..=7);
        let s = common::tree_pin(&mut rng, m, 5);
        let min_weight = s.edges().iter().map(|e| e.entropy.clone()).min().unwrap();
        let c = capacity(&s, &caps()).map_err(err)?.capacity;
        ensure!(c == min_weight, "case {case}: C_S = {}, min weight {}", format(&c), format(&min_weight));
        let tree = TreePinRegion::new(&s).map_err(err)?;
        let (_, packing) = max_packing(&s, &caps()).map_err(err)?;
        let rates = packing_to_rates(&packing);
        ensure!(rates.key_rate == c, "case {case}: packing key rate {}", format(&rates.key_rate));
        for i in 0..m {
            ensure!(rates.rates[i] == tree.min_rate(i, &c), "case {case}: r_{i} = {}", format(&rates.rates[i]));
        }
        let region = OuterRegion::new(&s, &caps()).map_err(err)?;
        ensure!(region.check(&rates).map_err(err)?.is_feasible(), "case {case}: facet point rejected");
        for i in (0..m).filter(|&i| tree.degrees[i] >= 2) {
            let mut below = rates.clone();
            below.rates[i] -= ratio(1, 100);
            ensure!(!region.check(&below).map_err(err)?.is_feasible(), "case {case}: r_{i} - 1/100 accepted");
        }
        let mut above = rates.clone();
        above.key_rate += ratio(1, 100);
        ensure!(!region.check(&above).map_err(err)?.is_feasible(), "case {case}: r_K + 1/100 accepted");
    }
    Ok(())
}

fn duality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    for case in 0..30 {
        let m = rng.gen_range(2..=6);
        let s = common::connected_pin(&mut rng, m, 3, 4);
        let i = mmi(&s, s.all_vertices(), &caps()).map_err(err)?.value;
        let (p, _) = max_packing(&s, &caps()).map_err(err)?;
        ensure!(i == p, "case {case}: MMI {} vs packing {}", format(&i), format(&p));
    }
    Ok(())
}

fn hyperedge_examples() -> Outcome {
    let s = catalog::three_user_hyperedge();
    let b = s.vertex_set(["1", "3"]).map_err(err)?;
    let p = partition(&s, &[&["1"], &["3"]])?;
    let cert = BoundCertificate::subset(&s, b, &p).map_err(err)?;
    let row = &cert.inequality;
    // r_2 ≥ r_K − 1  ⇔  −r_K + r_2 ≥ −1
    ensure!(
        row.key_coeff == int(-1) && row.rate_coeffs == vec![int(0), int(1), int(0)] && row.rhs == int(-1),
        "subset bound row {row:?}"
    );
    let certs = generate_certificates(&s, &caps()).map_err(err)?;
    let crossing: Vec<_> = certs.iter().filter(|c| matches!(c.kind, BoundKind::Crossing { .. })).collect();
    ensure!(crossing.len() == 4, "{} crossing certificates", crossing.len());
    for c in &crossing {
        ensure!(c.inequality.is_vacuous(), "non-vacuous crossing certificate {:?}", c.kind);
        ensure!(c.kind == BoundKind::Crossing { alpha: int(1) }, "alpha {:?}", c.kind);
    }
    let c = capacity(&s, &caps()).map_err(err)?.capacity;
    ensure!(c == int(2), "C_S = {}", format(&c));

    let six = catalog::six_user();
    let region = OuterRegion::new(&six, &caps()).map_err(err)?;
    let least = region.min_total_rate(&int(1)).map_err(err)?;
    ensure!(least == Some(int(1)), "six-user min r(V) at r_K = 1: {least:?}");
    Ok(())
}

fn protocols() -> Outcome {
    let s = catalog::motivating();
    let trees = enumerate_spanning_trees(&s, &caps()).map_err(err)?;
    let packing = TreePacking { num_vertices: 3, trees: vec![(trees[0].clone(), int(1))] };
    let p = build_tree_protocol(&s, &packing, 1).map_err(err)?;
    let r = verify_protocol(&s, &p, true, &caps()).map_err(err)?;
    ensure!(r.verdict == SecrecyVerdict::Perfect && r.equivocation_bits == 1, "motivating: {r:?}");
    let ExhaustiveOutcome::Done(x) = &r.exhaustive else { return Err("motivating: no exhaustive run".into()) };
    ensure!(x.assignments == 8 && x.verdict == r.verdict && x.equivocation_bits == 1, "motivating exhaustive: {x:?}");
    ensure!(x.key_uniform && x.key_independent, "motivating key distribution: {x:?}");

    let t = catalog::triangle();
    let (_, packing) = max_packing(&t, &caps()).map_err(err)?;
    let p = build_tree_protocol(&t, &packing, 2).map_err(err)?;
    let r = verify_protocol(&t, &p, true, &caps()).map_err(err)?;
    ensure!(r.key_bits == 3 && r.message_bits == vec![1, 1, 1], "triangle: {r:?}");
    ensure!(r.verdict == SecrecyVerdict::Perfect, "triangle verdict {:?}", r.verdict);
    let ExhaustiveOutcome::Done(x) = &r.exhaustive else { return Err("triangle: no exhaustive run".into()) };
    ensure!(x.assignments == 64 && x.verdict == SecrecyVerdict::Perfect, "triangle exhaustive: {x:?}");

    let mut rng = StdRng::seed_from_u64(7);
    for case in 0..10 {
        let m = rng.gen_range(3..=5);
        let s = common::connected_pin(&mut rng, m, 3, 3);
        let (_, packing) = max_packing(&s, &caps()).map_err(err)?;
        let n = minimal_blocklength(&s, &packing).map_err(err)?;
        let p = build_tree_protocol(&s, &packing, n).map_err(err)?;
        let r = verify_protocol(&s, &p, false, &caps()).map_err(err)?;
        ensure!(r.verdict == SecrecyVerdict::Perfect, "case {case}: verdict {:?}", r.verdict);
        let measured = measured_rates(&p);
        ensure!(measured == packing_to_rates(&packing), "case {case}: measured {measured:?}");
        ensure!(outer_check(&s, &measured, &caps()).map_err(err)?.is_feasible(), "case {case}: outside the outer region");
    }
    Ok(())
}

fn greedy() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    for case in 0..100 {
        let n = rng.gen_range(1..=5);
        let f = TableFunction::new(n, common::submodular_table(&mut rng, n)).map_err(err)?;
        let w: Vec<Rational> = (0..n).map(|_| common::rational(&mut rng, 3, 4)).collect();
        let g = greedy_value(&f, &w, SubmodularCheck::Verify).map_err(err)?;
        let lp = covering_lp_value(&f, &w).map_err(err)?;
        ensure!(g == lp, "case {case}: greedy {} vs LP {}", format(&g), format(&lp));
    }

    let s = catalog::triangle();
    let inst = crossing_weights(&s, &Partition::singletons(s.all_vertices()).map_err(err)?).map_err(err)?;
    let mu = greedy_mu(&inst.weights).map_err(err)?;
    let chain: Vec<(u64, Rational)> = mu.iter().map(|(b, q)| (b, q.clone())).collect();
    // {0}, {0,a,b,c}, {0,a,b,c,1,2,3}
    ensure!(chain == vec![(0b1, int(1)), (0b1111, int(1)), (0b111_1111, int(1))], "triangle chain {chain:?}");

    for case in 0..100 {
        let n = rng.gen_range(2..=5);
        let f = TableFunction::new(n, common::submodular_table(&mut rng, n)).map_err(err)?;
        let entries: Vec<(u64, Rational)> = (0..rng.gen_range(1..=6))
            .map(|_| (rng.gen_range(1u64..(1 << n)), common::rational(&mut rng, 2, 3)))
            .collect();
        let mu = CoverMeasure::from_entries(n, entries).map_err(err)?;
        let out = laminate(&f, &mu, LaminationMode::Laminar).map_err(err)?;
        ensure!(out.marginals() == mu.marginals(), "case {case}: marginals changed");
        ensure!(out.objective(&f) <= mu.objective(&f), "case {case}: objective increased");
        ensure!(out.is_laminar(), "case {case}: support not laminar");
    }
    Ok(())
}

fn structure() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut sources: Vec<HypergraphSource> = catalog::all().into_iter().map(|(_, s)| s).collect();
    for _ in 0..30 {
        let m = rng.gen_range(2..=6);
        sources.push(common::hypergraph(&mut rng, m, 8));
    }
    for (case, s) in sources.iter().enumerate() {
        let full = s.all_vertices().0;
        let h = |b: u32| entropy(s, VertexSet(b));
        for b in 0..=full {
            for c in b + 1..=full {
                let lhs = h(b).map_err(err)? + h(c).map_err(err)?;
                let rhs = h(b & c).map_err(err)? + h(b | c).map_err(err)?;
                ensure!(lhs >= rhs, "case {case}: submodularity fails at {b:#b}, {c:#b}");
            }
        }
        for b in s.all_vertices().subsets_by_size(2) {
            let res = mmi(s, b, &caps()).map_err(err)?;
            for p in &res.optimal_partitions {
                for q in &res.optimal_partitions {
                    let meet = p.meet(q).map_err(err)?;
                    ensure!(res.optimal_partitions.contains(&meet), "case {case}: meet not optimal on {b:?}");
                }
            }
        }
        let cap = capacity(s, &caps()).map_err(err)?;
        ensure!(cap.rco == &cap.joint_entropy - &cap.mmi.value, "case {case}: R_CO != H - I");
    }
    // the lattice is exercised beyond a single optimum
    let edgeless = HypergraphSource::new(["1", "2", "3", "4"], [("a", vec!["1"], int(1))]).map_err(err)?;
    let res = mmi(&edgeless, edgeless.all_vertices(), &caps()).map_err(err)?;
    ensure!(res.value.is_zero() && res.optimal_partitions.len() == enumerate_partitions(edgeless.all_vertices()).map_err(err)?.count(), "edgeless lattice");
    Ok(())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("motivating PIN: capacity, omniscience, outer region, curve", Duration::from_secs(1), motivating),
        ("triangle PIN: capacity, alpha, curve, packing", Duration::from_secs(1), triangle),
        ("PIN curve min{R/(m-2), C_S} on 20 random PINs", Duration::from_secs(30), pin_curves),
        ("tree-PIN region on 10 random trees", Duration::from_secs(10), tree_pins),
        ("MMI equals max packing on 30 random PINs", Duration::from_secs(30), duality),
        ("hyperedge examples: subset bound, vacuous crossing bounds, six users", Duration::from_secs(60), hyperedge_examples),
        ("protocol verification: rank and exhaustive agree", Duration::from_secs(30), protocols),
        ("greedy covering and lamination", Duration::from_secs(60), greedy),
        ("structural properties: submodularity, lattice, omniscience identity", Duration::from_secs(60), structure),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > *limit {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("PASS {}: {name} ({elapsed:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
