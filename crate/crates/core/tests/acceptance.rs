mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use schottky_core::arithmetic::{choose_modulus, UnitGroup};
use schottky_core::formulas::{
    closed_form_report, edge_count_formula, genus_formula, order_two_points, order_two_points_by_squares,
};
use schottky_core::generators::{null_trace, represent_prime};
use schottky_core::graphs::{mumford_graph, plus_cover, quotient_by_units, schottky_pairing, unit_orbits, EdgeKind};
use schottky_core::order::{order_lookup, EichlerOrder, FAMILIES};
use schottky_core::padic::ProjPoint;
use schottky_core::quaternion::Quaternion;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn families() -> Vec<(EichlerOrder, UnitGroup)> {
    FAMILIES.iter().map(|&(d, n)| units_of(d, n)).collect()
}

fn point(s: &str) -> ProjPoint {
    if s == "inf" {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(s.parse().unwrap())
    }
}

fn set(xs: &[&str]) -> BTreeSet<ProjPoint> {
    xs.iter().map(|s| point(s)).collect()
}

fn class_of(x: &Quaternion) -> BTreeSet<Quaternion> {
    [x.clone(), x.neg(), x.conj(), x.conj().neg()].into_iter().collect()
}

fn golden_run() -> Outcome {
    let start = Instant::now();
    let o = order_lookup(3, 2).map_err(|e| e.to_string())?;
    let want_modulus = Quaternion::from_fracs([-1, -1, -1, 1], 2);
    ensure!(o.modulus == want_modulus, "table modulus is {}", o.modulus);
    let chosen = choose_modulus(&o).map_err(|e| e.to_string())?;
    ensure!(chosen == want_modulus, "search found modulus = {chosen}");

    let gs = represent_prime(&o, &o.modulus, 13).map_err(|e| e.to_string())?;
    ensure!(gs.impure_count == 7 && gs.pure_count == 0, "s = {}, t = {}", gs.impure_count, gs.pure_count);
    let listing: BTreeSet<_> = [
        ([-6, 1, -1, 2], 2),
        ([-6, -1, 1, 2], 2),
        ([-3, 1, -1, 0], 1),
        ([-1, 0, 0, 2], 1),
        ([-2, 3, -3, 2], 2),
        ([-2, -3, 3, 2], 2),
        ([-1, -3, -1, 0], 1),
    ]
    .into_iter()
    .map(|(c, d)| class_of(&Quaternion::from_fracs(c, d)))
    .collect();
    let got: BTreeSet<_> = gs.impure_reps.iter().map(class_of).collect();
    ensure!(got == listing, "generator classes differ");

    let table = schottky_pairing(&o.algebra, &gs).map_err(|e| e.to_string())?;
    let pairs: BTreeSet<BTreeSet<ProjPoint>> =
        table.unordered_pairs().into_iter().map(|(x, y)| [x, y].into_iter().collect()).collect();
    let want: BTreeSet<_> = [
        set(&["9", "11"]),
        set(&["1", "2"]),
        set(&["5", "7"]),
        set(&["3", "10"]),
        set(&["8", "inf"]),
        set(&["0", "6"]),
        set(&["4", "12"]),
    ]
    .into_iter()
    .collect();
    ensure!(pairs == want, "pairing differs: {pairs:?}");

    let units = schottky_core::arithmetic::unit_group(&o).map_err(|e| e.to_string())?;
    let orbits: BTreeSet<BTreeSet<ProjPoint>> = unit_orbits(&o.algebra, &units, 13)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
    let want: BTreeSet<_> = [
        set(&["8", "0"]),
        set(&["1", "11"]),
        set(&["2", "9"]),
        set(&["10", "3"]),
        set(&["12", "4"]),
        set(&["5"]),
        set(&["7"]),
        set(&["6", "inf"]),
    ]
    .into_iter()
    .collect();
    ensure!(orbits == want, "unit orbits differ: {orbits:?}");

    let q = quotient_by_units(&o.algebra, &table, &units).map_err(|e| e.to_string())?;
    let edges: BTreeSet<(EdgeKind, BTreeSet<ProjPoint>, usize)> =
        q.unoriented().into_iter().map(|(k, l, n)| (k, l.into_iter().collect(), n)).collect();
    let want: BTreeSet<_> = [
        (EdgeKind::AllerRetour, set(&["10", "3"]), 1),
        (EdgeKind::AllerRetour, set(&["12", "4"]), 1),
        (EdgeKind::Loop, set(&["8", "6", "0", "inf"]), 1),
        (EdgeKind::Loop, set(&["2", "1", "11", "9"]), 1),
        (EdgeKind::Loop, set(&["7", "5"]), 2),
    ]
    .into_iter()
    .collect();
    ensure!(edges == want, "quotient edges differ: {edges:?}");

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("(3,2,13) reproduced in {:.2}s", elapsed.as_secs_f64()))
}

fn primary_count(fams: &[(EichlerOrder, UnitGroup)]) -> Outcome {
    let start = Instant::now();
    let results: Vec<Result<usize, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = fams
            .iter()
            .map(|(o, _)| {
                scope.spawn(move || {
                    let mut runs = 0;
                    for p in admissible_primes(o, 500) {
                        if !o.two_in_ideal(&o.modulus).map_err(|e| e.to_string())? {
                            continue;
                        }
                        let gs = represent_prime(o, &o.modulus, p)
                            .map_err(|e| format!("({},{}) p={p}: {e}", o.discriminant(), o.level))?;
                        if gs.all_elements.len() as u64 != 2 * (p + 1) {
                            return Err(format!(
                                "({},{}) p={p}: {} elements",
                                o.discriminant(),
                                o.level,
                                gs.all_elements.len()
                            ));
                        }
                        runs += 1;
                    }
                    Ok(runs)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut runs = 0;
    for r in results {
        runs += r?;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "sweep took {elapsed:?}");
    Ok(format!("{runs} (family, prime) runs up to 500 in {:.1}s", elapsed.as_secs_f64()))
}

fn schottky_rank_check(fams: &[(EichlerOrder, UnitGroup)]) -> Outcome {
    let mut runs = 0;
    for (o, _) in fams {
        for p in admissible_primes(o, 500) {
            let gs = represent_prime(o, &o.modulus, p).map_err(|e| e.to_string())?;
            if gs.pure_count != 0 {
                continue;
            }
            ensure!(
                gs.impure_count as u64 == p.div_ceil(2),
                "({},{}) p={p}: s = {}",
                o.discriminant(),
                o.level,
                gs.impure_count
            );
            let rose = mumford_graph(&schottky_pairing(&o.algebra, &gs).map_err(|e| e.to_string())?);
            ensure!(
                rose.betti_number() as u64 == p.div_ceil(2),
                "({},{}) p={p}: rose genus",
                o.discriminant(),
                o.level
            );
            runs += 1;
        }
    }
    Ok(format!("{runs} runs with vanishing null trace"))
}

fn vanishing_null_trace() -> Outcome {
    let mut runs = 0;
    for (d, n) in [(2, 1), (3, 1)] {
        let o = order_lookup(d, n).map_err(|e| e.to_string())?;
        for p in admissible_primes(&o, 500).into_iter().filter(|p| p % 4 == 1) {
            let t = null_trace(&o, &o.modulus, p).map_err(|e| e.to_string())?;
            ensure!(t == 0, "({d},{n}) p={p}: {t} trace-zero elements");
            runs += 1;
        }
    }
    Ok(format!("{runs} primes congruent to 1 mod 4"))
}

fn edge_counts(fams: &[(EichlerOrder, UnitGroup)]) -> Outcome {
    let mut runs = 0;
    for (o, units) in fams {
        let (d, n) = (o.discriminant(), o.level);
        for p in admissible_primes(o, 200) {
            let gs = represent_prime(o, &o.modulus, p).map_err(|e| e.to_string())?;
            if gs.pure_count != 0 {
                continue;
            }
            let table = schottky_pairing(&o.algebra, &gs).map_err(|e| e.to_string())?;
            let q = quotient_by_units(&o.algebra, &table, units).map_err(|e| format!("({d},{n}) p={p}: {e}"))?;
            let measured = (q.edges_of_length(1) as i64, q.edges_of_length(2) as i64, q.edges_of_length(3) as i64);
            let closed = edge_count_formula(d, n, p).map_err(|e| e.to_string())?;
            ensure!(measured == closed, "({d},{n}) p={p}: measured {measured:?}, closed form {closed:?}");
            ensure!(q.length_counts().keys().all(|&l| l <= 3), "({d},{n}) p={p}: edge longer than 3");
            ensure!(q.star_sum(0) as u64 == p + 1, "({d},{n}) p={p}: star formula");
            runs += 1;
        }
    }
    Ok(format!("{runs} quotient graphs"))
}

fn genus_cross_check(fams: &[(EichlerOrder, UnitGroup)]) -> Outcome {
    let mut runs = 0;
    for (o, units) in fams {
        let (d, n) = (o.discriminant(), o.level);
        for p in admissible_primes(o, 200) {
            let gs = represent_prime(o, &o.modulus, p).map_err(|e| e.to_string())?;
            if gs.pure_count != 0 {
                continue;
            }
            let report = closed_form_report(o, &o.modulus, units, p).map_err(|e| format!("({d},{n}) p={p}: {e}"))?;
            if matches!((d, n), (2, 1) | (3, 1)) {
                let oracle = order_two_points_by_squares(d, n, p).map_err(|e| e.to_string())?;
                let counted = order_two_points(o, &o.modulus, p).map_err(|e| e.to_string())?;
                ensure!(oracle == counted, "({d},{n}) p={p}: order_two {counted} vs {oracle}");
            }
            let table = schottky_pairing(&o.algebra, &gs).map_err(|e| e.to_string())?;
            let q = quotient_by_units(&o.algebra, &table, units).map_err(|e| e.to_string())?;
            let cover = plus_cover(&q);
            ensure!(
                cover.betti_number() as i64 == report.genus_plus,
                "({d},{n}) p={p}: cover genus {} vs {}",
                cover.betti_number(),
                report.genus_plus
            );
            ensure!(
                q.betti_number() as i64 == report.genus_quotient,
                "({d},{n}) p={p}: quotient genus {} vs {}",
                q.betti_number(),
                report.genus_quotient
            );
            if report.order_two.is_none() {
                ensure!(report.genus_quotient == genus_formula(d, n, p).map_err(|e| e.to_string())?, "({d},{n}) p={p}");
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs"))
}

fn d3_n1_p61() -> Outcome {
    let (o, units) = units_of(3, 1);
    let gs = represent_prime(&o, &o.modulus, 61).map_err(|e| e.to_string())?;
    let table = schottky_pairing(&o.algebra, &gs).map_err(|e| e.to_string())?;
    let rose = mumford_graph(&table);
    ensure!(rose.vertices.len() == 1, "rose has {} vertices", rose.vertices.len());
    let petals = rose.unoriented();
    ensure!(petals.len() == 31 && petals.iter().all(|e| e.2 == 1), "rose has {} petals", petals.len());
    let q = quotient_by_units(&o.algebra, &table, &units).map_err(|e| e.to_string())?;
    let c = (q.edges_of_length(1), q.edges_of_length(2), q.edges_of_length(3));
    ensure!(c == (9, 2, 1), "c = {c:?}");
    ensure!(plus_cover(&q).unoriented().len() == 12, "cover edges");
    Ok("c = (9,2,1), rose with 31 petals".into())
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(cases)
}

fn coords() -> impl Strategy<Value = [i64; 4]> {
    [-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6]
}

fn property_suites(fams: &[(EichlerOrder, UnitGroup)]) -> Outcome {
    let mut total = 0;
    total += run_property("norm", 256, (algebra(), quaternion(), quaternion()), |(a, x, y)| {
        check_norm_multiplicative(&a, &x, &y)
    })?;
    total += run_property("conjugation", 256, (algebra(), quaternion(), quaternion()), |(a, x, y)| {
        check_involution(&a, &x, &y)
    })?;
    total += run_property("closure", 256, (family(), coords(), coords()), |((d, n), c, e)| {
        check_order_closure(&order_lookup(d, n).unwrap(), c, e)
    })?;
    for (o, _) in fams {
        check_reduced_discriminant(o).map_err(|e| format!("({},{}): {e}", o.discriminant(), o.level))?;
        total += 1;
    }
    let embed =
        prop::sample::select(vec![(3u64, 2u64, 13u64), (3, 2, 37), (2, 1, 17), (5, 1, 11), (13, 1, 17), (2, 3, 13)]);
    total += run_property("embedding", 256, (embed, 1u32..5, coords(), coords()), |((d, n, p), k, c, e)| {
        check_embedding(&order_lookup(d, n).unwrap(), p, k, c, e)
    })?;
    let pool = FactorPool::new(3, 2, &[5, 13, 17, 29]);
    let picks = prop::collection::vec((0usize..4, 0usize..200), 1..=4);
    let products = run_property("factorization", 1000, picks.clone(), |v| check_primary_factorization(&pool, &v))?;
    let hurwitz = FactorPool::new(2, 1, &[3, 5, 7, 11]);
    let more = run_property("factorization", 200, picks, |v| check_primary_factorization(&hurwitz, &v))?;
    total += products + more;
    for (o, units) in fams {
        for p in admissible_primes(o, 120) {
            check_pairing(o, units, p).map_err(|e| format!("({},{}) p={p}: {e}", o.discriminant(), o.level))?;
            total += 1;
        }
    }
    Ok(format!("{total} cases, {} factorization round trips", products + more))
}

fn main() -> ExitCode {
    let fams = families();
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("golden run", Box::new(golden_run)),
        ("primary element count", Box::new(|| primary_count(&fams))),
        ("schottky rank", Box::new(|| schottky_rank_check(&fams))),
        ("vanishing null trace", Box::new(vanishing_null_trace)),
        ("edge-count table", Box::new(|| edge_counts(&fams))),
        ("genus cross-check", Box::new(|| genus_cross_check(&fams))),
        ("(3,1,61) structure", Box::new(d3_n1_p61)),
        ("property suites", Box::new(|| property_suites(&fams))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
