//! Strategies and property checks shared by the proptest suite and the
//! acceptance runner.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use schottky_core::arithmetic::{primary_factorization_with_primes, unit_group, UnitGroup};
use schottky_core::generators::{primary_elements, represent_prime};
use schottky_core::graphs::{quotient_by_units, schottky_pairing};
use schottky_core::order::{order_lookup, EichlerOrder, FAMILIES};
use schottky_core::padic::{embed, unit_permutation};
use schottky_core::quaternion::{make_algebra, Algebra, Quaternion};

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn quaternion() -> impl Strategy<Value = Quaternion> {
    [rational(), rational(), rational(), rational()].prop_map(Quaternion::new)
}

pub fn algebra() -> impl Strategy<Value = Algebra> {
    prop::sample::select(vec![(-1i64, -1i64), (-1, -3), (-2, -5), (-2, -13), (-3, -7), (-5, -11)])
        .prop_map(|(a, b)| make_algebra(a, b).expect("definite"))
}

pub fn family() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(FAMILIES.to_vec())
}

pub fn check_norm_multiplicative(alg: &Algebra, x: &Quaternion, y: &Quaternion) -> Result<(), TestCaseError> {
    prop_assert_eq!(alg.norm(&alg.mul(x, y)), alg.norm(x) * alg.norm(y));
    Ok(())
}

pub fn check_involution(alg: &Algebra, x: &Quaternion, y: &Quaternion) -> Result<(), TestCaseError> {
    prop_assert_eq!(&x.conj().conj(), x);
    prop_assert_eq!(alg.mul(x, y).conj(), alg.mul(&y.conj(), &x.conj()));
    prop_assert_eq!(x.add(&x.conj()), Quaternion::scalar(x.trace()));
    prop_assert_eq!(alg.mul(x, &x.conj()), Quaternion::scalar(alg.norm(x)));
    Ok(())
}

/// Products of random order elements stay in the order.
pub fn check_order_closure(o: &EichlerOrder, c: [i64; 4], d: [i64; 4]) -> Result<(), TestCaseError> {
    let x = o.element_i64(&c);
    let y = o.element_i64(&d);
    prop_assert!(o.contains(&o.mul(&x, &y)));
    prop_assert!(o.norm(&x).is_integer());
    prop_assert!(x.trace().is_integer());
    Ok(())
}

pub fn check_reduced_discriminant(o: &EichlerOrder) -> Result<(), TestCaseError> {
    prop_assert_eq!(o.reduced_discriminant().expect("square"), BigInt::from(o.dn()));
    Ok(())
}

/// Embedding respects products, determinants and traces modulo `p^k`.
pub fn check_embedding(o: &EichlerOrder, p: u64, k: u32, c: [i64; 4], d: [i64; 4]) -> Result<(), TestCaseError> {
    let x = o.element_i64(&c);
    let y = o.element_i64(&d);
    let (mx, my) = (embed(&o.algebra, &x, p, k).unwrap(), embed(&o.algebra, &y, p, k).unwrap());
    let mxy = embed(&o.algebra, &o.mul(&x, &y), p, k).unwrap();
    prop_assert_eq!(mx.mul(&my).entries, mxy.entries);
    let m = mx.modulus();
    let norm = o.norm(&x).to_integer();
    prop_assert_eq!(mx.det(), ((norm % &m) + &m) % &m);
    let tr = x.trace().to_integer();
    prop_assert_eq!(mx.trace(), ((tr % &m) + &m) % &m);
    Ok(())
}

/// Odd primes `p <= max` not dividing `2DN` at which `a` is a square.
pub fn admissible_primes(o: &EichlerOrder, max: u64) -> Vec<u64> {
    (3..=max)
        .filter(|&p| schottky_core::generators::check_prime(o, p).is_ok())
        .filter(|&p| schottky_core::formulas::legendre(o.algebra.a, p) == 1)
        .collect()
}

/// Pairing is a fixed-point-free involution covering all `p + 1` points and
/// commuting with every unit.
/// Whether conjugation by every unit maps the generating set into itself up
/// to sign.
pub fn generators_stable_under_units(o: &EichlerOrder, units: &UnitGroup, p: u64) -> bool {
    let s = primary_elements(o, &o.modulus, p).unwrap();
    units.elements.iter().all(|u| {
        let ui = o.algebra.inverse(u).unwrap();
        s.iter().all(|a| {
            let c = o.mul(&o.mul(u, a), &ui);
            s.binary_search(&c).is_ok() || s.binary_search(&c.neg()).is_ok()
        })
    })
}

/// The pairing is a fixed-point-free involution. Units map partner orbits to
/// partner orbits, and map partners to partners exactly when they stabilize
/// the generating set.
pub fn check_pairing(o: &EichlerOrder, units: &UnitGroup, p: u64) -> Result<(), TestCaseError> {
    let gs = represent_prime(o, &o.modulus, p).unwrap();
    if gs.pure_count != 0 {
        return Ok(());
    }
    let table = schottky_pairing(&o.algebra, &gs).unwrap();
    let inv = &table.involution;
    prop_assert_eq!(inv.len() as u64, p + 1);
    for x in 0..inv.len() {
        prop_assert_ne!(inv[x], x);
        prop_assert_eq!(inv[inv[x]], x);
    }
    let stable = generators_stable_under_units(o, units, p);
    let mut pointwise = true;
    for u in &units.elements {
        let s = unit_permutation(&o.algebra, u, p).unwrap();
        pointwise &= (0..inv.len()).all(|x| s[inv[x]] == inv[s[x]]);
    }
    prop_assert_eq!(pointwise, stable);
    prop_assert!(quotient_by_units(&o.algebra, &table, units).is_ok());
    Ok(())
}

/// Primary elements of prime norm usable as Zerlegungssatz factors, keyed by
/// prime. The congruence is taken modulo the right ideal generated by the
/// conjugate of `modulus`, which selects the same elements as the left ideal
/// generated by `modulus`.
pub struct FactorPool {
    pub order: EichlerOrder,
    pub modulus_right: Quaternion,
    pub by_prime: Vec<(u64, Vec<Quaternion>)>,
}

impl FactorPool {
    pub fn new(d: u64, n: u64, primes: &[u64]) -> Self {
        let order = order_lookup(d, n).unwrap();
        let modulus_right = order.modulus.conj();
        let by_prime = primes.iter().map(|&p| (p, primary_elements(&order, &order.modulus, p).unwrap())).collect();
        FactorPool { order, modulus_right, by_prime }
    }
}

/// Multiplies chosen factors (skipping any that would cancel against the
/// previous one) and checks that refactoring returns them up to sign.
pub fn check_primary_factorization(pool: &FactorPool, picks: &[(usize, usize)]) -> Result<(), TestCaseError> {
    let o = &pool.order;
    let mut factors: Vec<Quaternion> = Vec::new();
    let mut primes = Vec::new();
    let mut product = Quaternion::one();
    for &(pi, ei) in picks {
        let (p, elems) = &pool.by_prime[pi % pool.by_prime.len()];
        let f = elems[ei % elems.len()].clone();
        let candidate = o.mul(&product, &f);
        if !o.is_primitive(&candidate) {
            continue;
        }
        product = candidate;
        factors.push(f);
        primes.push(BigInt::from(*p));
    }
    if factors.is_empty() {
        return Ok(());
    }
    let got = primary_factorization_with_primes(&product, o, &pool.modulus_right, &primes)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(got.len(), factors.len());
    for (g, f) in got.iter().zip(&factors) {
        prop_assert_eq!(g.canonical_sign(), f.canonical_sign());
    }
    let mut back = Quaternion::one();
    for g in &got {
        back = o.mul(&back, g);
    }
    prop_assert_eq!(back, product);
    Ok(())
}

pub fn units_of(d: u64, n: u64) -> (EichlerOrder, UnitGroup) {
    let o = order_lookup(d, n).unwrap();
    let u = unit_group(&o).unwrap();
    (o, u)
}
