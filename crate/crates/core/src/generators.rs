//! Primary elements of prime norm and the Schottky generators they define.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arithmetic::{lattice_element, sublattice_gram};
use crate::enumerate::enumerate_shell;
use crate::error::{invariant, Error, Result};
use crate::order::EichlerOrder;
use crate::quaternion::Quaternion;

/// The set `{alpha in O : Nm(alpha) = p, alpha = 1 mod O modulus}` and its
/// representatives up to sign and conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub p: u64,
    pub all_elements: Vec<Quaternion>,
    /// One per class `{+-alpha, +-conj(alpha)}`: positive trace, then the
    /// smaller of `alpha` and its conjugate.
    pub impure_reps: Vec<Quaternion>,
    /// Trace-zero elements, one per sign class.
    pub pure_reps: Vec<Quaternion>,
    pub impure_count: usize,
    pub pure_count: usize,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Rejects even or composite `p`, and primes dividing `2DN`.
pub fn check_prime(o: &EichlerOrder, p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let level = 2 * o.dn();
    if level.is_multiple_of(p) {
        return Err(Error::PrimeDividesLevel { p, level });
    }
    Ok(())
}

/// Every element of norm `p` congruent to `1` modulo the left ideal `O modulus`.
pub fn primary_elements(o: &EichlerOrder, modulus: &Quaternion, p: u64) -> Result<Vec<Quaternion>> {
    let ideal = o.left_ideal(std::slice::from_ref(modulus))?;
    let shift = ideal.coordinates(&o.one_coords());
    let center = shift.map(|c| -c);
    let target = BigRational::from_integer(BigInt::from(p));
    let pts = enumerate_shell(&sublattice_gram(o, &ideal), &center, &target)?;
    let one = Quaternion::one();
    let mut out: Vec<Quaternion> = pts.iter().map(|y| lattice_element(o, &ideal, y).add(&one)).collect();
    out.sort();
    Ok(out)
}

pub fn represent_prime(o: &EichlerOrder, modulus: &Quaternion, p: u64) -> Result<GeneratorSet> {
    check_prime(o, p)?;
    let all = primary_elements(o, modulus, p)?;
    let expected = if o.two_in_ideal(modulus)? { 2 * (p + 1) } else { p + 1 };
    if all.len() as u64 != expected {
        return invariant(format!("found {} primary elements of norm {p}, expected {expected}", all.len()));
    }
    let mut impure = Vec::new();
    let mut pure = Vec::new();
    for a in &all {
        let tr = a.trace();
        if tr.is_zero() {
            pure.push(a.canonical_sign());
        } else if tr.is_positive() {
            impure.push(a.clone().min(a.conj()));
        }
    }
    impure.sort();
    impure.dedup();
    pure.sort();
    pure.dedup();
    let (s, t) = (impure.len(), pure.len());
    if 4 * s + 2 * t != all.len() {
        return invariant("primary elements are not closed under sign and conjugation");
    }
    Ok(GeneratorSet { p, all_elements: all, impure_reps: impure, pure_reps: pure, impure_count: s, pure_count: t })
}

/// Number of trace-zero primary elements of norm `p`.
pub fn null_trace(o: &EichlerOrder, modulus: &Quaternion, p: u64) -> Result<usize> {
    check_prime(o, p)?;
    Ok(primary_elements(o, modulus, p)?.iter().filter(|a| a.trace().is_zero()).count())
}

pub fn schottky_rank(gs: &GeneratorSet) -> Result<usize> {
    if gs.pure_count != 0 {
        return Err(Error::NotSchottky { pure: gs.pure_count });
    }
    if gs.impure_count as u64 != gs.p.div_ceil(2) {
        return invariant(format!("rank {} differs from (p+1)/2", gs.impure_count));
    }
    Ok(gs.impure_count)
}
