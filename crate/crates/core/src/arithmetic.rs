//! Units, residue rings `O / modulus O`, the right-unit property, principal
//! generators of right ideals and the two factorization theorems.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumerate::enumerate_shell;
use crate::error::{invariant, Error, Result};
use crate::linalg::{self, IVec4, IntLattice, Mat4};
use crate::order::EichlerOrder;
use crate::quaternion::Quaternion;

/// One representative per class of `O^x / Z^x`, the identity first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    pub elements: Vec<Quaternion>,
    pub order: usize,
}

impl UnitGroup {
    /// Representative of `+-x` in the list, if any.
    pub fn index_of(&self, x: &Quaternion) -> Option<usize> {
        let c = x.canonical_sign();
        self.elements.iter().position(|u| *u == c)
    }

    /// Both signs of every class.
    pub fn signed(&self) -> Vec<Quaternion> {
        self.elements.iter().flat_map(|u| [u.clone(), u.neg()]).collect()
    }

    /// Order of `u` modulo `+-1`.
    pub fn element_order(&self, o: &EichlerOrder, u: &Quaternion) -> usize {
        let one = Quaternion::one();
        let mut x = u.clone();
        let mut n = 1;
        while x != one && x != one.neg() {
            x = o.mul(&x, u);
            n += 1;
        }
        n
    }

    /// Number of cyclic subgroups of order `d` in `O^x / Z^x`.
    pub fn cyclic_subgroups_of_order(&self, o: &EichlerOrder, d: usize) -> usize {
        let phi = (1..=d).filter(|k| k.gcd(&d) == 1).count();
        let n = self.elements.iter().filter(|u| self.element_order(o, u) == d).count();
        n / phi
    }
}

/// Integer vectors of the order with the given norm, as quaternions.
pub fn elements_of_norm(o: &EichlerOrder, n: &BigInt) -> Result<Vec<Quaternion>> {
    let zero: linalg::Vec4 = std::array::from_fn(|_| BigRational::zero());
    let pts = enumerate_shell(&o.normic_form(), &zero, &BigRational::from_integer(n.clone()))?;
    Ok(pts.iter().map(|c| o.element_i64(c)).collect())
}

pub fn unit_group(o: &EichlerOrder) -> Result<UnitGroup> {
    let all = elements_of_norm(o, &BigInt::one())?;
    let mut reps: Vec<Quaternion> = all.iter().map(Quaternion::canonical_sign).collect();
    reps.sort();
    reps.dedup();
    let one = Quaternion::one();
    reps.retain(|u| *u != one);
    reps.insert(0, one);
    let g = UnitGroup { order: reps.len(), elements: reps };
    for x in &g.elements {
        for y in &g.elements {
            if g.index_of(&o.mul(x, y)).is_none() {
                return invariant("unit group not closed under multiplication");
            }
        }
    }
    Ok(g)
}

/// Coset of an order element modulo a fixed sublattice, stored as the
/// canonical Hermite remainder of its order coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElement {
    pub coords: IVec4,
}

/// `O / gamma O` for a right ideal `gamma O`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    pub modulus: Quaternion,
    pub lattice: IntLattice,
}

impl ResidueRing {
    pub fn right(o: &EichlerOrder, gamma: &Quaternion) -> Result<Self> {
        Ok(ResidueRing { modulus: gamma.clone(), lattice: o.right_ideal(std::slice::from_ref(gamma))? })
    }

    pub fn class(&self, o: &EichlerOrder, x: &Quaternion) -> Result<ResidueElement> {
        match o.int_coords(x) {
            Some(c) => Ok(ResidueElement { coords: self.lattice.reduce(&c) }),
            None => Err(Error::NotInOrder(x.to_string())),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.lattice.index().is_one()
    }

    /// `x` and `y` agree modulo the ideal.
    pub fn congruent(&self, o: &EichlerOrder, x: &Quaternion, y: &Quaternion) -> bool {
        o.in_lattice(&self.lattice, &x.sub(y))
    }
}

fn small_modulus(n: &BigInt) -> Result<i64> {
    match n.to_i64() {
        Some(m) if m > 0 && m <= 64 => Ok(m),
        _ => invariant(format!("residue modulus {n} out of range")),
    }
}

/// Image of `(O / Nm(modulus) O)^x` in `O / modulus O`.
pub fn residue_units_r(o: &EichlerOrder, modulus: &Quaternion) -> Result<BTreeSet<ResidueElement>> {
    let ring = ResidueRing::right(o, modulus)?;
    let m = small_modulus(&o.int_norm(modulus))?;
    let mb = BigInt::from(m);
    let mut out = BTreeSet::new();
    for c0 in 0..m {
        for c1 in 0..m {
            for c2 in 0..m {
                for c3 in 0..m {
                    let x = o.element_i64(&[c0, c1, c2, c3]);
                    if o.int_norm(&x).gcd(&mb).is_one() {
                        out.insert(ring.class(o, &x)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Units reduce bijectively onto `(O / modulus O)_r^x`; modulo sign when `2` lies in `modulus O`.
pub fn right_unit_property(o: &EichlerOrder, modulus: &Quaternion) -> Result<bool> {
    if !o.contains(modulus) {
        return Err(Error::NotInOrder(modulus.to_string()));
    }
    let units = unit_group(o)?;
    let domain = if o.two_in_ideal(modulus)? { units.elements.clone() } else { units.signed() };
    let ring = ResidueRing::right(o, modulus)?;
    let mut images = BTreeSet::new();
    for u in &domain {
        if !images.insert(ring.class(o, u)?) {
            return Ok(false);
        }
    }
    Ok(images == residue_units_r(o, modulus)?)
}

/// First element with the right-unit property among `1`, the norm-two
/// elements in increasing order-coordinate order, and `2`.
pub fn choose_modulus(o: &EichlerOrder) -> Result<Quaternion> {
    let mut candidates = vec![Quaternion::one()];
    let zero: linalg::Vec4 = std::array::from_fn(|_| BigRational::zero());
    for c in enumerate_shell(&o.normic_form(), &zero, &linalg::q(2))? {
        candidates.push(o.element_i64(&c));
    }
    candidates.push(Quaternion::from_ints([2, 0, 0, 0]));
    for modulus in candidates {
        if right_unit_property(o, &modulus)? {
            return Ok(modulus);
        }
    }
    Err(Error::NoModulus { d: o.discriminant(), n: o.level })
}

/// Gram matrix of `Nm` restricted to a sublattice given in order coordinates.
pub fn sublattice_gram(o: &EichlerOrder, l: &IntLattice) -> Mat4 {
    let g = o.normic_form();
    let h: Mat4 = l.rows().clone().map(|r| r.map(BigRational::from_integer));
    let hg = linalg::mat_mul(&h, &g);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(BigRational::zero(), |acc, k| acc + &hg[i][k] * &h[j][k]))
    })
}

pub(crate) fn lattice_element(o: &EichlerOrder, l: &IntLattice, y: &[i64; 4]) -> Quaternion {
    let mut c: IVec4 = std::array::from_fn(|_| BigInt::zero());
    for (yi, row) in y.iter().zip(l.rows()) {
        for j in 0..4 {
            c[j] += row[j].clone() * BigInt::from(*yi);
        }
    }
    o.element(&c)
}

/// Generator `pi` with `sum g O = pi O`, chosen canonically.
pub fn right_ideal_generator(o: &EichlerOrder, gens: &[Quaternion]) -> Result<Quaternion> {
    let ideal = o.right_ideal(gens)?;
    let Some(n) = linalg::exact_isqrt(&ideal.index()) else {
        return invariant("ideal index is not a perfect square");
    };
    let zero: linalg::Vec4 = std::array::from_fn(|_| BigRational::zero());
    let pts = enumerate_shell(&sublattice_gram(o, &ideal), &zero, &BigRational::from_integer(n))?;
    let Some(pi) = pts.iter().map(|y| lattice_element(o, &ideal, y).canonical_sign()).min() else {
        return invariant("no generator of the ideal found");
    };
    if o.right_ideal(std::slice::from_ref(&pi))? != ideal {
        return invariant("generator does not span the ideal");
    }
    Ok(pi)
}

/// Prime factors with multiplicity, ascending.
pub fn factor_integer(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut f = BigInt::from(2);
    while &f * &f <= n {
        while (&n % &f).is_zero() {
            out.push(f.clone());
            n /= &f;
        }
        f += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

fn is_primary(o: &EichlerOrder, ring: &ResidueRing, x: &Quaternion) -> bool {
    ring.congruent(o, x, &Quaternion::one())
}

/// Unit `u`, unique up to sign, with `x u = 1` modulo `modulus O`.
fn primary_adjustment(o: &EichlerOrder, ring: &ResidueRing, units: &UnitGroup, x: &Quaternion) -> Result<Quaternion> {
    if ring.is_trivial() {
        return Ok(Quaternion::one());
    }
    let hits: Vec<Quaternion> = units.signed().into_iter().filter(|u| is_primary(o, ring, &o.mul(x, u))).collect();
    let distinct: BTreeSet<Quaternion> = hits.iter().map(Quaternion::canonical_sign).collect();
    match distinct.len() {
        1 => Ok(distinct.into_iter().next().expect("one element")),
        0 => invariant(format!("no unit makes {x} primary")),
        _ => invariant(format!("primary adjustment of {x} is not unique up to sign")),
    }
}

/// Factors a primitive primary `alpha` into primary factors of prime norm,
/// peeling primes in ascending order.
pub fn primary_factorization(alpha: &Quaternion, o: &EichlerOrder, modulus: &Quaternion) -> Result<Vec<Quaternion>> {
    let n = o.norm(alpha);
    if !n.is_integer() {
        return Err(Error::NotInOrder(alpha.to_string()));
    }
    primary_factorization_with_primes(alpha, o, modulus, &factor_integer(&n.to_integer()))
}

/// As [`primary_factorization`], peeling the primes in the given order. The
/// product of the returned factors equals `alpha` exactly; every factor is
/// primary, and all but the last are in canonical sign.
pub fn primary_factorization_with_primes(
    alpha: &Quaternion,
    o: &EichlerOrder,
    modulus: &Quaternion,
    primes: &[BigInt],
) -> Result<Vec<Quaternion>> {
    if !o.contains(alpha) {
        return Err(Error::NotInOrder(alpha.to_string()));
    }
    if !o.is_primitive(alpha) {
        return Err(Error::NotPrimitive(alpha.to_string()));
    }
    let ring = ResidueRing::right(o, modulus)?;
    if !is_primary(o, &ring, alpha) {
        return Err(Error::NotPrimary(alpha.to_string()));
    }
    let norm = o.int_norm(alpha);
    let modulus = BigInt::from(o.dn()) * o.int_norm(modulus);
    if !norm.gcd(&modulus).is_one() {
        return Err(Error::NormNotCoprime { norm: norm.to_string(), modulus: modulus.to_string() });
    }
    if primes.iter().product::<BigInt>() != norm {
        return invariant("prime list does not multiply to the norm");
    }
    let units = unit_group(o)?;
    let mut rest = alpha.clone();
    let mut factors = Vec::with_capacity(primes.len());
    for p in primes {
        let p_q = Quaternion::scalar(BigRational::from_integer(p.clone()));
        let pi = right_ideal_generator(o, &[p_q, rest.clone()])?;
        let u = primary_adjustment(o, &ring, &units, &pi)?;
        let pi = o.mul(&pi, &u).canonical_sign();
        let inv = o.algebra.inverse(&pi).expect("nonzero");
        rest = o.mul(&inv, &rest);
        if !o.contains(&rest) {
            return invariant("cofactor left the order");
        }
        factors.push(pi);
    }
    let one = Quaternion::one();
    if rest == one.neg() {
        match factors.last_mut() {
            Some(last) if !ring.is_trivial() && is_primary(o, &ring, &last.neg()) => *last = last.neg(),
            Some(last) if ring.is_trivial() => *last = last.neg(),
            _ => return invariant("sign of the factorization cannot be absorbed"),
        }
    } else if rest != one {
        return invariant(format!("residual unit {rest} is not +-1"));
    }
    Ok(factors)
}

/// `alpha = p^n * prod(betas) * epsilon` with `epsilon` a unit and each beta
/// primary of norm `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactorization {
    pub n: i64,
    pub betas: Vec<Quaternion>,
    pub epsilon: Quaternion,
}

impl LocalFactorization {
    pub fn reassemble(&self, o: &EichlerOrder, p: u64) -> Quaternion {
        let pn = if self.n >= 0 {
            BigRational::from_integer(BigInt::from(p).pow(self.n as u32))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(p).pow((-self.n) as u32))
        };
        let mut x = Quaternion::scalar(pn);
        for b in &self.betas {
            x = o.mul(&x, b);
        }
        o.mul(&x, &self.epsilon)
    }
}

fn p_valuation(mut n: BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    (v, n)
}

pub fn localized_unit_factor(
    alpha: &Quaternion,
    p: u64,
    o: &EichlerOrder,
    modulus: &Quaternion,
) -> Result<LocalFactorization> {
    let pb = BigInt::from(p);
    let norm = o.norm(alpha);
    let not_power = || Error::NotPPower { norm: norm.to_string(), p };
    let (_, rn) = p_valuation(norm.numer().clone(), &pb);
    let (_, rd) = p_valuation(norm.denom().clone(), &pb);
    if norm.is_zero() || !rn.is_one() || !rd.is_one() {
        return Err(not_power());
    }
    let coords = o.coords_in_order(alpha);
    let mut l = 0u32;
    for c in &coords {
        let (v, rest) = p_valuation(c.denom().clone(), &pb);
        if !rest.is_one() {
            return Err(Error::NotInOrder(alpha.to_string()));
        }
        l = l.max(v);
    }
    let lifted = alpha.scale(&BigRational::from_integer(pb.pow(l)));
    let content = o.content(&lifted).expect("integral after clearing p");
    let (t, _) = p_valuation(content, &pb);
    let beta = lifted.scale(&BigRational::new(BigInt::one(), pb.pow(t)));
    let ring = ResidueRing::right(o, modulus)?;
    let units = unit_group(o)?;
    let mut epsilon = if ring.is_trivial() {
        Quaternion::one()
    } else {
        let hits: BTreeSet<Quaternion> =
            units.signed().into_iter().filter(|e| ring.congruent(o, &beta, e)).map(|e| e.canonical_sign()).collect();
        match hits.len() {
            1 => hits.into_iter().next().expect("one element"),
            _ => return invariant(format!("no unique unit congruent to {beta}")),
        }
    };
    let primary = o.mul(&beta, &o.algebra.inverse(&epsilon).expect("unit"));
    let betas = if o.norm(&primary).is_one() {
        if primary == Quaternion::one().neg() {
            epsilon = epsilon.neg();
        } else if primary != Quaternion::one() {
            return invariant("primary unit is not +-1");
        }
        Vec::new()
    } else {
        primary_factorization(&primary, o, modulus)?
    };
    let out = LocalFactorization { n: t as i64 - l as i64, betas, epsilon };
    if out.reassemble(o, p) != *alpha {
        return invariant("local factorization does not reassemble");
    }
    Ok(out)
}
