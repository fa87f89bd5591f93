//! The matrix embedding at a split prime, its reductions, and the action of
//! units on the projective line over `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quaternion::{Algebra, Quaternion};

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let (mut r, mut b) = (1u128, (b % m) as u128);
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Square root of `a` modulo `p` by Tonelli-Shanks, if it exists.
fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = (tt as u128 * tt as u128 % p as u128) as u64;
            i += 1;
        }
        let mut b = c;
        for _ in 0..m - i - 1 {
            b = (b as u128 * b as u128 % p as u128) as u64;
        }
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    Some(r)
}

/// `r` with `r^2 = a mod p^k`, lifted from the residue in `[1, (p-1)/2]`.
pub fn sqrt_hensel(a: i64, p: u64, k: u32) -> Result<BigInt> {
    let ap = a.rem_euclid(p as i64) as u64;
    if ap == 0 {
        return Err(Error::NotSplit { a, p });
    }
    let mut r0 = sqrt_mod_p(ap, p).ok_or(Error::NotSplit { a, p })?;
    if r0 > (p - 1) / 2 {
        r0 = p - r0;
    }
    let pb = BigInt::from(p);
    let ab = BigInt::from(a);
    let mut r = BigInt::from(r0);
    let mut modulus = pb.clone();
    for _ in 1..k {
        modulus *= &pb;
        // r <- r - (r^2 - a) / (2 r)
        let f = (&r * &r - &ab).mod_floor(&modulus);
        let inv = mod_inverse(&(BigInt::from(2) * &r), &modulus).expect("2r is a unit");
        r = (&r - f * inv).mod_floor(&modulus);
    }
    Ok(r)
}

pub fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Reduction of a rational into `Z / m` when its denominator is a unit.
pub fn reduce_rational(x: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(x.denom(), m)?;
    Some((x.numer() * inv).mod_floor(m))
}

/// 2x2 matrix over `Z / p^k`, times `p^scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicMatrix {
    pub entries: [[BigInt; 2]; 2],
    pub p: u64,
    pub k: u32,
    pub scale: i32,
}

impl PadicMatrix {
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k)
    }

    pub fn mul(&self, o: &PadicMatrix) -> PadicMatrix {
        let m = self.modulus();
        let e = &self.entries;
        let f = &o.entries;
        let entries =
            std::array::from_fn(|i| std::array::from_fn(|j| (&e[i][0] * &f[0][j] + &e[i][1] * &f[1][j]).mod_floor(&m)));
        PadicMatrix { entries, p: self.p, k: self.k, scale: self.scale + o.scale }
    }

    pub fn det(&self) -> BigInt {
        let e = &self.entries;
        (&e[0][0] * &e[1][1] - &e[0][1] * &e[1][0]).mod_floor(&self.modulus())
    }

    pub fn trace(&self) -> BigInt {
        (&self.entries[0][0] + &self.entries[1][1]).mod_floor(&self.modulus())
    }

    /// Entries reduced modulo `p`.
    pub fn reduce(&self) -> [[u64; 2]; 2] {
        let p = BigInt::from(self.p);
        self.entries.clone().map(|r| r.map(|x| x.mod_floor(&p).to_u64().expect("residue fits")))
    }
}

/// `x0 + x1 i + x2 j + x3 k` maps to
/// `[[x0 + x1 r, x2 + x3 r], [b (x2 - x3 r), x0 - x1 r]]` with `r^2 = a`.
pub fn embed(alg: &Algebra, x: &Quaternion, p: u64, k: u32) -> Result<PadicMatrix> {
    let r = BigRational::from_integer(sqrt_hensel(alg.a, p, k)?);
    let b = BigRational::from_integer(BigInt::from(alg.b));
    let [x0, x1, x2, x3] = &x.0;
    let raw = [[x0 + x1 * &r, x2 + x3 * &r], [&b * (x2 - x3 * &r), x0 - x1 * &r]];
    let m = BigInt::from(p).pow(k);
    let mut entries: [[BigInt; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            entries[i][j] = reduce_rational(&raw[i][j], &m).ok_or_else(|| Error::DenominatorNotUnit(x.to_string()))?;
        }
    }
    Ok(PadicMatrix { entries, p, k, scale: 0 })
}

/// Entries of the embedding as `u + v*s` with `s` standing for the square root
/// of `a`; each pair is `(u, v)`.
pub fn embed_symbolic(alg: &Algebra, x: &Quaternion) -> [[(BigRational, BigRational); 2]; 2] {
    let b = BigRational::from_integer(BigInt::from(alg.b));
    let [x0, x1, x2, x3] = x.0.clone();
    [[(x0.clone(), x1.clone()), (x2.clone(), x3.clone())], [(&b * &x2, -(&b * &x3)), (x0, -x1)]]
}

/// A point of `P^1(F_p)`: `(x:1)` or `(1:0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(u64),
    Infinity,
}

impl ProjPoint {
    /// Normalizes a nonzero vector over `F_p`.
    pub fn from_vector(x: u64, y: u64, p: u64) -> Option<ProjPoint> {
        let (x, y) = (x % p, y % p);
        match (x, y) {
            (0, 0) => None,
            (_, 0) => Some(ProjPoint::Infinity),
            _ => Some(ProjPoint::Finite(x * pow_mod(y, p - 2, p) % p)),
        }
    }

    /// Position in `0, 1, ..., p - 1, infinity`.
    pub fn index(&self, p: u64) -> usize {
        match self {
            ProjPoint::Finite(x) => *x as usize,
            ProjPoint::Infinity => p as usize,
        }
    }

    pub fn from_index(i: usize, p: u64) -> ProjPoint {
        if i as u64 == p {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(i as u64)
        }
    }

    pub fn all(p: u64) -> Vec<ProjPoint> {
        (0..=p as usize).map(|i| ProjPoint::from_index(i, p)).collect()
    }

    /// Möbius action of a matrix over `F_p`.
    pub fn act(&self, m: &[[u64; 2]; 2], p: u64) -> ProjPoint {
        let (x, y) = match self {
            ProjPoint::Finite(x) => (*x as u128, 1u128),
            ProjPoint::Infinity => (1, 0),
        };
        let pp = p as u128;
        let nx = (m[0][0] as u128 * x + m[0][1] as u128 * y) % pp;
        let ny = (m[1][0] as u128 * x + m[1][1] as u128 * y) % pp;
        ProjPoint::from_vector(nx as u64, ny as u64, p).expect("invertible matrix")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}:1"),
            ProjPoint::Infinity => write!(f, "1:0"),
        }
    }
}

/// Reductions of the attracting and repelling fixed points of an element of
/// norm `p`: the image and the kernel of its rank-one reduction.
pub fn fixed_point_reductions(alg: &Algebra, x: &Quaternion, p: u64) -> Result<(ProjPoint, ProjPoint)> {
    let m = embed(alg, x, p, 1)?;
    if !m.det().is_zero() {
        return Err(Error::Invariant(format!("{x} does not have norm divisible by p")));
    }
    if m.trace().is_zero() {
        return Err(Error::DegenerateReduction(x.to_string()));
    }
    let e = m.reduce();
    let col = if (e[0][0], e[1][0]) != (0, 0) { (e[0][0], e[1][0]) } else { (e[0][1], e[1][1]) };
    let row = if (e[0][0], e[0][1]) != (0, 0) { (e[0][0], e[0][1]) } else { (e[1][0], e[1][1]) };
    let attracting = ProjPoint::from_vector(col.0, col.1, p).expect("rank one");
    let repelling = ProjPoint::from_vector(row.1, (p - row.0) % p, p).expect("rank one");
    Ok((attracting, repelling))
}

/// Permutation of `P^1(F_p)` (by [`ProjPoint::index`]) induced by a unit.
pub fn unit_permutation(alg: &Algebra, u: &Quaternion, p: u64) -> Result<Vec<usize>> {
    let m = embed(alg, u, p, 1)?;
    if m.det().is_zero() {
        return Err(Error::Invariant(format!("{u} is not invertible mod p")));
    }
    let e = m.reduce();
    Ok(ProjPoint::all(p).iter().map(|x| x.act(&e, p).index(p)).collect())
}
