//! Exact arithmetic in definite quaternion algebras `(a,b/Q)` with
//! `i^2 = a`, `j^2 = b`, `k = ij = -ji`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    pub a: i64,
    pub b: i64,
    /// Product of the finite ramified primes.
    pub discriminant: u64,
}

/// Builds `(a,b/Q)`; the discriminant is computed from Hilbert symbols.
pub fn make_algebra(a: i64, b: i64) -> Result<Algebra> {
    if a >= 0 || b >= 0 {
        return Err(Error::NotDefinite { a, b });
    }
    let mut primes: Vec<i64> = vec![2];
    for n in [a, b] {
        let mut m = n.abs();
        let mut f = 2;
        while f * f <= m {
            while m % f == 0 {
                primes.push(f);
                m /= f;
            }
            f += 1;
        }
        if m > 1 {
            primes.push(m);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let discriminant = primes.into_iter().filter(|&l| hilbert_symbol(a, b, l) == -1).product::<i64>() as u64;
    Ok(Algebra { a, b, discriminant })
}

fn valuation(mut n: i64, l: i64) -> (u32, i64) {
    let mut v = 0;
    while n % l == 0 {
        n /= l;
        v += 1;
    }
    (v, n)
}

fn legendre_small(n: i64, l: i64) -> i64 {
    let r = crate::formulas::legendre(n, l as u64);
    r as i64
}

/// Hilbert symbol `(a,b)_l` for a prime `l`.
fn hilbert_symbol(a: i64, b: i64, l: i64) -> i64 {
    let (al, u) = valuation(a, l);
    let (bl, v) = valuation(b, l);
    if l == 2 {
        let eps = |x: i64| (((x.rem_euclid(8)) - 1) / 2) % 2;
        let omega = |x: i64| ((x.rem_euclid(8) * x.rem_euclid(8) - 1) / 8) % 2;
        let e = eps(u) * eps(v) + al as i64 * omega(v) + bl as i64 * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let sign = if (al * bl) % 2 == 1 && (l - 1) / 2 % 2 == 1 { -1 } else { 1 };
    let mut s = sign;
    if bl % 2 == 1 {
        s *= legendre_small(u, l);
    }
    if al % 2 == 1 {
        s *= legendre_small(v, l);
    }
    s
}

/// Coordinates in the basis `{1, i, j, k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion(pub Vec4);

impl Quaternion {
    pub fn new(c: Vec4) -> Self {
        Quaternion(c)
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion(c.map(q))
    }

    /// All four coordinates over a common denominator.
    pub fn from_fracs(num: [i64; 4], den: i64) -> Self {
        Quaternion(num.map(|n| BigRational::new(BigInt::from(n), BigInt::from(den))))
    }

    pub fn scalar(x: BigRational) -> Self {
        Quaternion([x, q(0), q(0), q(0)])
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn zero() -> Self {
        Self::from_ints([0, 0, 0, 0])
    }

    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn conj(&self) -> Self {
        let c = &self.0;
        Quaternion([c[0].clone(), -c[1].clone(), -c[2].clone(), -c[3].clone()])
    }

    pub fn trace(&self) -> BigRational {
        &self.0[0] * q(2)
    }

    pub fn add(&self, o: &Self) -> Self {
        Quaternion(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quaternion(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn neg(&self) -> Self {
        Quaternion(self.0.clone().map(|x| -x))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Quaternion(std::array::from_fn(|i| &self.0[i] * s))
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Numerators over the common denominator.
    pub fn cleared(&self) -> ([BigInt; 4], BigInt) {
        let d = self.denominator();
        let nums = std::array::from_fn(|i| (&self.0[i] * BigRational::from_integer(d.clone())).to_integer());
        (nums, d)
    }

    /// Sign representative of `{q, -q}` whose first nonzero coordinate is positive.
    pub fn canonical_sign(&self) -> Self {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl Ord for Quaternion {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().cmp(other.0.iter())
    }
}

impl PartialOrd for Quaternion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (x, name) in self.0.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            let neg = x.is_negative();
            let abs = x.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{abs}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Algebra {
    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let (a, b) = (q(self.a), q(self.b));
        let ab = &a * &b;
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        Quaternion([
            x0 * y0 + &a * (x1 * y1) + &b * (x2 * y2) - &ab * (x3 * y3),
            x0 * y1 + x1 * y0 - &b * (x2 * y3) + &b * (x3 * y2),
            x0 * y2 + x2 * y0 + &a * (x1 * y3) - &a * (x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn norm(&self, x: &Quaternion) -> BigRational {
        let [x0, x1, x2, x3] = &x.0;
        let (a, b) = (q(self.a), q(self.b));
        x0 * x0 - &a * (x1 * x1) - &b * (x2 * x2) + &a * &b * (x3 * x3)
    }

    /// `(conjugate, norm, trace)`.
    pub fn invariants_of(&self, x: &Quaternion) -> (Quaternion, BigRational, BigRational) {
        (x.conj(), self.norm(x), x.trace())
    }

    pub fn inverse(&self, x: &Quaternion) -> Option<Quaternion> {
        let n = self.norm(x);
        (!n.is_zero()).then(|| x.conj().scale(&n.recip()))
    }
}
