//! The ten definite Eichler orders of class number one that admit an element
//! with the right-unit property.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invariant, Error, Result};
use crate::linalg::{self, exact_isqrt, IVec4, IntLattice, Mat4};
use crate::quaternion::{make_algebra, Algebra, Quaternion};

/// Every `(D, N)` with a built-in order, in table order.
pub const FAMILIES: [(u64, u64); 10] =
    [(2, 1), (2, 3), (2, 9), (2, 11), (3, 1), (3, 2), (3, 4), (5, 1), (5, 2), (13, 1)];

#[derive(Clone, Debug)]
pub struct EichlerOrder {
    pub algebra: Algebra,
    pub level: u64,
    /// Rows are the basis elements.
    pub basis: [Quaternion; 4],
    pub modulus: Quaternion,
    /// `#(O^x / Z^x)`.
    pub unit_group_order: usize,
    /// One-sided ideal class number; always one for the built-in orders.
    pub class_number: u32,
    basis_inv: Mat4,
}

struct Row {
    d: u64,
    n: u64,
    a: i64,
    b: i64,
    den: i64,
    basis: [[i64; 4]; 4],
    modulus_den: i64,
    modulus: [i64; 4],
    units: usize,
}

#[rustfmt::skip]
const TABLE: [Row; 10] = [
    Row { d: 2, n: 1, a: -1, b: -1, den: 2,
          basis: [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [1, 1, 1, 1]],
          modulus_den: 1, modulus: [2, 0, 0, 0], units: 12 },
    Row { d: 2, n: 3, a: -1, b: -1, den: 2,
          basis: [[2, 0, 0, 0], [0, 6, 0, 0], [0, -4, 2, 0], [1, -1, 1, 1]],
          modulus_den: 1, modulus: [0, -1, 0, -1], units: 3 },
    Row { d: 2, n: 9, a: -1, b: -1, den: 2,
          basis: [[2, 0, 0, 0], [0, 18, 0, 0], [0, -8, 2, 0], [1, -3, 1, 1]],
          modulus_den: 1, modulus: [1, 0, 0, 0], units: 1 },
    Row { d: 2, n: 11, a: -1, b: -1, den: 2,
          basis: [[2, 0, 0, 0], [0, 22, 0, 0], [0, -14, 2, 0], [1, -3, 1, 1]],
          modulus_den: 1, modulus: [1, 0, 0, 0], units: 1 },
    Row { d: 3, n: 1, a: -1, b: -3, den: 2,
          basis: [[2, 0, 0, 0], [0, 2, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]],
          modulus_den: 1, modulus: [2, 0, 0, 0], units: 6 },
    Row { d: 3, n: 2, a: -1, b: -3, den: 2,
          basis: [[2, 0, 0, 0], [0, 4, 0, 0], [0, -1, 1, 0], [1, -2, 0, 1]],
          modulus_den: 2, modulus: [-1, -1, -1, 1], units: 2 },
    Row { d: 3, n: 4, a: -1, b: -3, den: 2,
          basis: [[2, 0, 0, 0], [0, 8, 0, 0], [0, -5, 1, 0], [1, -6, 0, 1]],
          modulus_den: 1, modulus: [1, 0, 0, 0], units: 1 },
    Row { d: 5, n: 1, a: -2, b: -5, den: 4,
          basis: [[4, 0, 0, 0], [2, 2, 2, 0], [0, 0, 4, 0], [2, 1, 0, 1]],
          modulus_den: 2, modulus: [-1, 1, -1, 0], units: 3 },
    Row { d: 5, n: 2, a: -2, b: -5, den: 4,
          basis: [[4, 0, 0, 0], [4, 4, 4, 0], [-2, -2, 2, 0], [0, -1, -2, 1]],
          modulus_den: 1, modulus: [1, 0, 0, 0], units: 1 },
    Row { d: 13, n: 1, a: -2, b: -13, den: 4,
          basis: [[4, 0, 0, 0], [2, 2, 2, 0], [0, 0, 4, 0], [2, 1, 0, 1]],
          modulus_den: 1, modulus: [1, 0, 0, 0], units: 1 },
];

/// Built-in order of discriminant `d` and level `n`.
pub fn order_lookup(d: u64, n: u64) -> Result<EichlerOrder> {
    let Some(row) = TABLE.iter().find(|r| r.d == d && r.n == n) else {
        return Err(if (d, n) == (2, 5) || (d, n) == (7, 1) {
            Error::NoModulus { d, n }
        } else {
            Error::ClassNumberNotOne { d, n }
        });
    };
    let algebra = make_algebra(row.a, row.b)?;
    let basis = row.basis.map(|r| Quaternion::from_fracs(r, row.den));
    EichlerOrder::new(algebra, n, basis, Quaternion::from_fracs(row.modulus, row.modulus_den), row.units)
}

impl EichlerOrder {
    pub fn new(
        algebra: Algebra,
        level: u64,
        basis: [Quaternion; 4],
        modulus: Quaternion,
        unit_group_order: usize,
    ) -> Result<Self> {
        let m: Mat4 = std::array::from_fn(|i| basis[i].0.clone());
        let Some(basis_inv) = linalg::inverse(&m) else {
            return invariant("order basis is singular");
        };
        Ok(EichlerOrder { algebra, level, basis, modulus, unit_group_order, class_number: 1, basis_inv })
    }

    pub fn discriminant(&self) -> u64 {
        self.algebra.discriminant
    }

    /// `D * N`.
    pub fn dn(&self) -> u64 {
        self.algebra.discriminant * self.level
    }

    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        self.algebra.mul(x, y)
    }

    pub fn norm(&self, x: &Quaternion) -> BigRational {
        self.algebra.norm(x)
    }

    /// Coordinates of `x` in the order basis (rational in general).
    pub fn coords_in_order(&self, x: &Quaternion) -> [BigRational; 4] {
        linalg::vec_mat(&x.0, &self.basis_inv)
    }

    /// Integer coordinates if `x` lies in the order.
    pub fn int_coords(&self, x: &Quaternion) -> Option<IVec4> {
        let c = self.coords_in_order(x);
        c.iter().all(BigRational::is_integer).then(|| c.map(|v| v.to_integer()))
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.int_coords(x).is_some()
    }

    pub fn element(&self, c: &IVec4) -> Quaternion {
        let mut out = Quaternion::zero();
        for (ci, e) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                out = out.add(&e.scale(&BigRational::from_integer(ci.clone())));
            }
        }
        out
    }

    pub fn element_i64(&self, c: &[i64; 4]) -> Quaternion {
        self.element(&c.map(BigInt::from))
    }

    /// Integral and not divisible by any integer `m > 1` inside the order.
    pub fn is_primitive(&self, x: &Quaternion) -> bool {
        match self.int_coords(x) {
            Some(c) => c.iter().fold(BigInt::zero(), |g, v| g.gcd(v)).is_one(),
            None => false,
        }
    }

    /// Largest `m` with `x / m` in the order (zero for `x = 0`).
    pub fn content(&self, x: &Quaternion) -> Option<BigInt> {
        self.int_coords(x).map(|c| c.iter().fold(BigInt::zero(), |g, v| g.gcd(v)))
    }

    /// Gram matrix `G` with `Nm(sum x_m e_m) = x^T G x`.
    pub fn normic_form(&self) -> Mat4 {
        let half = linalg::frac(1, 2);
        std::array::from_fn(|m| {
            std::array::from_fn(|n| self.mul(&self.basis[m], &self.basis[n].conj()).trace() * &half)
        })
    }

    /// Square root of `|det(Tr(e_m conj(e_n)))|`.
    pub fn reduced_discriminant(&self) -> Result<BigInt> {
        let t: Mat4 =
            std::array::from_fn(|m| std::array::from_fn(|n| self.mul(&self.basis[m], &self.basis[n].conj()).trace()));
        let d = linalg::det(&t);
        if !d.is_integer() {
            return invariant("trace form determinant is not integral");
        }
        match exact_isqrt(&d.to_integer().abs()) {
            Some(r) => Ok(r),
            None => invariant("trace form determinant is not a square"),
        }
    }

    /// Every product of two basis elements lies in the order.
    pub fn is_closed(&self) -> bool {
        self.basis.iter().all(|x| self.basis.iter().all(|y| self.contains(&self.mul(x, y))))
    }

    fn lattice_of(&self, gens: impl IntoIterator<Item = Quaternion>) -> Result<IntLattice> {
        let mut rows = Vec::new();
        for g in gens {
            match self.int_coords(&g) {
                Some(c) => rows.push(c),
                None => return Err(Error::NotInOrder(g.to_string())),
            }
        }
        match IntLattice::from_generators(&rows) {
            Some(l) => Ok(l),
            None => invariant("ideal has rank below four"),
        }
    }

    /// The right ideal `sum g O`, in order coordinates.
    pub fn right_ideal(&self, gens: &[Quaternion]) -> Result<IntLattice> {
        self.lattice_of(gens.iter().flat_map(|g| self.basis.iter().map(move |e| self.mul(g, e))))
    }

    /// The left ideal `sum O g`, in order coordinates.
    pub fn left_ideal(&self, gens: &[Quaternion]) -> Result<IntLattice> {
        self.lattice_of(gens.iter().flat_map(|g| self.basis.iter().map(move |e| self.mul(e, g))))
    }

    /// The sublattice `m O`.
    pub fn scalar_ideal(&self, m: &BigInt) -> IntLattice {
        let rows: Vec<IVec4> =
            (0..4).map(|i| std::array::from_fn(|j| if i == j { m.clone() } else { BigInt::zero() })).collect();
        IntLattice::from_generators(&rows).expect("nonzero scalar ideal")
    }

    /// `x` lies in the sublattice `l` (given in order coordinates).
    pub fn in_lattice(&self, l: &IntLattice, x: &Quaternion) -> bool {
        self.int_coords(x).is_some_and(|c| l.contains(&c))
    }

    /// Integer value of the norm of an order element.
    pub fn int_norm(&self, x: &Quaternion) -> BigInt {
        let n = self.norm(x);
        debug_assert!(n.is_integer());
        n.to_integer()
    }

    /// `2` lies in `modulus O`.
    pub fn two_in_ideal(&self, modulus: &Quaternion) -> Result<bool> {
        let l = self.right_ideal(std::slice::from_ref(modulus))?;
        Ok(l.contains(&self.int_coords(&Quaternion::from_ints([2, 0, 0, 0])).expect("2 is integral")))
    }

    pub fn one_coords(&self) -> IVec4 {
        self.int_coords(&Quaternion::one()).expect("1 lies in every order")
    }

    pub fn is_unit(&self, x: &Quaternion) -> bool {
        self.contains(x) && self.norm(x).is_one()
    }
}
