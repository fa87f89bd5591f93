//! Small exact linear algebra: 4x4 rational matrices and integer lattices in
//! Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Vec4 = [BigRational; 4];
pub type Mat4 = [[BigRational; 4]; 4];
pub type IVec4 = [BigInt; 4];

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_mat() -> Mat4 {
    std::array::from_fn(|_| std::array::from_fn(|_| BigRational::zero()))
}

pub fn identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { q(1) } else { q(0) }))
}

/// Row vector times matrix.
pub fn vec_mat(v: &Vec4, m: &Mat4) -> Vec4 {
    std::array::from_fn(|j| (0..4).fold(BigRational::zero(), |acc, i| acc + &v[i] * &m[i][j]))
}

pub fn mat_mul(x: &Mat4, y: &Mat4) -> Mat4 {
    std::array::from_fn(|i| vec_mat(&x[i], y))
}

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse(m: &Mat4) -> Option<Mat4> {
    let mut a = m.clone();
    let mut inv = identity();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col].clone();
        for j in 0..4 {
            a[col][j] = &a[col][j] / &d;
            inv[col][j] = &inv[col][j] / &d;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..4 {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Determinant of the leading `n x n` block.
pub fn leading_minor(m: &Mat4, n: usize) -> BigRational {
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| m[i][..n].to_vec()).collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let d = a[col][col].clone();
        det *= &d;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &d;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

pub fn det(m: &Mat4) -> BigRational {
    leading_minor(m, 4)
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Full-rank sublattice of `Z^4`, stored as an upper-triangular Hermite basis
/// with positive pivots and entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntLattice {
    rows: [IVec4; 4],
}

impl IntLattice {
    /// Hermite normal form of the lattice spanned by `gens`; `None` if the
    /// span has rank below four.
    pub fn from_generators(gens: &[IVec4]) -> Option<Self> {
        let mut rows: Vec<IVec4> = gens.to_vec();
        let mut basis: Vec<IVec4> = Vec::with_capacity(4);
        for col in 0..4 {
            // Euclid on the column until at most one row is nonzero there.
            loop {
                let mut nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by(|&x, &y| rows[x][col].abs().cmp(&rows[y][col].abs()));
                let small = nz[0];
                let pivot = rows[small].clone();
                for &r in &nz[1..] {
                    let f = rows[r][col].div_floor(&pivot[col]);
                    for j in 0..4 {
                        let t = &f * &pivot[j];
                        rows[r][j] -= t;
                    }
                }
            }
            let pos = rows.iter().position(|r| !r[col].is_zero())?;
            let mut row = rows.swap_remove(pos);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            basis.push(row);
        }
        let mut rows: [IVec4; 4] = basis.try_into().ok()?;
        for col in 0..4 {
            for r in 0..col {
                let f = rows[r][col].div_floor(&rows[col][col]);
                if !f.is_zero() {
                    let pivot = rows[col].clone();
                    for j in 0..4 {
                        let t = &f * &pivot[j];
                        rows[r][j] -= t;
                    }
                }
            }
        }
        Some(IntLattice { rows })
    }

    pub fn rows(&self) -> &[IVec4; 4] {
        &self.rows
    }

    /// Index in `Z^4`: product of the pivots.
    pub fn index(&self) -> BigInt {
        (0..4).fold(BigInt::one(), |acc, i| acc * &self.rows[i][i])
    }

    /// Canonical coset representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &IVec4) -> IVec4 {
        let mut v = v.clone();
        for col in 0..4 {
            let f = v[col].div_floor(&self.rows[col][col]);
            if !f.is_zero() {
                for j in col..4 {
                    let t = &f * &self.rows[col][j];
                    v[j] -= t;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &IVec4) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Rational coordinates of `v` with respect to the Hermite basis.
    pub fn coordinates(&self, v: &IVec4) -> Vec4 {
        let mut out: Vec4 = std::array::from_fn(|_| BigRational::zero());
        let mut rest: Vec4 = std::array::from_fn(|i| BigRational::from_integer(v[i].clone()));
        for col in 0..4 {
            let c = &rest[col] / BigRational::from_integer(self.rows[col][col].clone());
            for j in col..4 {
                let t = &c * BigRational::from_integer(self.rows[col][j].clone());
                rest[j] -= t;
            }
            out[col] = c;
        }
        out
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

pub fn ivec(v: [i64; 4]) -> IVec4 {
    v.map(BigInt::from)
}
