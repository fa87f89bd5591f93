//! Exact Fincke-Pohst enumeration of lattice points on a shifted ellipsoid
//! shell `Q(y - c) = n` for a positive definite rational quadratic form `Q`.

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invariant, Result};
use crate::linalg::{Mat4, Vec4};
use num_rational::BigRational;

type R = Ratio<i128>;

fn small(x: &BigRational) -> Result<R> {
    match (x.numer().to_i128(), x.denom().to_i128()) {
        (Some(n), Some(d)) => Ok(R::new(n, d)),
        _ => invariant("enumeration input exceeds 128-bit range"),
    }
}

fn to_f64(x: &R) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `Q(z) = sum_i d_i (z_i + sum_{j>i} mu_ij z_j)^2`.
struct Decomposition {
    diag: [R; 4],
    mu: [[R; 4]; 4],
}

fn decompose(gram: &Mat4) -> Result<Decomposition> {
    let mut a: [[R; 4]; 4] = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = small(&gram[i][j])?;
        }
    }
    for i in 0..4 {
        if a[i][i] <= R::zero() {
            return invariant("quadratic form is not positive definite");
        }
        for j in i + 1..4 {
            a[j][i] = a[i][j];
            let pivot = a[i][i];
            a[i][j] /= pivot;
        }
        for k in i + 1..4 {
            for l in k..4 {
                let t = a[k][i] * a[i][l];
                a[k][l] -= t;
            }
        }
    }
    let diag = std::array::from_fn(|i| a[i][i]);
    let mut mu = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            mu[i][j] = a[i][j];
        }
    }
    Ok(Decomposition { diag, mu })
}

fn rational_sqrt(x: &R) -> Option<R> {
    if *x < R::zero() {
        return None;
    }
    let (n, d) = (*x.numer(), *x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (rn * rn == n && rd * rd == d).then(|| R::new(rn, rd))
}

/// Integer range `{y : (y - m)^2 <= s}`, computed exactly.
fn integer_window(m: R, s: R) -> Option<(i128, i128)> {
    let fits = |y: i128| {
        let d = R::from_integer(y) - m;
        d * d <= s
    };
    let root = to_f64(&s).max(0.0).sqrt();
    let mf = to_f64(&m);
    let mut hi = (mf + root).floor() as i128;
    let up = |y: i128| R::from_integer(y) <= m || fits(y);
    while up(hi + 1) {
        hi += 1;
    }
    while !up(hi) {
        hi -= 1;
    }
    let mut lo = (mf - root).ceil() as i128;
    let down = |y: i128| R::from_integer(y) >= m || fits(y);
    while down(lo - 1) {
        lo -= 1;
    }
    while !down(lo) {
        lo += 1;
    }
    (lo <= hi && fits(lo)).then_some((lo, hi))
}

/// All `y` in `Z^4` with `(y - center)^T gram (y - center) = target`, sorted.
pub fn enumerate_shell(gram: &Mat4, center: &Vec4, target: &BigRational) -> Result<Vec<[i64; 4]>> {
    let dec = decompose(gram)?;
    let c: [R; 4] = [small(&center[0])?, small(&center[1])?, small(&center[2])?, small(&center[3])?];
    let n = small(target)?;
    let mut out = Vec::new();
    if n < R::zero() {
        return Ok(out);
    }
    let mut z = [R::zero(); 4];
    let mut y = [0i64; 4];
    descend(&dec, &c, 3, n, &mut z, &mut y, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn descend(
    dec: &Decomposition,
    c: &[R; 4],
    level: usize,
    remaining: R,
    z: &mut [R; 4],
    y: &mut [i64; 4],
    out: &mut Vec<[i64; 4]>,
) {
    // Center of the admissible interval for y[level].
    let mut m = c[level];
    for j in level + 1..4 {
        m -= dec.mu[level][j] * z[j];
    }
    let s = remaining / dec.diag[level];
    if level == 0 {
        let Some(r) = rational_sqrt(&s) else { return };
        let mut roots = vec![m + r];
        if !r.is_zero() {
            roots.push(m - r);
        }
        for root in roots {
            if root.is_integer() {
                y[0] = root.to_integer() as i64;
                out.push(*y);
            }
        }
        return;
    }
    let Some((lo, hi)) = integer_window(m, s) else { return };
    for v in lo..=hi {
        let u = R::from_integer(v) - m;
        let used = dec.diag[level] * u * u;
        y[level] = v as i64;
        z[level] = R::from_integer(v) - c[level];
        descend(dec, c, level - 1, remaining - used, z, y, out);
    }
}
