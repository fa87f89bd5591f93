//! Closed forms for the edge counts and genera of the quotient graphs, the
//! elliptic-point counts they depend on, and the Riemann-Hurwitz identity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;

use crate::arithmetic::UnitGroup;
use crate::error::{invariant, Error, Result};
use crate::generators::{check_prime, primary_elements};
use crate::order::{order_lookup, EichlerOrder};
use crate::quaternion::Quaternion;

/// Legendre symbol `(n/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(n: i64, p: u64) -> i32 {
    let m = p as i128;
    let mut base = (n as i128).rem_euclid(m);
    if base == 0 {
        return 0;
    }
    let (mut r, mut e) = (1i128, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormReport {
    /// Oriented edges of length 1, 2 and 3.
    pub edge_counts: [i64; 3],
    pub genus_quotient: i64,
    pub genus_plus: i64,
    pub order_two: Option<i64>,
    /// Elliptic-point counts keyed by the order of the stabilizer.
    pub elliptic_counts: BTreeMap<u32, i64>,
}

fn exact_div(num: i64, den: i64, d: u64, n: u64, p: u64) -> Result<i64> {
    if num % den != 0 || num < 0 {
        return Err(Error::Inadmissible { d, n, p });
    }
    Ok(num / den)
}

/// Oriented edge counts of the quotient graph by length 1, 2, 3.
pub fn edge_count_formula(d: u64, n: u64, p: u64) -> Result<(i64, i64, i64)> {
    order_lookup(d, n)?;
    let pi = p as i64;
    let l3 = legendre(3, p) as i64;
    let lm3 = legendre(-3, p) as i64;
    let div = |num, den| exact_div(num, den, d, n, p);
    Ok(match (d, n) {
        (2, 1) => (div(pi - 9 - 4 * l3, 12)?, 1, 1 + l3),
        (2, 3) => (div(pi - l3, 3)?, 0, 1 + l3),
        (3, 1) => (div(pi - 6 - l3, 6)?, 2, div(1 + l3, 2)?),
        (3, 2) => (div(pi - 1, 2)?, 2, 0),
        (5, 1) => (div(pi - lm3, 3)?, 0, 1 + lm3),
        _ => (pi + 1, 0, 0),
    })
}

/// Linear conditions on `{1,i,j,k}` coordinates defining each `w_2` term.
type Filter = fn(&[BigInt; 4]) -> bool;

fn order_two_filters(d: u64, n: u64) -> Option<Vec<Filter>> {
    fn a1(c: &[BigInt; 4]) -> bool {
        c[1].is_zero()
    }
    fn a2(c: &[BigInt; 4]) -> bool {
        c[2].is_zero()
    }
    fn a3(c: &[BigInt; 4]) -> bool {
        c[3].is_zero()
    }
    fn plus(c: &[BigInt; 4]) -> bool {
        (&c[1] + BigInt::from(3) * &c[2]).is_zero()
    }
    fn minus(c: &[BigInt; 4]) -> bool {
        (&c[1] - BigInt::from(3) * &c[2]).is_zero()
    }
    match (d, n) {
        (2, 1) => Some(vec![a1, a2, a3]),
        (3, 1) => Some(vec![a1, plus, minus]),
        (3, 2) => Some(vec![minus]),
        _ => None,
    }
}

/// The individual `w_2` terms: half the number of primary elements of norm
/// `p` satisfying each linear condition.
pub fn order_two_terms(o: &EichlerOrder, modulus: &Quaternion, p: u64) -> Result<Vec<i64>> {
    let (d, n) = (o.discriminant(), o.level);
    let filters = order_two_filters(d, n).ok_or(Error::NoOrderTwoTerm { d, n })?;
    check_prime(o, p)?;
    let elems = primary_elements(o, modulus, p)?;
    // Conditions are homogeneous, so clearing denominators does not change them.
    let cleared: Vec<[BigInt; 4]> = elems.iter().map(|x| x.cleared().0).collect();
    let mut out = Vec::with_capacity(filters.len());
    for f in filters {
        let count = cleared.iter().filter(|c| f(c)).count() as i64;
        if count % 2 != 0 {
            return invariant("odd count in a order_two term");
        }
        out.push(count / 2);
    }
    Ok(out)
}

pub fn order_two_points(o: &EichlerOrder, modulus: &Quaternion, p: u64) -> Result<i64> {
    Ok(order_two_terms(o, modulus, p)?.iter().sum())
}

/// Genus of the quotient graph from the closed form, given `order_two` where the
/// family needs it.
pub fn genus_formula_with(d: u64, n: u64, p: u64, order_two: Option<i64>) -> Result<i64> {
    order_lookup(d, n)?;
    let pi = p as i64;
    let l3 = legendre(3, p) as i64;
    let lm3 = legendre(-3, p) as i64;
    let div = |num, den| exact_div(num, den, d, n, p);
    let need = || order_two.ok_or(Error::NoOrderTwoTerm { d, n });
    match (d, n) {
        (2, 1) => div(pi + 23 - need()? - 8 * (1 - l3), 24),
        (2, 3) | (5, 1) => div(pi + 5 - 2 * (1 - lm3), 6),
        (3, 1) => div(pi + 11 - need()? - 2 * (1 - l3), 12),
        (3, 2) => div(pi + 3 - need()?, 4),
        _ => div(pi + 1, 2),
    }
}

/// Genus of the quotient graph, computing `order_two` by enumeration.
pub fn genus_formula(d: u64, n: u64, p: u64) -> Result<i64> {
    let o = order_lookup(d, n)?;
    let order_two = if order_two_filters(d, n).is_some() { Some(order_two_points(&o, &o.modulus, p)?) } else { None };
    genus_formula_with(d, n, p, order_two)
}

/// Elliptic-point counts: order-two points are counted by `order_two`, order-three
/// points by `2 (1 - (-3/p))` per cyclic subgroup of order three.
pub fn elliptic_counts(
    o: &EichlerOrder,
    units: &UnitGroup,
    p: u64,
    order_two: Option<i64>,
) -> Result<BTreeMap<u32, i64>> {
    let mut out = BTreeMap::new();
    if units.cyclic_subgroups_of_order(o, 2) > 0 {
        out.insert(2, order_two.ok_or(Error::NoOrderTwoTerm { d: o.discriminant(), n: o.level })?);
    }
    let n3 = units.cyclic_subgroups_of_order(o, 3) as i64;
    if n3 > 0 {
        out.insert(3, 2 * n3 * (1 - legendre(-3, p) as i64));
    }
    Ok(out)
}

/// `p - 1 = #U (2g - 2) + sum w_d`.
pub fn riemann_hurwitz_check(p: u64, unit_order: usize, genus: i64, elliptic_counts: &BTreeMap<u32, i64>) -> bool {
    p as i64 - 1 == unit_order as i64 * (2 * genus - 2) + elliptic_counts.values().sum::<i64>()
}

pub fn closed_form_report(
    o: &EichlerOrder,
    modulus: &Quaternion,
    units: &UnitGroup,
    p: u64,
) -> Result<ClosedFormReport> {
    let (d, n) = (o.discriminant(), o.level);
    let (c1, c2, c3) = edge_count_formula(d, n, p)?;
    let order_two = if order_two_filters(d, n).is_some() { Some(order_two_points(o, modulus, p)?) } else { None };
    let genus_quotient = genus_formula_with(d, n, p, order_two)?;
    let w = elliptic_counts(o, units, p, order_two)?;
    if !riemann_hurwitz_check(p, units.order, genus_quotient, &w) {
        return invariant("Riemann-Hurwitz identity fails");
    }
    Ok(ClosedFormReport {
        edge_counts: [c1, c2, c3],
        genus_quotient,
        genus_plus: c1 + c2 + c3 - 1,
        order_two,
        elliptic_counts: w,
    })
}

/// `order_two` by counting representations by ternary forms with parity
/// conditions, independent of the order enumeration. Available for the two
/// maximal orders with nontrivial order-two units.
pub fn order_two_points_by_squares(d: u64, n: u64, p: u64) -> Result<i64> {
    let pi = p as i64;
    let r = pi.sqrt() + 1;
    let odd = |x: i64| x.rem_euclid(2) == 1;
    let even = |x: i64| x.rem_euclid(2) == 0;
    match (d, n) {
        (2, 1) => {
            let mut w = 0;
            for a0 in -r..=r {
                for x in -r..=r {
                    for y in -r..=r {
                        if a0 * a0 + x * x + y * y == pi && odd(a0) && even(x) && even(y) {
                            w += 1;
                        }
                    }
                }
            }
            // The three terms differ only by which coordinate is dropped.
            Ok(3 * w / 2)
        }
        (3, 1) => {
            let mut w1 = 0;
            let mut w23 = [0i64; 2];
            for a0 in -r..=r {
                for a2 in -r..=r {
                    for a3 in -r..=r {
                        let base = a0 * a0 + 3 * (a2 * a2 + a3 * a3);
                        if base == pi && odd(a0 + a3) && even(a2) {
                            w1 += 1;
                        }
                        for (k, s) in [3i64, -3].into_iter().enumerate() {
                            let a1 = -s * a2;
                            if base + a1 * a1 == pi && odd(a0 + a3) && even(a1 + a2) {
                                w23[k] += 1;
                            }
                        }
                    }
                }
            }
            Ok(w1 / 2 + w23[0] / 2 + w23[1] / 2)
        }
        _ => Err(Error::NoOrderTwoTerm { d, n }),
    }
}
