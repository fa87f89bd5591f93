//! The boundary pairing of the fundamental domain and the reduction graphs
//! with lengths built from it.

use std::collections::BTreeMap;

use crate::arithmetic::UnitGroup;
use crate::error::{invariant, Error, Result};
use crate::generators::GeneratorSet;
use crate::padic::{fixed_point_reductions, unit_permutation, ProjPoint};
use crate::quaternion::Algebra;

/// Boundary balls have radius `|p|^(RADIUS_EXPONENT)`, that is `1/sqrt(p)`.
pub const RADIUS_EXPONENT: (u32, u32) = (1, 2);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    /// Attracting fixed point of the generator.
    pub attracting: ProjPoint,
    /// Attracting fixed point of its inverse.
    pub repelling: ProjPoint,
    /// Index into the impure representatives.
    pub generator: usize,
}

impl Pair {
    pub fn unordered(&self) -> (ProjPoint, ProjPoint) {
        (self.attracting.min(self.repelling), self.attracting.max(self.repelling))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    pub p: u64,
    /// Sorted by the smaller point of each pair.
    pub pairs: Vec<Pair>,
    /// `involution[x.index(p)]` is the index of the partner of `x`.
    pub involution: Vec<usize>,
    pub radius_exponent: (u32, u32),
}

impl PairingTable {
    pub fn partner(&self, x: ProjPoint) -> ProjPoint {
        ProjPoint::from_index(self.involution[x.index(self.p)], self.p)
    }

    pub fn unordered_pairs(&self) -> Vec<(ProjPoint, ProjPoint)> {
        self.pairs.iter().map(Pair::unordered).collect()
    }
}

pub fn schottky_pairing(alg: &Algebra, gs: &GeneratorSet) -> Result<PairingTable> {
    if gs.pure_count != 0 {
        return Err(Error::NotSchottky { pure: gs.pure_count });
    }
    let p = gs.p;
    let n = p as usize + 1;
    let mut involution = vec![usize::MAX; n];
    let mut pairs = Vec::with_capacity(gs.impure_count);
    for (g, gamma) in gs.impure_reps.iter().enumerate() {
        let (att, rep) = fixed_point_reductions(alg, gamma, p)?;
        let (inv_att, inv_rep) = fixed_point_reductions(alg, &gamma.conj(), p)?;
        if inv_att != rep || inv_rep != att {
            return invariant(format!("fixed points of {gamma} and its inverse do not swap"));
        }
        let (a, b) = (att.index(p), rep.index(p));
        if a == b || involution[a] != usize::MAX || involution[b] != usize::MAX {
            return invariant(format!("pairing point of {gamma} is repeated"));
        }
        involution[a] = b;
        involution[b] = a;
        pairs.push(Pair { attracting: att, repelling: rep, generator: g });
    }
    if involution.contains(&usize::MAX) {
        return invariant("pairing does not cover the projective line");
    }
    pairs.sort_by_key(|x| x.unordered());
    Ok(PairingTable { p, pairs, involution, radius_exponent: RADIUS_EXPONENT })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// Source equals target and the reverse is a different edge.
    Loop,
    /// The edge is its own reverse.
    AllerRetour,
    /// Source and target differ.
    Link,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Loop => "loop",
            EdgeKind::AllerRetour => "aller-retour",
            EdgeKind::Link => "link",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub length: usize,
    /// Index of the reverse oriented edge.
    pub reverse: usize,
    pub kind: EdgeKind,
    /// Ends of the star of the base vertex represented by this edge, sorted.
    pub label: Vec<ProjPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthGraph {
    pub vertices: Vec<Vertex>,
    /// Oriented edges.
    pub edges: Vec<Edge>,
}

impl LengthGraph {
    /// First Betti number: unoriented edges that are not their own reverse,
    /// minus vertices, plus connected components.
    pub fn betti_number(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        let mut unoriented = 0;
        for (i, e) in self.edges.iter().enumerate() {
            if e.reverse != i && i < e.reverse {
                unoriented += 1;
                let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
                parent[a] = b;
            }
        }
        let components = (0..self.vertices.len()).filter(|&v| find(&mut parent, v) == v).count();
        unoriented + components - self.vertices.len()
    }

    /// Number of oriented edges of each length.
    pub fn length_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            *out.entry(e.length).or_insert(0) += 1;
        }
        out
    }

    /// `c_n`: oriented edges of length `n`.
    pub fn edges_of_length(&self, n: usize) -> usize {
        self.edges.iter().filter(|e| e.length == n).count()
    }

    /// Unordered edge pairs `{e, reverse(e)}` with their kinds and the union
    /// of their labels.
    pub fn unoriented(&self) -> Vec<(EdgeKind, Vec<ProjPoint>, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if i <= e.reverse {
                let mut label = e.label.clone();
                if i != e.reverse {
                    label.extend(self.edges[e.reverse].label.iter().copied());
                    label.sort();
                }
                out.push((e.kind, label, e.length));
            }
        }
        out
    }

    /// `sum over edges at v of length(v) / length(e)`.
    pub fn star_sum(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v).map(|e| self.vertices[v].length / e.length).sum()
    }

    fn check(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            let r = &self.edges[e.reverse];
            if r.reverse != i || r.source != e.target || r.target != e.source || r.length != e.length {
                return invariant("edge reversal is inconsistent");
            }
            if !self.vertices[e.source].length.is_multiple_of(e.length) {
                return invariant("edge length does not divide vertex length");
            }
        }
        Ok(())
    }
}

/// One vertex with a loop for every pair: the rose with `(p+1)/2` petals.
pub fn mumford_graph(pt: &PairingTable) -> LengthGraph {
    let n = pt.p as usize + 1;
    let edges = (0..n)
        .map(|x| Edge {
            source: 0,
            target: 0,
            length: 1,
            reverse: pt.involution[x],
            kind: EdgeKind::Loop,
            label: vec![ProjPoint::from_index(x, pt.p)],
        })
        .collect();
    LengthGraph { vertices: vec![Vertex { length: 1 }], edges }
}

/// Orbits of the units on the projective line, sorted by smallest point.
pub fn unit_orbits(alg: &Algebra, units: &UnitGroup, p: u64) -> Result<Vec<Vec<ProjPoint>>> {
    let perms: Vec<Vec<usize>> = units.elements.iter().map(|u| unit_permutation(alg, u, p)).collect::<Result<_>>()?;
    let n = p as usize + 1;
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut orbit: Vec<usize> = perms.iter().map(|s| s[x]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            seen[y] = true;
        }
        orbits.push(orbit.into_iter().map(|i| ProjPoint::from_index(i, p)).collect());
    }
    Ok(orbits)
}

/// Quotient of the rose by the unit group: one vertex of length `#U`, one
/// oriented edge per unit orbit.
pub fn quotient_by_units(alg: &Algebra, pt: &PairingTable, units: &UnitGroup) -> Result<LengthGraph> {
    let p = pt.p;
    let orbits = unit_orbits(alg, units, p)?;
    let mut orbit_of = vec![0usize; p as usize + 1];
    for (k, o) in orbits.iter().enumerate() {
        for x in o {
            orbit_of[x.index(p)] = k;
        }
    }
    // Partners of points in one orbit must lie in one orbit. Pointwise
    // equivariance is not required: the subgroup generated by the pairing
    // need not be normalized by the units.
    for o in &orbits {
        let first = orbit_of[pt.involution[o[0].index(p)]];
        if o.iter().any(|x| orbit_of[pt.involution[x.index(p)]] != first) {
            return invariant("unit action does not preserve the pairing up to orbits");
        }
    }
    let order = units.order;
    let mut edges = Vec::with_capacity(orbits.len());
    for (k, o) in orbits.iter().enumerate() {
        if !order.is_multiple_of(o.len()) {
            return invariant("orbit size does not divide the unit group order");
        }
        let reverse = orbit_of[pt.involution[o[0].index(p)]];
        edges.push(Edge {
            source: 0,
            target: 0,
            length: order / o.len(),
            reverse,
            kind: if reverse == k { EdgeKind::AllerRetour } else { EdgeKind::Loop },
            label: o.clone(),
        });
    }
    let g = LengthGraph { vertices: vec![Vertex { length: order }], edges };
    g.check()?;
    if g.star_sum(0) as u64 != p + 1 {
        return invariant("star formula fails");
    }
    Ok(g)
}

/// Double cover with two vertices: every oriented edge of the quotient lifts
/// to an edge between them.
pub fn plus_cover(q: &LengthGraph) -> LengthGraph {
    let n = q.edges.len();
    let vlen = q.vertices[0].length;
    let mut edges = Vec::with_capacity(2 * n);
    for (i, e) in q.edges.iter().enumerate() {
        edges.push(Edge {
            source: 0,
            target: 1,
            length: e.length,
            reverse: n + i,
            kind: EdgeKind::Link,
            label: e.label.clone(),
        });
    }
    for (i, e) in q.edges.iter().enumerate() {
        edges.push(Edge {
            source: 1,
            target: 0,
            length: e.length,
            reverse: i,
            kind: EdgeKind::Link,
            label: e.label.clone(),
        });
    }
    LengthGraph { vertices: vec![Vertex { length: vlen }, Vertex { length: vlen }], edges }
}
