//! The single-run pipeline and its serializable report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use schottky_core::arithmetic::{choose_modulus, right_unit_property, unit_group};
use schottky_core::formulas::{
    closed_form_report, edge_count_formula, legendre, order_two_points_by_squares, ClosedFormReport,
};
use schottky_core::generators::{check_prime, represent_prime, schottky_rank};
use schottky_core::graphs::{mumford_graph, plus_cover, quotient_by_units, schottky_pairing, unit_orbits, LengthGraph};
use schottky_core::padic::{embed, fixed_point_reductions, ProjPoint};
use schottky_core::{order_lookup, EichlerOrder, Error, Quaternion};

#[derive(Debug, Clone, Copy)]
pub struct RunInput {
    pub d: u64,
    pub n: u64,
    pub p: u64,
    pub precision: u32,
}

#[derive(Debug, Serialize)]
pub struct Inputs {
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "N")]
    pub n: String,
    pub p: String,
    pub precision: String,
}

#[derive(Debug, Serialize)]
pub struct AlgebraReport {
    pub a: String,
    pub b: String,
    pub unit_group_order: String,
}

#[derive(Debug, Serialize)]
pub struct Generator {
    pub quaternion: String,
    pub trace: String,
    /// Image under the embedding, entries modulo `p^precision`.
    pub matrix: [[String; 2]; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attracting: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repelling: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Generators {
    pub primary_count: String,
    pub impure_count: String,
    pub pure_count: String,
    pub impure: Vec<Generator>,
    pub pure: Vec<Generator>,
}

#[derive(Debug, Serialize)]
pub struct Pairing {
    pub radius_exponent: String,
    pub pairs: Vec<[String; 2]>,
}

#[derive(Debug, Serialize)]
pub struct VertexReport {
    pub id: String,
    pub length: String,
}

#[derive(Debug, Serialize)]
pub struct EdgeReport {
    pub id: String,
    pub source: String,
    pub target: String,
    pub length: String,
    pub kind: String,
    pub reverse: String,
    pub label: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct GraphReport {
    pub name: String,
    pub betti_number: String,
    pub length_counts: BTreeMap<String, String>,
    pub vertices: Vec<VertexReport>,
    pub edges: Vec<EdgeReport>,
}

#[derive(Debug, Serialize)]
pub struct Graphs {
    pub mumford: GraphReport,
    pub quotient: GraphReport,
    pub plus_cover: GraphReport,
}

#[derive(Debug, Serialize)]
pub struct ClosedForms {
    /// Keyed by edge length.
    pub edges_of_length: BTreeMap<String, String>,
    pub genus_quotient: String,
    pub genus_plus: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_two: Option<String>,
    pub elliptic_counts: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub inputs: Inputs,
    pub algebra: AlgebraReport,
    #[serde(rename = "xi")]
    pub modulus: String,
    pub generators: Generators,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Pairing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_classes: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<Graphs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_forms: Option<ClosedForms>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<String>,
}

impl RunReport {
    pub fn is_schottky(&self) -> bool {
        self.graphs.is_some()
    }
}

/// Points print as `x:1` or `1:0`.
pub fn point(x: &ProjPoint) -> String {
    x.to_string()
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

fn generator(o: &EichlerOrder, x: &Quaternion, p: u64, k: u32, fixed: bool) -> Result<Generator, Error> {
    let m = embed(&o.algebra, x, p, k)?;
    let (attracting, repelling) = if fixed {
        let (a, r) = fixed_point_reductions(&o.algebra, x, p)?;
        (Some(point(&a)), Some(point(&r)))
    } else {
        (None, None)
    };
    Ok(Generator {
        quaternion: x.to_string(),
        trace: x.trace().to_string(),
        matrix: m.entries.map(|r| r.map(|e| e.to_string())),
        attracting,
        repelling,
    })
}

fn graph_report(name: &str, g: &LengthGraph) -> GraphReport {
    GraphReport {
        name: name.to_string(),
        betti_number: g.betti_number().to_string(),
        length_counts: g.length_counts().into_iter().map(|(l, c)| (l.to_string(), c.to_string())).collect(),
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexReport { id: i.to_string(), length: v.length.to_string() })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeReport {
                id: i.to_string(),
                source: e.source.to_string(),
                target: e.target.to_string(),
                length: e.length.to_string(),
                kind: e.kind.as_str().to_string(),
                reverse: e.reverse.to_string(),
                label: e.label.iter().map(point).collect(),
            })
            .collect(),
    }
}

fn closed_forms(r: &ClosedFormReport) -> ClosedForms {
    ClosedForms {
        edges_of_length: (1..).zip(r.edge_counts).map(|(l, c)| (l.to_string(), c.to_string())).collect(),
        genus_quotient: r.genus_quotient.to_string(),
        genus_plus: r.genus_plus.to_string(),
        order_two: r.order_two.map(|d| d.to_string()),
        elliptic_counts: r.elliptic_counts.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
    }
}

/// Parse `c0,c1,c2,c3` with rational entries into `c0 + c1 i + c2 j + c3 k`.
pub fn parse_modulus(s: &str) -> Result<Quaternion, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated coordinates, got {}", parts.len()));
    }
    let mut nums = [0i64; 4];
    let mut dens = [1i64; 4];
    for (i, part) in parts.iter().enumerate() {
        let (n, d) = part.split_once('/').unwrap_or((part, "1"));
        nums[i] = n.trim().parse().map_err(|_| format!("bad coordinate {part:?}"))?;
        dens[i] = d.trim().parse().map_err(|_| format!("bad coordinate {part:?}"))?;
        if dens[i] <= 0 {
            return Err(format!("bad denominator in {part:?}"));
        }
    }
    let den: i64 = dens.iter().product();
    let scaled = std::array::from_fn(|i| nums[i] * (den / dens[i]));
    Ok(Quaternion::from_fracs(scaled, den))
}

/// Run the full pipeline. Graph stages are skipped when pure generators
/// are present; the caller turns that into a distinct exit status.
pub fn run(input: RunInput, modulus_override: Option<&Quaternion>, timing: bool) -> Result<RunReport, Error> {
    let start = Instant::now();
    let RunInput { d, n, p, precision } = input;
    let o = order_lookup(d, n)?;
    check_prime(&o, p)?;
    if legendre(o.algebra.a, p) != 1 {
        return Err(Error::NotSplit { a: o.algebra.a, p });
    }
    let modulus = match modulus_override {
        Some(x) => {
            if !o.contains(x) {
                return Err(Error::NotInOrder(x.to_string()));
            }
            if !right_unit_property(&o, x)? {
                return Err(Error::NoModulus { d, n });
            }
            x.clone()
        }
        None => choose_modulus(&o)?,
    };
    let units = unit_group(&o)?;
    let gs = represent_prime(&o, &modulus, p)?;

    let impure_fixed = gs.pure_count == 0;
    let impure =
        gs.impure_reps.iter().map(|x| generator(&o, x, p, precision, impure_fixed)).collect::<Result<Vec<_>, _>>()?;
    let pure = gs.pure_reps.iter().map(|x| generator(&o, x, p, precision, false)).collect::<Result<Vec<_>, _>>()?;
    let mut report = RunReport {
        inputs: Inputs { d: d.to_string(), n: n.to_string(), p: p.to_string(), precision: precision.to_string() },
        algebra: AlgebraReport {
            a: o.algebra.a.to_string(),
            b: o.algebra.b.to_string(),
            unit_group_order: units.order.to_string(),
        },
        modulus: modulus.to_string(),
        generators: Generators {
            primary_count: gs.all_elements.len().to_string(),
            impure_count: gs.impure_count.to_string(),
            pure_count: gs.pure_count.to_string(),
            impure,
            pure,
        },
        pairing: None,
        unit_classes: None,
        graphs: None,
        closed_forms: None,
        timing_ms: None,
    };
    if gs.pure_count > 0 {
        if timing {
            report.timing_ms = Some(start.elapsed().as_millis().to_string());
        }
        return Ok(report);
    }

    let rank = schottky_rank(&gs)?;
    let table = schottky_pairing(&o.algebra, &gs)?;
    let rose = mumford_graph(&table);
    let orbits = unit_orbits(&o.algebra, &units, p)?;
    let quotient = quotient_by_units(&o.algebra, &table, &units)?;
    let cover = plus_cover(&quotient);
    let forms = closed_form_report(&o, &modulus, &units, p)?;

    if rank as u64 != p.div_ceil(2) || rose.betti_number() != rank {
        return Err(fail("rose genus differs from the Schottky rank"));
    }
    let measured =
        (quotient.edges_of_length(1) as i64, quotient.edges_of_length(2) as i64, quotient.edges_of_length(3) as i64);
    if measured != edge_count_formula(d, n, p)? {
        return Err(fail(format!("edge counts {measured:?} differ from the closed forms")));
    }
    if cover.betti_number() as i64 != forms.genus_plus {
        return Err(fail("double cover genus differs from the closed form"));
    }
    if quotient.betti_number() as i64 != forms.genus_quotient {
        return Err(fail("quotient genus differs from the closed form"));
    }
    if forms.order_two.is_some()
        && matches!((d, n), (2, 1) | (3, 1))
        && forms.order_two != Some(order_two_points_by_squares(d, n, p)?)
    {
        return Err(fail("order_two differs from the sum-of-squares count"));
    }

    report.pairing = Some(Pairing {
        radius_exponent: format!("{}/{}", table.radius_exponent.0, table.radius_exponent.1),
        pairs: table.unordered_pairs().iter().map(|(x, y)| [point(x), point(y)]).collect(),
    });
    report.unit_classes = Some(orbits.iter().map(|o| o.iter().map(point).collect()).collect());
    report.graphs = Some(Graphs {
        mumford: graph_report("mumford", &rose),
        quotient: graph_report("quotient", &quotient),
        plus_cover: graph_report("plus_cover", &cover),
    });
    report.closed_forms = Some(closed_forms(&forms));
    if timing {
        report.timing_ms = Some(start.elapsed().as_millis().to_string());
    }
    Ok(report)
}
