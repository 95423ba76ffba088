//! JSON and CSV shapes of the subcommand outputs. Rationals are always strings.

use serde_json::{json, Map, Value};

use skrates::bounds::{BoundCertificate, BoundKind, OuterRegion, OuterRegionQuery, PinCurve, TreePinRegion};
use skrates::capacity::CapacityReport;
use skrates::greedy::CoverMeasure;
use skrates::mmi::MmiResult;
use skrates::protocol::{ExhaustiveOutcome, LinearProtocol, SecrecyReport};
use skrates::rational::{self, Rational};
use skrates::tree_packing::{PackingCheck, TreePacking};
use skrates::{HypergraphSource, Partition, RatePoint, VertexSet};

use crate::{CliError, CliResult};

fn q(x: &Rational) -> Value {
    Value::String(rational::format(x))
}

fn set(s: &HypergraphSource, b: VertexSet) -> Value {
    json!(s.render_set(b))
}

fn partition(s: &HypergraphSource, p: &Partition) -> Value {
    json!(s.render_partition(p))
}

fn per_vertex<T: Into<Value> + Clone>(s: &HypergraphSource, values: &[T]) -> Value {
    Value::Object(s.vertex_ids().iter().cloned().zip(values.iter().cloned().map(Into::into)).collect())
}

fn set_cell(s: &HypergraphSource, b: VertexSet) -> String {
    s.render_set(b).join(" ")
}

fn partition_cell(s: &HypergraphSource, p: &Partition) -> String {
    s.render_partition(p).iter().map(|b| b.join(" ")).collect::<Vec<_>>().join("|")
}

pub fn entropy(s: &HypergraphSource, entries: &[(VertexSet, Rational, Rational)]) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|(b, h, c)| json!({ "set": set(s, *b), "entropy": q(h), "conditional_entropy": q(c) }))
        .collect();
    json!({ "entries": rows })
}

pub fn entropy_csv(s: &HypergraphSource, entries: &[(VertexSet, Rational, Rational)]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["set".into(), "entropy".into(), "conditional_entropy".into()]];
    rows.extend(
        entries
            .iter()
            .map(|(b, h, c)| vec![set_cell(s, *b), rational::format(h), rational::format(c)]),
    );
    rows
}

pub fn mmi(s: &HypergraphSource, b: VertexSet, res: &MmiResult) -> Value {
    json!({
        "set": set(s, b),
        "value": q(&res.value),
        "fundamental": partition(s, &res.fundamental),
        "optimal_partitions": res.optimal_partitions.iter().map(|p| partition(s, p)).collect::<Vec<_>>(),
    })
}

pub fn mmi_csv(s: &HypergraphSource, res: &MmiResult) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["partition".into(), "value".into(), "fundamental".into()]];
    rows.extend(res.optimal_partitions.iter().map(|p| {
        vec![partition_cell(s, p), rational::format(&res.value), (*p == res.fundamental).to_string()]
    }));
    rows
}

pub fn capacity(s: &HypergraphSource, c: &CapacityReport) -> Value {
    json!({
        "joint_entropy": q(&c.joint_entropy),
        "rco": q(&c.rco),
        "rco_point": per_vertex(s, &c.rco_point.iter().map(rational::format).collect::<Vec<_>>()),
        "capacity": q(&c.capacity),
        "fundamental": partition(s, &c.mmi.fundamental),
    })
}

fn certificate(s: &HypergraphSource, c: &BoundCertificate) -> Value {
    let ineq = &c.inequality;
    let mut out = Map::new();
    match &c.kind {
        BoundKind::Subset { subset, multiplier, info } => {
            out.insert("kind".into(), "subset".into());
            out.insert("subset".into(), set(s, *subset));
            out.insert("partition".into(), partition(s, &c.partition));
            out.insert("multiplier".into(), (*multiplier).into());
            out.insert("info".into(), q(info));
        }
        BoundKind::Crossing { alpha } => {
            out.insert("kind".into(), "crossing".into());
            out.insert("partition".into(), partition(s, &c.partition));
            out.insert("alpha".into(), q(alpha));
        }
    }
    out.insert(
        "inequality".into(),
        json!({
            "key": q(&ineq.key_coeff),
            "rates": per_vertex(s, &ineq.rate_coeffs.iter().map(rational::format).collect::<Vec<_>>()),
            "rhs": q(&ineq.rhs),
        }),
    );
    out.insert("vacuous".into(), ineq.is_vacuous().into());
    Value::Object(out)
}

fn counts(certs: &[BoundCertificate]) -> Value {
    let subset = certs.iter().filter(|c| matches!(c.kind, BoundKind::Subset { .. })).count();
    let vacuous = certs.iter().filter(|c| c.inequality.is_vacuous()).count();
    json!({ "subset": subset, "crossing": certs.len() - subset, "vacuous": vacuous })
}

pub fn bounds(s: &HypergraphSource, region: &OuterRegion, query: Option<&OuterRegionQuery>) -> Value {
    match query {
        None => json!({
            "counts": counts(region.certificates()),
            "certificates": region.certificates().iter().map(|c| certificate(s, c)).collect::<Vec<_>>(),
        }),
        Some(qr) => json!({
            "counts": counts(region.certificates()),
            "point": qr.point.to_json_value(s),
            "feasible": qr.is_feasible(),
            "violations": qr.violations.iter().map(|c| certificate(s, c)).collect::<Vec<_>>(),
        }),
    }
}

pub fn bounds_csv(s: &HypergraphSource, region: &OuterRegion, query: Option<&OuterRegionQuery>) -> Vec<Vec<String>> {
    let mut header: Vec<String> = ["kind", "subset", "partition", "key"].map(String::from).to_vec();
    header.extend(s.vertex_ids().iter().map(|id| format!("r_{id}")));
    header.extend(["rhs", "vacuous"].map(String::from));
    let certs = match query {
        None => region.certificates(),
        Some(qr) => &qr.violations[..],
    };
    let mut rows = vec![header];
    for c in certs {
        let (kind, subset) = match &c.kind {
            BoundKind::Subset { subset, .. } => ("subset", set_cell(s, *subset)),
            BoundKind::Crossing { .. } => ("crossing", String::new()),
        };
        let mut row = vec![kind.to_string(), subset, partition_cell(s, &c.partition), rational::format(&c.inequality.key_coeff)];
        row.extend(c.inequality.rate_coeffs.iter().map(rational::format));
        row.push(rational::format(&c.inequality.rhs));
        row.push(c.inequality.is_vacuous().to_string());
        rows.push(row);
    }
    rows
}

pub type CurveRow = (Rational, Rational, Option<Rational>);

pub fn curve(rows: &[CurveRow], pin: Option<&PinCurve>) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(r, bound, exact)| {
            let mut row = Map::new();
            row.insert("R".into(), q(r));
            row.insert("upper_bound".into(), q(bound));
            if let Some(v) = exact {
                row.insert("achievable".into(), q(v));
            }
            Value::Object(row)
        })
        .collect();
    json!({
        "rows": rows,
        "pin": pin.map(|c| json!({
            "capacity": q(&c.capacity),
            "communication_complexity": q(&c.communication_complexity()),
        })),
    })
}

pub fn curve_csv(rows: &[CurveRow], pin: bool) -> Vec<Vec<String>> {
    let mut header = vec!["R".to_string(), "upper_bound".to_string()];
    if pin {
        header.push("achievable".into());
    }
    let mut out = vec![header];
    for (r, bound, exact) in rows {
        let mut row = vec![rational::format(r), rational::format(bound)];
        if let Some(v) = exact {
            row.push(rational::format(v));
        }
        out.push(row);
    }
    out
}

fn trees(s: &HypergraphSource, packing: &TreePacking) -> Value {
    packing
        .trees
        .iter()
        .map(|(t, w)| {
            json!({
                "pairs": t.pairs().iter().map(|p| set(s, *p)).collect::<Vec<_>>(),
                "weight": q(w),
                "edge_realizations": t.edge_id_realizations(s),
            })
        })
        .collect()
}

pub fn pack(s: &HypergraphSource, value: &Rational, packing: &TreePacking, rates: &RatePoint, check: &PackingCheck) -> Value {
    json!({
        "value": q(value),
        "trees": trees(s, packing),
        "rate_point": rates.to_json_value(s),
        "residuals": check.residuals.iter().map(|(p, r)| json!({ "pair": set(s, *p), "residual": q(r) })).collect::<Vec<_>>(),
        "feasible": check.is_ok(),
    })
}

fn exhaustive(s: &HypergraphSource, e: &ExhaustiveOutcome) -> Value {
    match e {
        ExhaustiveOutcome::NotRequested => json!({ "status": "not_requested" }),
        ExhaustiveOutcome::Skipped(reason) => json!({ "status": "skipped", "reason": reason }),
        ExhaustiveOutcome::Done(x) => json!({
            "status": "done",
            "assignments": x.assignments,
            "distinct_transcripts": x.distinct_transcripts,
            "key_uniform": x.key_uniform,
            "key_independent": x.key_independent,
            "equivocation_bits": x.equivocation_bits,
            "recoverable": per_vertex(s, &x.recoverable),
            "verdict": x.verdict.as_str(),
        }),
    }
}

pub fn simulate(s: &HypergraphSource, p: &LinearProtocol, r: &SecrecyReport, measured: &RatePoint) -> Value {
    json!({
        "blocklength": p.blocklength(),
        "total_bits": p.total_bits(),
        "key_bits": r.key_bits,
        "message_bits": per_vertex(s, &r.message_bits),
        "message_rank": r.message_rank,
        "joint_rank": r.joint_rank,
        "key_rank": r.key_rank,
        "equivocation_bits": r.equivocation_bits,
        "recoverable": per_vertex(s, &r.recoverable),
        "verdict": r.verdict.as_str(),
        "measured_rates": measured.to_json_value(s),
        "exhaustive": exhaustive(s, &r.exhaustive),
    })
}

/// Reads `{"label": "q", ...}`, keeping the key order as the canonical element order.
pub fn parse_weights(text: &str) -> CliResult<(Vec<String>, Vec<Rational>)> {
    let map: Map<String, Value> =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("--weights: {e}")))?;
    let mut labels = Vec::with_capacity(map.len());
    let mut weights = Vec::with_capacity(map.len());
    for (label, v) in map {
        let w = match &v {
            Value::String(t) => rational::parse(t),
            Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap())),
            _ => Err(skrates::Error::Parse(format!("weight of {label:?} must be an integer or a \"p/q\" string"))),
        }
        .map_err(|e| CliError::Input(format!("--weights: {e}")))?;
        labels.push(label);
        weights.push(w);
    }
    if labels.is_empty() {
        return Err(CliError::Input("--weights: no elements".into()));
    }
    Ok((labels, weights))
}

pub fn greedy_context(s: &HypergraphSource, p: &Partition, alpha: &Rational, max_edge_weight: &Rational) -> Value {
    json!({
        "partition": partition(s, p),
        "alpha": q(alpha),
        "max_edge_weight": q(max_edge_weight),
    })
}

pub fn greedy(labels: &[String], w: &[Rational], order: &[usize], mu: &CoverMeasure, context: Option<Value>) -> Value {
    let render = |mask: u64| -> Vec<&str> {
        (0..labels.len()).filter(|i| mask >> i & 1 == 1).map(|i| labels[i].as_str()).collect()
    };
    // chain sets listed from smallest to largest
    let mut chain: Vec<(u64, &Rational)> = mu.iter().collect();
    chain.sort_by_key(|(b, _)| b.count_ones());
    let mut out = Map::new();
    out.insert("ground".into(), json!(labels));
    out.insert(
        "weights".into(),
        Value::Object(labels.iter().cloned().zip(w.iter().map(q)).collect()),
    );
    out.insert("order".into(), json!(order.iter().map(|&i| &labels[i]).collect::<Vec<_>>()));
    out.insert(
        "chain".into(),
        chain.iter().map(|(b, m)| json!({ "set": render(*b), "mu": q(m) })).collect(),
    );
    if let Some(ctx) = context {
        out.insert("instance".into(), ctx);
    }
    Value::Object(out)
}

pub struct Analysis<'a> {
    pub source: &'a HypergraphSource,
    pub capacity: &'a CapacityReport,
    pub certificates: &'a [BoundCertificate],
    pub min_total_rate_at_capacity: Option<&'a Rational>,
    pub tree: Option<&'a TreePinRegion>,
    pub curve: Option<&'a PinCurve>,
    pub packing: Option<&'a TreePacking>,
    pub simulation: Option<&'a (LinearProtocol, SecrecyReport)>,
}

pub fn analyze(a: Analysis<'_>) -> Value {
    let s = a.source;
    json!({
        "source": {
            "vertices": s.vertex_ids(),
            "edges": s.edges().len(),
            "pin": s.is_pin(),
        },
        "capacity": capacity(s, a.capacity),
        "fundamental": partition(s, &a.capacity.mmi.fundamental),
        "certificates": counts(a.certificates),
        "outer": {
            "min_total_rate_at_capacity": a.min_total_rate_at_capacity.map(q),
        },
        "tree_pin": a.tree.map(|t| json!({
            "capacity": q(&t.capacity),
            "degrees": per_vertex(s, &t.degrees),
        })),
        "pin_curve": a.curve.map(|c| json!({
            "capacity": q(&c.capacity),
            "communication_complexity": q(&c.communication_complexity()),
        })),
        "packing": a.packing.map(|p| json!({
            "value": q(&p.value()),
            "trees": trees(s, p),
            "rate_point": skrates::tree_packing::packing_to_rates(p).to_json_value(s),
        })),
        "simulation": a.simulation.map(|(p, r)| json!({
            "blocklength": p.blocklength(),
            "key_bits": r.key_bits,
            "message_bits": per_vertex(s, &r.message_bits),
            "verdict": r.verdict.as_str(),
        })),
    })
}
