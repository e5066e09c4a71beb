//! JSON reading and writing of complexes.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Complex, ComplexBuilder, EdgeId, MeasureKind, MeasureSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub id: usize,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepEntry {
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonEntry {
    pub id: usize,
    pub perimeter: Vec<StepEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasuresEntry {
    pub mu0: Value,
    pub mu1: Value,
    pub mu2: Value,
}

/// On-disk form of a [`Complex`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub edges: Vec<EdgeEntry>,
    pub polygons: Vec<PolygonEntry>,
    pub measures: MeasuresEntry,
}

impl ComplexFile {
    pub fn from_complex(x: &Complex) -> Self {
        let measure = |dim: usize| {
            let m = x.measures().get(dim);
            match m.kind() {
                MeasureKind::Uniform => Value::from("uniform"),
                MeasureKind::Descending => Value::from("descending"),
                MeasureKind::Custom => Value::from(m.probs()),
            }
        };
        ComplexFile {
            vertices: x.n_vertices(),
            edges: x
                .edges()
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeEntry { id, src: e.src.0, dst: e.dst.0 })
                .collect(),
            polygons: x
                .perimeters()
                .iter()
                .enumerate()
                .map(|(id, per)| PolygonEntry {
                    id,
                    perimeter: per.iter().map(|o| StepEntry { edge: o.edge.0, reversed: o.reversed }).collect(),
                })
                .collect(),
            measures: MeasuresEntry { mu0: measure(0), mu1: measure(1), mu2: measure(2) },
        }
    }

    pub fn to_complex(&self) -> Result<Complex> {
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| e.id);
        for (i, e) in edges.iter().enumerate() {
            if e.id != i {
                return Err(Error::schema(format!("edge {}", e.id), "edge ids must be 0..n without gaps"));
            }
            if e.src >= self.vertices || e.dst >= self.vertices {
                return Err(Error::schema(format!("edge {}", e.id), "endpoint is not a vertex"));
            }
        }
        let mut polygons = self.polygons.clone();
        polygons.sort_by_key(|p| p.id);
        let mut b = ComplexBuilder::new(self.vertices);
        for e in &edges {
            b.edge(e.src, e.dst);
        }
        for (i, p) in polygons.iter().enumerate() {
            if p.id != i {
                return Err(Error::schema(format!("polygon {}", p.id), "polygon ids must be 0..n without gaps"));
            }
            for s in &p.perimeter {
                if s.edge >= edges.len() {
                    return Err(Error::schema(format!("polygon {}", p.id), format!("unknown edge {}", s.edge)));
                }
            }
            b.polygon(p.perimeter.iter().map(|s| (EdgeId(s.edge), s.reversed)).collect());
        }
        let specs = [
            parse_measure(&self.measures.mu0, 0)?,
            parse_measure(&self.measures.mu1, 1)?,
            parse_measure(&self.measures.mu2, 2)?,
        ];
        b.build_with(specs)
    }
}

fn parse_measure(v: &Value, dim: usize) -> Result<MeasureSpec> {
    let loc = || format!("mu{dim}");
    match v {
        Value::String(s) if s == "uniform" => Ok(MeasureSpec::Uniform),
        Value::String(s) if s == "descending" => Ok(MeasureSpec::Descending),
        Value::Array(items) => {
            let mut fracs = Vec::with_capacity(items.len());
            let mut sum = 0.0;
            for (i, item) in items.iter().enumerate() {
                let (p, q) = parse_probability(item)
                    .ok_or_else(|| Error::schema(format!("mu{dim}[{i}]"), format!("{item} is not a representable probability")))?;
                sum += p as f64 / q as f64;
                fracs.push((p, q));
            }
            if !items.is_empty() && (sum - 1.0).abs() > 1e-12 {
                return Err(Error::schema(loc(), format!("entries sum to {sum}, not 1")));
            }
            let lcm = fracs
                .iter()
                .try_fold(1u64, |l, &(_, q)| l.checked_mul(q / num_integer::gcd(l, q)))
                .ok_or_else(|| Error::schema(loc(), "denominators too large to combine exactly"))?;
            let weights = fracs
                .iter()
                .map(|&(p, q)| p.checked_mul(lcm / q))
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(|| Error::schema(loc(), "denominators too large to combine exactly"))?;
            Ok(MeasureSpec::Weights(weights))
        }
        other => Err(Error::schema(loc(), format!("expected \"uniform\", \"descending\" or an array, got {other}"))),
    }
}

/// A number or a `"p/q"` string as a reduced fraction.
fn parse_probability(v: &Value) -> Option<(u64, u64)> {
    match v {
        Value::Number(n) => rationalize(n.as_f64()?),
        Value::String(s) => {
            let (p, q) = s.split_once('/')?;
            let (p, q): (u64, u64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            if q == 0 {
                return None;
            }
            let g = num_integer::gcd(p, q).max(1);
            Some((p / g, q / g))
        }
        _ => None,
    }
}

/// Best rational approximation with denominator at most 1e9, accepted when
/// within 1e-12 of `x`. Decimal output of exact weights reads back exactly.
fn rationalize(x: f64) -> Option<(u64, u64)> {
    const MAX_DEN: u64 = 1_000_000_000;
    if !(0.0..=1.0).contains(&x) {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    let mut best = None;
    for _ in 0..64 {
        let a = r.floor();
        if a > MAX_DEN as f64 {
            break;
        }
        let a = a as u64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > MAX_DEN {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        best = Some((h1, k1));
        if (x - h1 as f64 / k1 as f64).abs() <= f64::EPSILON * x.max(1e-300) {
            break;
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    best.filter(|&(p, q)| (x - p as f64 / q as f64).abs() <= 1e-12)
}

pub fn save_complex(x: &Complex, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&ComplexFile::from_complex(x))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<Complex> {
    let text = std::fs::read_to_string(path)?;
    let file: ComplexFile = serde_json::from_str(&text)?;
    file.to_complex()
}
