//! JSON and CSV formats: spaces, arrays, matrices, profiles, schedules,
//! decomposition reports, envelope and scaling tables.
//!
//! Distances are numbers with `"inf"` for ∞. Maps are `BTreeMap`s so output
//! bytes only depend on content.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use coarse_core::decompose::{AugmentedMatrix, DecompositionReport};
use coarse_core::product::EnvelopeRow;
use coarse_core::profile::{Profile, ProfileFn, ProfileInstance, Schedule, ScheduleConvention};
use coarse_core::{
    Dim0Certificate, Edge, ExtReal, FiniteMetricSpace, IndexSet, Metric, MetricError, Norm, Subset,
    SubsetArray, SubsetMatrix,
};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// An `ExtReal` on the wire.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dist(pub ExtReal);

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_finite() {
            Some(v) => s.serialize_f64(v),
            None => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) if s == "inf" => Ok(Dist(ExtReal::INFINITY)),
            Value::Number(n) => n
                .as_f64()
                .and_then(ExtReal::new)
                .map(Dist)
                .ok_or_else(|| serde::de::Error::custom("distance must be a non-negative number")),
            other => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {other}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormDoc {
    L1,
    Sup,
}

impl From<Norm> for NormDoc {
    fn from(n: Norm) -> NormDoc {
        match n {
            Norm::L1 => NormDoc::L1,
            Norm::Sup => NormDoc::Sup,
        }
    }
}

impl From<NormDoc> for Norm {
    fn from(n: NormDoc) -> Norm {
        match n {
            NormDoc::L1 => Norm::L1,
            NormDoc::Sup => Norm::Sup,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricDoc {
    Table { dist: Vec<Vec<Dist>> },
    Interval { len: usize, spacing: f64 },
    Grid { dims: Vec<usize>, norm: NormDoc },
    Graph { edges: Vec<(usize, usize, f64)> },
    DisjointUnion { parts: Vec<SpaceDoc> },
    Product {
        left: Box<SpaceDoc>,
        right: Box<SpaceDoc>,
        norm: NormDoc,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub name: String,
    pub points: Vec<String>,
    pub metric: MetricDoc,
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteMetricSpace) -> SpaceDoc {
        let n = space.len();
        let metric = match space.metric() {
            Metric::Table(d) => MetricDoc::Table {
                dist: (0..n).map(|i| (0..n).map(|j| Dist(d[i * n + j])).collect()).collect(),
            },
            Metric::Interval { len, spacing } => MetricDoc::Interval {
                len: *len,
                spacing: *spacing,
            },
            Metric::Grid { dims, norm } => MetricDoc::Grid {
                dims: dims.clone(),
                norm: (*norm).into(),
            },
            Metric::Graph { edges, .. } => MetricDoc::Graph {
                edges: edges.iter().map(|e| (e.a, e.b, e.weight)).collect(),
            },
            Metric::DisjointUnion { parts, .. } => MetricDoc::DisjointUnion {
                parts: parts.iter().map(SpaceDoc::from_space).collect(),
            },
            Metric::Product { left, right, norm } => MetricDoc::Product {
                left: Box::new(SpaceDoc::from_space(left)),
                right: Box::new(SpaceDoc::from_space(right)),
                norm: (*norm).into(),
            },
        };
        SpaceDoc {
            name: space.name().to_string(),
            points: space.labels().to_vec(),
            metric,
        }
    }

    /// Rebuilds and validates the space. Generator kinds must reproduce the
    /// listed point labels exactly.
    pub fn to_space(&self) -> Result<FiniteMetricSpace, FormatError> {
        let space = match &self.metric {
            MetricDoc::Table { dist } => {
                let n = self.points.len();
                if dist.len() != n || dist.iter().any(|row| row.len() != n) {
                    return Err(MetricError::Shape {
                        expected: n * n,
                        found: dist.iter().map(Vec::len).sum(),
                    }
                    .into());
                }
                let flat = dist.iter().flatten().map(|d| d.0).collect();
                FiniteMetricSpace::from_table(self.name.clone(), self.points.clone(), flat)?
            }
            MetricDoc::Interval { len, spacing } => {
                if !(*spacing > 0.0 && spacing.is_finite()) {
                    return Err(invalid("interval spacing must be positive"));
                }
                FiniteMetricSpace::scaled_interval(*len, *spacing)
            }
            MetricDoc::Grid { dims, norm } => FiniteMetricSpace::grid(dims, (*norm).into()),
            MetricDoc::Graph { edges } => FiniteMetricSpace::from_graph(
                self.name.clone(),
                self.points.clone(),
                edges
                    .iter()
                    .map(|&(a, b, weight)| Edge { a, b, weight })
                    .collect(),
            )?,
            MetricDoc::DisjointUnion { parts } => FiniteMetricSpace::disjoint_union(
                parts.iter().map(SpaceDoc::to_space).collect::<Result<_, _>>()?,
            ),
            MetricDoc::Product { left, right, norm } => FiniteMetricSpace::product(
                Arc::new(left.to_space()?),
                Arc::new(right.to_space()?),
                (*norm).into(),
            ),
        };
        if space.labels() != self.points.as_slice() {
            return Err(invalid(format!(
                "space {:?}: listed points do not match its {} points",
                self.name,
                space.len()
            )));
        }
        Ok(space.with_name(self.name.clone()))
    }
}

pub fn space_to_json(space: &FiniteMetricSpace) -> String {
    to_json(&SpaceDoc::from_space(space))
}

pub fn space_from_json(text: &str) -> Result<FiniteMetricSpace, FormatError> {
    serde_json::from_str::<SpaceDoc>(text)?.to_space()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialise");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayDoc {
    pub space: String,
    pub index: Vec<String>,
    pub entries: BTreeMap<String, Vec<usize>>,
}

impl ArrayDoc {
    pub fn from_array(space: &FiniteMetricSpace, a: &SubsetArray) -> ArrayDoc {
        ArrayDoc {
            space: space.name().to_string(),
            index: a.index().labels().to_vec(),
            entries: a
                .index()
                .labels()
                .iter()
                .zip(a.entries())
                .map(|(l, e)| (l.clone(), e.to_vec()))
                .collect(),
        }
    }

    pub fn to_array(&self, space: &FiniteMetricSpace) -> Result<SubsetArray, FormatError> {
        let index = IndexSet::new(self.index.iter().cloned()).map_err(|e| invalid(e.to_string()))?;
        let entries = self
            .index
            .iter()
            .map(|l| {
                let pts = self
                    .entries
                    .get(l)
                    .ok_or_else(|| invalid(format!("no entry for index {l:?}")))?;
                subset(space.len(), pts)
            })
            .collect::<Result<Vec<_>, _>>()?;
        SubsetArray::new(space.len(), index, entries).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub space: String,
    pub index: Vec<String>,
    pub cols: Vec<String>,
    /// `entries[row][col]`.
    pub entries: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
}

impl MatrixDoc {
    pub fn from_matrix(space: &FiniteMetricSpace, m: &SubsetMatrix) -> MatrixDoc {
        let (h, w) = m.shape();
        let entries = (0..h)
            .map(|i| {
                let row = (0..w)
                    .map(|j| (m.cols().labels()[j].clone(), m.get(i, j).to_vec()))
                    .collect();
                (m.rows().labels()[i].clone(), row)
            })
            .collect();
        MatrixDoc {
            space: space.name().to_string(),
            index: m.rows().labels().to_vec(),
            cols: m.cols().labels().to_vec(),
            entries,
        }
    }

    pub fn to_matrix(&self, space: &FiniteMetricSpace) -> Result<SubsetMatrix, FormatError> {
        let rows = IndexSet::new(self.index.iter().cloned()).map_err(|e| invalid(e.to_string()))?;
        let cols = IndexSet::new(self.cols.iter().cloned()).map_err(|e| invalid(e.to_string()))?;
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for r in &self.index {
            for c in &self.cols {
                let pts = self
                    .entries
                    .get(r)
                    .and_then(|row| row.get(c))
                    .ok_or_else(|| invalid(format!("no entry for ({r}, {c})")))?;
                entries.push(subset(space.len(), pts)?);
            }
        }
        SubsetMatrix::new(space.len(), rows, cols, entries).map_err(|e| invalid(e.to_string()))
    }
}

pub fn subset(universe: usize, pts: &[usize]) -> Result<Subset, FormatError> {
    Subset::try_from_indices(universe, pts.iter().copied())
        .map_err(|e| invalid(format!("bad point index: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertDoc {
    pub scale: f64,
    pub bound: Dist,
}

impl From<Dim0Certificate> for CertDoc {
    fn from(c: Dim0Certificate) -> CertDoc {
        CertDoc {
            scale: c.scale,
            bound: Dist(c.bound),
        }
    }
}

impl From<CertDoc> for Dim0Certificate {
    fn from(c: CertDoc) -> Dim0Certificate {
        Dim0Certificate {
            scale: c.scale,
            bound: c.bound.0,
        }
    }
}

/// An augmented matrix with one certificate per entry, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentedDoc {
    pub matrix: MatrixDoc,
    pub scale: f64,
    pub certs: Vec<CertDoc>,
    pub part_certs: Vec<CertDoc>,
}

impl AugmentedDoc {
    pub fn from_augmented(space: &FiniteMetricSpace, m: &AugmentedMatrix) -> AugmentedDoc {
        AugmentedDoc {
            matrix: MatrixDoc::from_matrix(space, &m.matrix),
            scale: m.scale,
            certs: m.certs.iter().map(|&c| c.into()).collect(),
            part_certs: m.part_certs.iter().map(|&c| c.into()).collect(),
        }
    }

    pub fn to_augmented(&self, space: &FiniteMetricSpace) -> Result<AugmentedMatrix, FormatError> {
        Ok(AugmentedMatrix {
            matrix: self.matrix.to_matrix(space)?,
            scale: self.scale,
            certs: self.certs.iter().map(|&c| c.into()).collect(),
            part_certs: self.part_certs.iter().map(|&c| c.into()).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartDoc {
    pub label: String,
    pub points: Vec<usize>,
    pub certificate: Option<CertDoc>,
}

/// What was run, on which space, with which parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDoc {
    pub construction: String,
    /// The space the parts live in.
    pub space: SpaceDoc,
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub input: InputDoc,
    pub scales: BTreeMap<String, f64>,
    pub parts: Vec<PartDoc>,
    pub verdicts: BTreeMap<String, bool>,
    pub measured: BTreeMap<String, Dist>,
    pub passed: bool,
    /// Construction-specific data needed to re-verify the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReportDoc {
    pub fn new(input: InputDoc, report: &DecompositionReport) -> ReportDoc {
        ReportDoc {
            input,
            scales: report.scales.clone(),
            parts: report
                .parts
                .iter()
                .map(|p| PartDoc {
                    label: p.label.clone(),
                    points: p.points.to_vec(),
                    certificate: p.certificate.map(CertDoc::from),
                })
                .collect(),
            verdicts: report.verdicts.clone(),
            measured: report.measured.iter().map(|(k, v)| (k.clone(), Dist(*v))).collect(),
            passed: report.passed(),
            artifact: None,
            notes: Vec::new(),
        }
    }

    pub fn with_artifact<T: Serialize>(mut self, artifact: &T) -> ReportDoc {
        self.artifact = Some(serde_json::to_value(artifact).expect("artifacts serialise"));
        self
    }

    pub fn failures(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub fns: Vec<Vec<(f64, f64)>>,
}

impl ProfileDoc {
    pub fn from_profile(p: &Profile) -> ProfileDoc {
        ProfileDoc {
            fns: p.fns().iter().map(|f| f.breakpoints().to_vec()).collect(),
        }
    }

    pub fn to_profile(&self) -> Result<Profile, FormatError> {
        let fns = self
            .fns
            .iter()
            .map(|bps| ProfileFn::new(bps.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(e.to_string()))?;
        Profile::new(fns).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotDoc {
    pub slot: usize,
    pub part: usize,
    pub scale: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub convention: String,
    pub c: Vec<usize>,
    pub p: Vec<usize>,
    pub t: Vec<f64>,
    pub slots: Vec<SlotDoc>,
    pub valid: bool,
}

impl ScheduleDoc {
    pub fn from_schedule(s: &Schedule) -> ScheduleDoc {
        ScheduleDoc {
            convention: match s.convention {
                ScheduleConvention::Repaired => "repaired".into(),
                ScheduleConvention::Literal => "literal".into(),
            },
            c: s.c.clone(),
            p: s.p.clone(),
            t: s.t.clone(),
            slots: s
                .slot_scales()
                .map(|(slot, scale, required)| SlotDoc {
                    slot,
                    part: s.slots[slot - 1],
                    scale,
                    required,
                })
                .collect(),
            valid: s.valid(),
        }
    }
}

/// A decomposition to be checked against a profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileInstanceDoc {
    pub space: SpaceDoc,
    pub profile: ProfileDoc,
    pub scales: Vec<f64>,
    /// `parts[i]` lists the pieces of part `i`.
    pub parts: Vec<Vec<Vec<usize>>>,
    pub bounds: Vec<Dist>,
}

impl ProfileInstanceDoc {
    pub fn new(space: &FiniteMetricSpace, profile: &Profile, inst: &ProfileInstance) -> ProfileInstanceDoc {
        ProfileInstanceDoc {
            space: SpaceDoc::from_space(space),
            profile: ProfileDoc::from_profile(profile),
            scales: inst.scales.clone(),
            parts: inst
                .parts
                .iter()
                .map(|pieces| pieces.iter().map(Subset::to_vec).collect())
                .collect(),
            bounds: inst.bounds.iter().map(|&b| Dist(b)).collect(),
        }
    }

    pub fn decode(&self) -> Result<(FiniteMetricSpace, Profile, ProfileInstance), FormatError> {
        let space = self.space.to_space()?;
        let profile = self.profile.to_profile()?;
        let parts = self
            .parts
            .iter()
            .map(|pieces| pieces.iter().map(|p| subset(space.len(), p)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        let inst = ProfileInstance {
            scales: self.scales.clone(),
            parts,
            bounds: self.bounds.iter().map(|b| b.0).collect(),
        };
        Ok((space, profile, inst))
    }
}

fn cell(v: ExtReal) -> String {
    match v.to_finite() {
        Some(x) => format!("{x}"),
        None => "inf".into(),
    }
}

pub fn envelope_csv(rows: &[EnvelopeRow]) -> String {
    let mut out = String::from("threshold,forward,backward\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.threshold, cell(r.forward), cell(r.backward));
    }
    out
}

/// One row of a scaling study.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub construction: String,
    pub r: f64,
    pub m: usize,
    pub max_bound: ExtReal,
    pub passed: bool,
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("N,construction,r,m,max_bound,passed\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.n,
            row.construction,
            row.r,
            row.m,
            cell(row.max_bound),
            row.passed
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_on_the_wire() {
        let s = serde_json::to_string(&[Dist(ExtReal::INFINITY), Dist(ExtReal::finite(0.5))]).unwrap();
        assert_eq!(s, r#"["inf",0.5]"#);
        let back: Vec<Dist> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0].0, ExtReal::INFINITY);
        assert!(serde_json::from_str::<Dist>("-1").is_err());
    }

    #[test]
    fn generator_spaces_round_trip() {
        let i = Arc::new(FiniteMetricSpace::interval(3));
        let spaces = vec![
            FiniteMetricSpace::interval(10),
            FiniteMetricSpace::scaled_interval(4, 0.1),
            FiniteMetricSpace::grid(&[3, 4], Norm::Sup),
            FiniteMetricSpace::disjoint_union(vec![(*i).clone(), FiniteMetricSpace::point()]),
            FiniteMetricSpace::product(i.clone(), i, Norm::L1),
        ];
        for s in spaces {
            let text = space_to_json(&s);
            assert_eq!(space_from_json(&text).unwrap(), s, "{text}");
        }
    }

    #[test]
    fn mismatched_points_rejected() {
        let mut doc = SpaceDoc::from_space(&FiniteMetricSpace::interval(3));
        doc.points.pop();
        assert!(doc.to_space().is_err());
    }
}
