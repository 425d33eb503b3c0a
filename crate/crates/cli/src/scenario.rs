//! Runs the constructions end to end and packages the results as report
//! documents; `verify_document` re-checks such documents independently.

use std::collections::BTreeMap;
use std::sync::Arc;

use coarse_core::bricks::{coarse_cover, grid_streets, interval_bricks, IntervalLayout, StreetLayout};
use coarse_core::decompose::{
    asdim_matrix, check_perp, check_refinement, perp_array, perp_split, product_split,
    refine_disjoint, truncated_product_decomposition, verify_asdim_matrix, AugmentedMatrix,
    DecompositionReport, Refinement, TruncatedProduct,
};
use coarse_core::profile::verify_profile_instance;
use coarse_core::{
    DecompositionError, FiniteMetricSpace, Metric, Norm, ScaleGraph, Subset, SubsetArray,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::format::{
    subset, ArrayDoc, AugmentedDoc, CertDoc, Dist, FormatError, InputDoc, NormDoc,
    ProfileInstanceDoc, ReportDoc, ScalingRow, SpaceDoc,
};

fn input(construction: &str, space: &FiniteMetricSpace, params: Value) -> InputDoc {
    let params = match params {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    InputDoc {
        construction: construction.into(),
        space: SpaceDoc::from_space(space),
        params,
    }
}

/// The base cover fed to the asdim construction: periodic bricks on an
/// interval, streets on a planar grid, a coloured net cover otherwise.
pub fn asdim_parts(space: &FiniteMetricSpace, r: f64, m: usize) -> Result<(SubsetArray, String), DecompositionError> {
    let (parts, how) = match space.metric() {
        Metric::Interval { len, spacing } if *spacing == 1.0 => {
            let layout = IntervalLayout::for_scale(r, m);
            (
                interval_bricks(*len, layout).to_vec(),
                format!("interval bricks: brick {} gap {}", layout.brick, layout.gap),
            )
        }
        Metric::Grid { dims, norm } if dims.len() == 2 => {
            let layout = StreetLayout::for_scale(r, m, *norm);
            (
                grid_streets(space, layout)?.to_vec(),
                format!("grid streets: width {} period {}", layout.width, layout.period),
            )
        }
        _ => {
            let scale = (m as f64 + 1.0) * r;
            let graph = ScaleGraph::new(space, scale);
            (
                coarse_cover(&graph, &Subset::full(space.len()), 2.0 * scale),
                format!("net cover of radius {}", 2.0 * scale),
            )
        }
    };
    Ok((SubsetArray::from_entries(space.len(), parts)?, how))
}

pub struct AsdimRun {
    pub matrix: AugmentedMatrix,
    pub report: DecompositionReport,
    pub doc: ReportDoc,
}

pub fn run_asdim(space: &FiniteMetricSpace, r: f64, m: usize) -> Result<AsdimRun, DecompositionError> {
    let (parts, how) = asdim_parts(space, r, m)?;
    let matrix = asdim_matrix(space, &parts, r, m)?;
    let report = verify_asdim_matrix(space, &matrix, r);
    let mut doc = ReportDoc::new(input("asdim", space, json!({ "r": r, "m": m })), &report)
        .with_artifact(&AugmentedDoc::from_augmented(space, &matrix));
    doc.notes.push(how);
    Ok(AsdimRun { matrix, report, doc })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerpDoc {
    pub y: Vec<usize>,
    pub z: ArrayDoc,
    pub s: f64,
    pub r: f64,
    pub m: usize,
}

pub fn run_perp(
    space: &FiniteMetricSpace,
    y: &Subset,
    z: &SubsetArray,
    s: f64,
    r: f64,
    m: usize,
) -> Result<(DecompositionReport, ReportDoc), DecompositionError> {
    let report = perp_report(space, y, z, s, r, m)?;
    let doc = ReportDoc::new(input("perp", space, json!({ "r": r, "s": s, "m": m })), &report)
        .with_artifact(&PerpDoc {
            y: y.to_vec(),
            z: ArrayDoc::from_array(space, z),
            s,
            r,
            m,
        });
    Ok((report, doc))
}

fn perp_report(
    space: &FiniteMetricSpace,
    y: &Subset,
    z: &SubsetArray,
    s: f64,
    r: f64,
    m: usize,
) -> Result<DecompositionReport, DecompositionError> {
    let at_s = ScaleGraph::new(space, s);
    let at_r = ScaleGraph::new(space, r);
    let yperp = perp_array(&at_s, y, m);
    let split = perp_split(y, z, &yperp)?;
    check_perp(&at_s, &at_r, y, z, &yperp, &split)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineDoc {
    pub xset: Vec<usize>,
    pub parts: ArrayDoc,
    pub certs: Vec<CertDoc>,
    pub r: f64,
    pub s: f64,
    pub m: Dist,
    pub rho: f64,
    pub cover_bound: Dist,
    pub predicted: Dist,
}

impl RefineDoc {
    fn new(space: &FiniteMetricSpace, xset: &Subset, f: &Refinement) -> RefineDoc {
        RefineDoc {
            xset: xset.to_vec(),
            parts: ArrayDoc::from_array(space, &f.parts),
            certs: f.certs.iter().map(|&c| c.into()).collect(),
            r: f.r,
            s: f.s,
            m: Dist(f.m),
            rho: f.rho,
            cover_bound: Dist(f.cover_bound),
            predicted: Dist(f.predicted),
        }
    }

    fn decode(&self, space: &FiniteMetricSpace) -> Result<(Subset, Refinement), FormatError> {
        Ok((
            subset(space.len(), &self.xset)?,
            Refinement {
                parts: self.parts.to_array(space)?,
                certs: self.certs.iter().map(|&c| c.into()).collect(),
                r: self.r,
                s: self.s,
                m: self.m.0,
                rho: self.rho,
                cover_bound: self.cover_bound.0,
                predicted: self.predicted.0,
            },
        ))
    }
}

pub struct RefineRun {
    pub refinement: Refinement,
    pub report: DecompositionReport,
    pub doc: ReportDoc,
}

/// Refines `xset` with its own scale-r certificate.
pub fn run_refine(space: &FiniteMetricSpace, xset: &Subset, r: f64, s: f64) -> Result<RefineRun, DecompositionError> {
    let cert = ScaleGraph::new(space, r).certificate(xset);
    let refinement = refine_disjoint(space, xset, cert, s)?;
    let report = check_refinement(space, xset, &refinement);
    let doc = ReportDoc::new(input("refine", space, json!({ "r": r, "s": s })), &report)
        .with_artifact(&RefineDoc::new(space, xset, &refinement));
    Ok(RefineRun {
        refinement,
        report,
        doc,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductDoc {
    pub matrix: AugmentedDoc,
    pub yparts: ArrayDoc,
    pub s: f64,
}

pub struct ProductRun {
    pub space: FiniteMetricSpace,
    pub report: DecompositionReport,
    pub doc: ReportDoc,
}

/// `X × Y`: `Y` is refined at `s` from its scale-r certificate, `X` gets an
/// augmented matrix with one row per refined part, and the two are crossed.
pub fn run_product(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    r: f64,
    s: f64,
    norm: Norm,
) -> Result<ProductRun, DecompositionError> {
    let full = Subset::full(y.len());
    let cert = ScaleGraph::new(y, r).certificate(&full);
    let yparts = refine_disjoint(y, &full, cert, s)?;
    let m = yparts.len().max(1);
    let (parts, how) = asdim_parts(x, r, m)?;
    let matrix = asdim_matrix(x, &parts, r, m)?;
    let space = FiniteMetricSpace::product(Arc::new(x.clone()), Arc::new(y.clone()), norm);
    let split = product_split(&space, &matrix, &yparts.parts, s)?;
    let mut report = split.report;
    report.absorb("x", &verify_asdim_matrix(x, &matrix, r));
    let mut doc = ReportDoc::new(
        input("product", &space, json!({ "r": r, "s": s, "m": m })),
        &report,
    )
    .with_artifact(&ProductDoc {
        matrix: AugmentedDoc::from_augmented(x, &matrix),
        yparts: ArrayDoc::from_array(y, &yparts.parts),
        s,
    });
    doc.notes.push(how);
    Ok(ProductRun { space, report, doc })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncDoc {
    pub factors: Vec<SpaceDoc>,
    pub k: f64,
    pub s: f64,
    pub truncation: usize,
    pub norm: NormDoc,
    pub head_radius: Option<f64>,
}

/// Factor `i` (1-based) is `I_len` scaled by `2i`, hence `2i`-discrete.
pub fn discrete_factors(len: usize, count: usize) -> Vec<Arc<FiniteMetricSpace>> {
    (1..=count)
        .map(|i| Arc::new(FiniteMetricSpace::scaled_interval(len, 2.0 * i as f64)))
        .collect()
}

pub fn run_trunc(
    factors: &[Arc<FiniteMetricSpace>],
    k: f64,
    s: f64,
    truncation: usize,
    norm: Norm,
    head_radius: Option<f64>,
) -> Result<(TruncatedProduct, ReportDoc), DecompositionError> {
    let t = truncated_product_decomposition(factors, k, s, truncation, norm, head_radius)?;
    let doc = ReportDoc::new(
        input(
            "trunc-product",
            &t.space,
            json!({ "k": k, "s": s, "truncation": truncation, "head_len": t.head_len }),
        ),
        &t.report,
    )
    .with_artifact(&TruncDoc {
        factors: factors.iter().map(|f| SpaceDoc::from_space(f)).collect(),
        k,
        s,
        truncation,
        norm: norm.into(),
        head_radius,
    });
    Ok((t, doc))
}

/// Which family a scaling study runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Interval,
    Grid(Norm),
}

impl Family {
    pub fn space(self, n: usize) -> FiniteMetricSpace {
        match self {
            Family::Interval => FiniteMetricSpace::interval(n),
            Family::Grid(norm) => FiniteMetricSpace::grid(&[n, n], norm),
        }
    }

    pub fn name(self) -> String {
        match self {
            Family::Interval => "asdim-interval".into(),
            Family::Grid(norm) => format!("asdim-grid-{}", norm.name()),
        }
    }
}

/// One asdim run per size; a run that cannot be built yields an infinite,
/// failed row rather than aborting the study.
pub fn scaling_rows(family: Family, sizes: &[usize], r: f64, m: usize) -> Vec<ScalingRow> {
    sizes
        .iter()
        .map(|&n| {
            let space = family.space(n);
            let (max_bound, passed) = match run_asdim(&space, r, m) {
                Ok(run) => (run.matrix.max_bound(), run.report.passed()),
                Err(_) => (coarse_core::ExtReal::INFINITY, false),
            };
            ScalingRow {
                n,
                construction: family.name(),
                r,
                m,
                max_bound,
                passed,
            }
        })
        .collect()
}

/// Anything `verify` accepts.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum VerifyInput {
    Report(Box<ReportDoc>),
    Profile(Box<ProfileInstanceDoc>),
}

pub fn parse_verify_input(text: &str) -> Result<VerifyInput, FormatError> {
    serde_json::from_str(text).map_err(FormatError::from)
}

/// Re-checks a document from scratch. Report documents get every recorded
/// part certificate re-measured, plus the construction-specific checker run
/// on the stored artifact.
pub fn verify_document(input: &VerifyInput) -> Result<DecompositionReport, FormatError> {
    match input {
        VerifyInput::Profile(doc) => {
            let (space, profile, inst) = doc.decode()?;
            Ok(verify_profile_instance(&space, &profile, &inst))
        }
        VerifyInput::Report(doc) => verify_report(doc),
    }
}

fn artifact<T: for<'de> Deserialize<'de>>(doc: &ReportDoc) -> Result<T, FormatError> {
    let value = doc
        .artifact
        .clone()
        .ok_or_else(|| FormatError::Invalid("report has no artifact to re-verify".into()))?;
    Ok(serde_json::from_value(value)?)
}

fn verify_report(doc: &ReportDoc) -> Result<DecompositionReport, FormatError> {
    let space = doc.input.space.to_space()?;
    let mut out = DecompositionReport::new();
    let mut certs_hold = true;
    for (i, p) in doc.parts.iter().enumerate() {
        let pts = subset(space.len(), &p.points)?;
        if let Some(c) = p.certificate {
            let measured = ScaleGraph::new(&space, c.scale).components_norm(&pts);
            out.measure(format!("part[{i}]"), measured);
            certs_hold &= measured <= c.bound.0;
        }
    }
    out.verdict("verify.part_certificates", certs_hold);
    let checked = match doc.input.construction.as_str() {
        "asdim" => {
            let a: AugmentedDoc = artifact(doc)?;
            let matrix = a.to_augmented(&space)?;
            let r = *doc
                .scales
                .get("r")
                .ok_or_else(|| FormatError::Invalid("report has no scale r".into()))?;
            verify_asdim_matrix(&space, &matrix, r)
        }
        "perp" => {
            let p: PerpDoc = artifact(doc)?;
            let y = subset(space.len(), &p.y)?;
            let z = p.z.to_array(&space)?;
            perp_report(&space, &y, &z, p.s, p.r, p.m).map_err(|e| FormatError::Invalid(e.to_string()))?
        }
        "refine" => {
            let f: RefineDoc = artifact(doc)?;
            let (xset, refinement) = f.decode(&space)?;
            check_refinement(&space, &xset, &refinement)
        }
        "product" => {
            let p: ProductDoc = artifact(doc)?;
            let (x, y, _) = space
                .product_factors()
                .ok_or_else(|| FormatError::Invalid("product report on a non-product space".into()))?;
            let matrix = p.matrix.to_augmented(x)?;
            let yparts = p.yparts.to_array(y)?;
            let split = product_split(&space, &matrix, &yparts, p.s)
                .map_err(|e| FormatError::Invalid(e.to_string()))?;
            let mut report = split.report;
            report.absorb("x", &verify_asdim_matrix(x, &matrix, matrix.scale));
            let same = split.z.entries().iter().map(Subset::to_vec).eq(doc
                .parts
                .iter()
                .map(|p| p.points.clone()));
            report.verdict("verify.parts_match", same);
            report
        }
        "trunc-product" => {
            let t: TruncDoc = artifact(doc)?;
            let factors = t
                .factors
                .iter()
                .map(|f| f.to_space().map(Arc::new))
                .collect::<Result<Vec<_>, _>>()?;
            let rerun = truncated_product_decomposition(
                &factors,
                t.k,
                t.s,
                t.truncation,
                t.norm.into(),
                t.head_radius,
            )
            .map_err(|e| FormatError::Invalid(e.to_string()))?;
            let mut report = rerun.report;
            let same = rerun.space == space
                && doc.parts.first().map(|p| p.points.clone()) == Some(rerun.z0.to_vec());
            report.verdict("verify.parts_match", same);
            report
        }
        other => {
            return Err(FormatError::Invalid(format!("unknown construction {other:?}")));
        }
    };
    if matches!(doc.input.construction.as_str(), "asdim" | "perp" | "refine") {
        let listed = doc.parts.iter().map(|p| (p.label.as_str(), p.points.clone()));
        let rebuilt = checked.parts.iter().map(|p| (p.label.as_str(), p.points.to_vec()));
        out.verdict("verify.parts_match", listed.eq(rebuilt));
    }
    out.absorb("recheck", &checked);
    Ok(out)
}
