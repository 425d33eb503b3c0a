use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ext::ExtReal;
use crate::scale::Dim0Certificate;
use crate::subset::Subset;

/// A labelled part of a decomposition with its recorded certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Part {
    pub label: String,
    pub points: Subset,
    pub certificate: Option<Dim0Certificate>,
}

/// Scales, parts, verdicts and measured bounds of one construction run.
///
/// Maps are ordered so that serialised reports are byte-reproducible.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecompositionReport {
    pub scales: BTreeMap<String, f64>,
    pub parts: Vec<Part>,
    pub verdicts: BTreeMap<String, bool>,
    pub measured: BTreeMap<String, ExtReal>,
}

impl DecompositionReport {
    pub fn new() -> DecompositionReport {
        DecompositionReport::default()
    }

    pub fn scale(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.scales.insert(name.into(), value);
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool) -> &mut Self {
        self.verdicts.insert(name.into(), pass);
        self
    }

    pub fn measure(&mut self, name: impl Into<String>, value: ExtReal) -> &mut Self {
        self.measured.insert(name.into(), value);
        self
    }

    pub fn part(
        &mut self,
        label: impl Into<String>,
        points: Subset,
        certificate: Option<Dim0Certificate>,
    ) -> &mut Self {
        self.parts.push(Part {
            label: label.into(),
            points,
            certificate,
        });
        self
    }

    /// All verdicts pass (vacuously true without verdicts).
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Copies every entry of `other` under `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: &DecompositionReport) {
        for (k, v) in &other.scales {
            self.scales.insert(alloc::format!("{prefix}.{k}"), *v);
        }
        for (k, v) in &other.verdicts {
            self.verdicts.insert(alloc::format!("{prefix}.{k}"), *v);
        }
        for (k, v) in &other.measured {
            self.measured.insert(alloc::format!("{prefix}.{k}"), *v);
        }
    }
}
