//! Serializable reports combining every check for one seaweed.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::casimir::{OperatorContext, RigidityCertificate};
use crate::chevalley::{construct, LieAlgebra};
use crate::error::{Error, Result};
use crate::gerstenhaber::{CgReport, Discrepancy, Severity, SplitAlgebra};
use crate::rootsystem::RootSystem;
use crate::seaweed::{build_seaweed, component_names, is_indecomposable, render_split_dynkin, Seaweed, SeaweedSpec, Section};

pub const SCHEMA_VERSION: &str = "1";

/// Full-range cohomology is computed only up to this dimension of s.
pub const FULL_RANGE_DIM: usize = 8;
pub const DEFAULT_DEGREE_CAP: usize = 3;
/// Highest degree of the decomposition-formula comparison.
pub const CG_MAX_DEGREE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub pi1: BTreeSet<usize>,
    pub pi2: BTreeSet<usize>,
    pub display: String,
}

impl From<&SeaweedSpec> for SpecEcho {
    fn from(s: &SeaweedSpec) -> SpecEcho {
        SpecEcho {
            type_label: s.type_label.to_string(),
            rank: s.rank,
            pi1: s.pi1.clone(),
            pi2: s.pi2.clone(),
            display: s.to_string(),
        }
    }
}

impl SpecEcho {
    pub fn to_spec(&self) -> Result<SeaweedSpec> {
        SeaweedSpec::parse(
            &self.type_label,
            self.rank,
            &join(&self.pi1),
            &join(&self.pi2),
        )
    }
}

fn join(s: &BTreeSet<usize>) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Info {
    pub dim_s: usize,
    pub dim_r: Option<usize>,
    pub dim_n: Option<usize>,
    pub dim_center: usize,
    pub indecomposable: Option<bool>,
    pub components: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDims {
    pub degree: usize,
    pub z: usize,
    pub b: usize,
    pub h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub spec: Option<SpecEcho>,
    pub diagram: Option<String>,
    pub info: Info,
    pub reduction: String,
    /// `H^n(s, s)`.
    pub dims: Vec<DegreeDims>,
    /// `H^q(n, s)^r`.
    pub invariant_dims: Vec<DegreeDims>,
    pub certificates: Vec<RigidityCertificate>,
    pub cg: Vec<CgReport>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Report {
    /// Discrepancies that fail verification.
    pub fn failures(&self, strict: bool) -> Vec<&Discrepancy> {
        self.discrepancies
            .iter()
            .filter(|d| strict || d.severity == Severity::Error)
            .collect()
    }

    pub fn rigid_verified(&self) -> bool {
        self.certificates.iter().all(|c| c.success)
            && self.invariant_dims.iter().all(|d| d.h == 0)
    }

    pub fn cg_verified(&self) -> bool {
        self.cg.iter().all(|c| c.matches)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub max_degree: Option<usize>,
    /// Permit degrees beyond the default cap on large seaweeds.
    pub allow_large: bool,
    /// Invariant cohomology and rigidity certificates.
    pub certificates: bool,
    /// Cap on the degrees of invariant cohomology and certificates.
    pub max_invariant_degree: Option<usize>,
}

/// What a report is computed for.
pub enum Target {
    Seaweed(Seaweed),
    /// An algebra given only by structure constants, with an optional spec echo.
    Standalone(LieAlgebra, Option<SeaweedSpec>),
}

impl Target {
    pub fn canonical(spec: &SeaweedSpec) -> Result<Target> {
        let g = Arc::new(construct(&RootSystem::build(spec.type_label, spec.rank)?)?);
        Ok(Target::Seaweed(build_seaweed(&g, spec)?))
    }

    /// A fixture with root data hosts the seaweed `spec`; one without is the
    /// seaweed itself.
    pub fn from_fixture(alg: LieAlgebra, spec: Option<SeaweedSpec>) -> Result<Target> {
        if alg.has_roots() {
            let spec = spec.ok_or_else(|| Error::Context("a root-annotated fixture needs a seaweed spec".into()))?;
            Ok(Target::Seaweed(build_seaweed(&Arc::new(alg), &spec)?))
        } else {
            Ok(Target::Standalone(alg, spec))
        }
    }

    pub fn spec(&self) -> Option<&SeaweedSpec> {
        match self {
            Target::Seaweed(sw) => Some(&sw.spec),
            Target::Standalone(_, s) => s.as_ref(),
        }
    }

    fn algebra(&self) -> LieAlgebra {
        match self {
            Target::Seaweed(sw) => sw.algebra(),
            Target::Standalone(a, _) => a.clone(),
        }
    }

    fn split(&self) -> Result<SplitAlgebra> {
        match self {
            Target::Seaweed(sw) => SplitAlgebra::from_seaweed(sw, &Section::KillingOrthogonal),
            Target::Standalone(a, _) => SplitAlgebra::from_standalone(a.clone()),
        }
    }
}

/// Dimensions and component data without any cohomology.
pub fn info(target: &Target) -> Info {
    let spec = target.spec();
    let (dim_s, dim_r, dim_n, dim_center) = match target {
        Target::Seaweed(sw) => (
            sw.dim(),
            Some(sw.reductive.len()),
            Some(sw.nilradical.len()),
            sw.center().len(),
        ),
        Target::Standalone(a, _) => (a.dim(), None, None, a.center().len()),
    };
    Info {
        dim_s,
        dim_r,
        dim_n,
        dim_center,
        indecomposable: spec.map(is_indecomposable),
        components: spec.map(component_names).unwrap_or_default(),
    }
}

/// Degrees of `H^n(s, s)` reported by default.
pub fn default_max_degree(dim_s: usize) -> usize {
    if dim_s <= FULL_RANGE_DIM {
        dim_s
    } else {
        DEFAULT_DEGREE_CAP
    }
}

fn error(check: String, expected: String, observed: String) -> Discrepancy {
    Discrepancy {
        check,
        expected,
        observed,
        severity: Severity::Error,
    }
}

pub fn build_report(target: &Target, opts: &Options) -> Result<Report> {
    let s = target.algebra();
    let dim_s = s.dim();
    let max_degree = match opts.max_degree {
        Some(d) if d > default_max_degree(dim_s) && d <= dim_s && !opts.allow_large => {
            return Err(Error::Context(format!(
                "degree {d} exceeds the cap {} for dim s = {dim_s}; pass --allow-large to override",
                default_max_degree(dim_s)
            )))
        }
        Some(d) => d,
        None => default_max_degree(dim_s),
    };
    let split = target.split()?;
    let spec = target.spec();
    let mut discrepancies = Vec::new();

    let dim_center = split.center_dim();
    if let Some(spec) = spec {
        let expected = spec.rank - spec.union().len();
        if dim_center != expected {
            discrepancies.push(error(
                "dim Z(s) = rank − |π₁ ∪ π₂|".into(),
                expected.to_string(),
                dim_center.to_string(),
            ));
        }
    }

    let ss = split.ss();
    let reduction = ss.default_reduction();
    let dims: Vec<DegreeDims> = (0..=max_degree)
        .map(|n| {
            let d = ss.cohomology_dims(n, reduction);
            DegreeDims {
                degree: n,
                z: d.z,
                b: d.b,
                h: d.h,
            }
        })
        .collect();
    if dim_center == 0 {
        for d in dims.iter().filter(|d| d.h != 0) {
            discrepancies.push(error(
                format!("H^{}(s, s) vanishes", d.degree),
                "0".into(),
                d.h.to_string(),
            ));
        }
    }

    let cg: Vec<CgReport> = if dim_center > 0 {
        (0..=CG_MAX_DEGREE.min(max_degree)).map(|n| split.cg_dims(n)).collect()
    } else {
        Vec::new()
    };
    if dim_center > 0 {
        discrepancies.extend(split.discrepancies(CG_MAX_DEGREE.min(max_degree)));
    }

    let mut invariant_dims = Vec::new();
    let mut certificates = Vec::new();
    if let Target::Seaweed(sw) = target {
        if opts.certificates {
            let octx = OperatorContext::new(sw)?;
            let top = opts
                .max_invariant_degree
                .map_or(sw.nilradical.len(), |m| m.min(sw.nilradical.len()));
            for q in 1..=top {
                let d = octx.ns().invariant_cohomology_dims(q, octx.invariance());
                if d.h != 0 {
                    discrepancies.push(error(
                        format!("H^{q}(n, s)^r vanishes"),
                        "0".into(),
                        d.h.to_string(),
                    ));
                }
                invariant_dims.push(DegreeDims {
                    degree: q,
                    z: d.z,
                    b: d.b,
                    h: d.h,
                });
                let cert = octx.rigidity_certificate(q);
                if !cert.success {
                    discrepancies.push(error(
                        format!("rigidity certificate at q = {q}"),
                        "success".into(),
                        cert.counterexample.clone().unwrap_or_else(|| "failure".into()),
                    ));
                }
                for w in &cert.witnesses {
                    if let (Some(p), Some(o)) = (&w.predicted, &w.observed) {
                        if p != o {
                            discrepancies.push(Discrepancy {
                                check: format!("closed-form Γ̄ scalar at q = {q} on {}", w.cocycle),
                                expected: p.clone(),
                                observed: o.clone(),
                                severity: Severity::Informational,
                            });
                        }
                    }
                }
                certificates.push(cert);
            }
        }
    }

    Ok(Report {
        schema_version: SCHEMA_VERSION.into(),
        spec: spec.map(SpecEcho::from),
        diagram: spec.map(render_split_dynkin),
        info: Info {
            dim_center,
            ..info(target)
        },
        reduction: reduction.as_str().into(),
        dims,
        invariant_dims,
        certificates,
        cg,
        discrepancies,
    })
}
