//! Cohomology of seaweeds with a center: `H^n(s, s) ≅ ⊕ ∧^i Z* ⊗ H^j(Q, s)` with
//! `Q = s / Z(s)` acting on s through a chosen complement, and the cup product
//! `z* ⌣ f¹` producing central 2-cocycles.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chevalley::{Coordinates, LieAlgebra};
use crate::cochain::{binomial, Cochain, ComplexContext};
use crate::error::{Error, Result};
use crate::exactlin::{Rational, SparseVec};
use crate::seaweed::{split_standalone, CenterSplit, Seaweed, Section};

/// `s` together with a splitting `s = Z(s) ⊕ s′`, in the local basis of s.
pub struct SplitAlgebra {
    pub s: Arc<LieAlgebra>,
    pub split: CenterSplit,
    /// `C(s, s)`.
    ss: ComplexContext,
    /// `C(Q, s)` with Q realized as the complement s′.
    qs: ComplexContext,
    /// Coordinates in the basis `center ∪ complement`.
    adapted: Coordinates,
}

impl SplitAlgebra {
    pub fn new(s: LieAlgebra, split: CenterSplit) -> Result<SplitAlgebra> {
        let s = Arc::new(s);
        let module: Vec<SparseVec> = (0..s.dim()).map(SparseVec::unit).collect();
        let ss = ComplexContext::new(&s, module.clone(), module.clone())?;
        let qs = ComplexContext::new(&s, split.complement_basis.clone(), module)?;
        let mut all = split.center_basis.clone();
        all.extend(split.complement_basis.iter().cloned());
        let adapted = Coordinates::new(&all)?;
        Ok(SplitAlgebra {
            s,
            split,
            ss,
            qs,
            adapted,
        })
    }

    pub fn from_seaweed(sw: &Seaweed, section: &Section) -> Result<SplitAlgebra> {
        let split = sw.split_over_center(section)?;
        SplitAlgebra::new(sw.algebra(), split)
    }

    /// Splitting by the algebra's declared section.
    pub fn from_standalone(s: LieAlgebra) -> Result<SplitAlgebra> {
        let split = split_standalone(&s)?;
        SplitAlgebra::new(s, split)
    }

    pub fn center_dim(&self) -> usize {
        self.split.center_basis.len()
    }

    pub fn ss(&self) -> &ComplexContext {
        &self.ss
    }

    pub fn qs(&self) -> &ComplexContext {
        &self.qs
    }

    pub fn direct_dim(&self, n: usize) -> usize {
        self.ss.cohomology_dims(n, self.ss.default_reduction()).h
    }

    /// `dim H^j(Q, s)`, with representatives for `j ≤ 1`.
    pub fn quotient_cohomology(&self, j: usize) -> QuotientCohomology {
        let r = self.qs.default_reduction();
        let dim = self.qs.cohomology_dims(j, r).h;
        let representatives = if j <= 1 {
            self.qs.cohomology_representatives(j, r)
        } else {
            Vec::new()
        };
        QuotientCohomology {
            degree: j,
            dim,
            representatives,
        }
    }

    pub fn cg_dims(&self, n: usize) -> CgReport {
        let z = self.center_dim();
        let term_dims: Vec<(usize, usize, usize)> = (0..=n)
            .map(|i| {
                let j = n - i;
                let c = binomial(z, i);
                let h = if c == 0 { 0 } else { self.quotient_cohomology(j).dim };
                (i, j, c * h)
            })
            .collect();
        let formula_total = term_dims.iter().map(|t| t.2).sum();
        let direct_total = self.direct_dim(n);
        CgReport {
            n,
            term_dims,
            formula_total,
            direct_total,
            matches: formula_total == direct_total,
        }
    }

    /// `(dim ∧²Z* ⊗ Z, dim Z* ⊗ H¹(Q,s))`.
    pub fn h2_report(&self) -> TermReport {
        let z = self.center_dim();
        TermReport::new(
            2,
            binomial(z, 2) * z,
            z * self.quotient_cohomology(1).dim,
        )
    }

    /// `(dim ∧³Z* ⊗ Z, dim ∧²Z* ⊗ H¹(Q,s))`.
    pub fn h3_report(&self) -> TermReport {
        let z = self.center_dim();
        TermReport::new(
            3,
            binomial(z, 3) * z,
            binomial(z, 2) * self.quotient_cohomology(1).dim,
        )
    }

    /// Dual functional to the k-th center vector: 1 on it, 0 on the other
    /// center vectors and on the complement. Indexed by the local basis of s.
    pub fn z_functional(&self, k: usize) -> Vec<Rational> {
        (0..self.s.dim())
            .map(|i| self.adapted.coords(&SparseVec::unit(i)).unwrap().get(k))
            .collect()
    }

    /// `x̄`: complement part of x, in the domain coordinates of `C(Q, s)`.
    pub fn project(&self, x: &SparseVec) -> SparseVec {
        let z = self.center_dim();
        let c = self.adapted.coords(x).expect("vector in s");
        SparseVec::from_pairs(c.iter().filter(|(i, _)| *i >= z).map(|(i, v)| (i - z, v.clone())))
    }

    /// `φ(x, y) = z*(x) f¹(ȳ) − z*(y) f¹(x̄)`.
    pub fn cup_with_center(&self, zstar: &[Rational], f1: &Cochain) -> Result<Cochain> {
        if f1.degree() != 1 || !self.qs.coboundary(f1)?.is_zero() {
            return Err(Error::NotCocycle);
        }
        let d = self.s.dim();
        let images: Vec<SparseVec> = (0..d)
            .map(|i| f1.evaluate(&[self.project(&SparseVec::unit(i))]))
            .collect();
        let mut phi = self.ss.zero(2);
        for a in 0..d {
            for b in a + 1..d {
                let mut v = images[b].scaled(&zstar[a]);
                v.add_assign_scaled(&-zstar[b].clone(), &images[a]);
                phi.set(&[a, b], v);
            }
        }
        debug_assert!(self.ss.coboundary(&phi).unwrap().is_zero());
        Ok(phi)
    }

    /// Discrepancies between direct computation and the two claims about
    /// quotient cohomology: the decomposition formula, and vanishing of
    /// `H^n(Q, s)` for `n ≥ 1`.
    pub fn discrepancies(&self, max_degree: usize) -> Vec<Discrepancy> {
        let mut out = Vec::new();
        for n in 0..=max_degree {
            let r = self.cg_dims(n);
            if !r.matches {
                out.push(Discrepancy {
                    check: format!("decomposition formula at n = {n}"),
                    expected: r.formula_total.to_string(),
                    observed: r.direct_total.to_string(),
                    severity: Severity::Error,
                });
            }
        }
        for j in 1..=max_degree.min(self.qs.domain_dim()) {
            let h = self.quotient_cohomology(j).dim;
            if h != 0 {
                out.push(Discrepancy {
                    check: format!("H^{j}(Q, s) vanishes"),
                    expected: "0".into(),
                    observed: h.to_string(),
                    severity: Severity::Informational,
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct QuotientCohomology {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgReport {
    pub n: usize,
    /// `(i, j, C(dim Z, i) · dim H^j(Q, s))` for `i + j = n`.
    pub term_dims: Vec<(usize, usize, usize)>,
    pub formula_total: usize,
    pub direct_total: usize,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermReport {
    pub n: usize,
    pub central: usize,
    pub mixed: usize,
    pub total: usize,
}

impl TermReport {
    fn new(n: usize, central: usize, mixed: usize) -> TermReport {
        TermReport {
            n,
            central,
            mixed,
            total: central + mixed,
        }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.central, self.mixed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Informational,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub severity: Severity,
}

/// `f¹` on Q with `f¹(x̄) = Σ c_k z_k` for a given assignment on the complement basis.
pub fn quotient_cochain(sa: &SplitAlgebra, values: &[(usize, SparseVec)]) -> Cochain {
    sa.qs
        .cochain_from(1, values.iter().map(|(a, v)| (vec![*a], v.clone())))
}
