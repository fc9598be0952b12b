//! One-parameter deformations `[x, y]_t = [x, y] + t·f(x, y)` along a 2-cochain.

use serde::{Deserialize, Serialize};

use crate::chevalley::LieAlgebra;
use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, Rational, SparseVec};

#[derive(Clone, Debug)]
pub struct DeformedAlgebra {
    pub base: LieAlgebra,
    pub direction: Cochain,
    pub parameter: Rational,
    /// Structure constants of `[-, -]_t`; Jacobi is not assumed.
    pub algebra: LieAlgebra,
}

fn check_direction(base: &LieAlgebra, f2: &Cochain) -> Result<()> {
    if f2.degree() != 2 {
        return Err(Error::Dimension(format!("direction has degree {}, expected 2", f2.degree())));
    }
    if let Some((m, v)) = f2
        .entries()
        .find(|(m, v)| 64 - m.leading_zeros() as usize > base.dim() || v.max_index().is_some_and(|k| k >= base.dim()))
    {
        return Err(Error::Dimension(format!("direction entry {m:#b} -> {v} exceeds dim {}", base.dim())));
    }
    Ok(())
}

/// `f2` must be a cochain over `(s, s)` in the basis of `base`.
pub fn deform(base: &LieAlgebra, f2: &Cochain, t: &Rational) -> Result<DeformedAlgebra> {
    check_direction(base, f2)?;
    let d = base.dim();
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut v = base.bracket(i, j).clone();
            v.add_assign_scaled(t, &f2.value(&[i, j]));
            brackets.push((i, j, v));
        }
    }
    let algebra = LieAlgebra::from_brackets_unchecked(base.labels().to_vec(), base.cartan_indices().to_vec(), brackets)?
        .with_form_scale(base.form_scale().clone());
    Ok(DeformedAlgebra {
        base: base.clone(),
        direction: f2.clone(),
        parameter: t.clone(),
        algebra,
    })
}

/// Coefficients of the Jacobi expression of `[-, -]_t` as a polynomial in t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiInT {
    /// `Σ_cyc [f(x,y), z] + f([x,y], z)`, equal to `−δf`.
    pub linear_term_zero: bool,
    /// `Σ_cyc f(f(x,y), z)`.
    pub quadratic_term_zero: bool,
}

impl JacobiInT {
    pub fn holds_for_all_t(&self) -> bool {
        self.linear_term_zero && self.quadratic_term_zero
    }
}

/// Linear and quadratic Jacobi coefficients on the basis triple `(x, y, z)`.
pub fn jacobi_coefficients(base: &LieAlgebra, f2: &Cochain, x: usize, y: usize, z: usize) -> (SparseVec, SparseVec) {
    let f = |a: &SparseVec, b: usize| -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in a.iter() {
            if i != b {
                out.add_assign_scaled(c, &f2.value(&[i, b]));
            }
        }
        out
    };
    let mut lin = SparseVec::new();
    let mut quad = SparseVec::new();
    let one = Rational::from_integer(1.into());
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        let fab = if a == b { SparseVec::new() } else { f2.value(&[a, b]) };
        let bab = base.bracket(a, b);
        // [f(a,b), c]
        for (i, k) in fab.iter() {
            lin.add_assign_scaled(k, base.bracket(i, c));
        }
        lin.add_assign_scaled(&one, &f(bab, c));
        quad.add_assign_scaled(&one, &f(&fab, c));
    }
    (lin, quad)
}

pub fn jacobi_in_t(base: &LieAlgebra, f2: &Cochain) -> Result<JacobiInT> {
    check_direction(base, f2)?;
    let d = base.dim();
    let mut out = JacobiInT {
        linear_term_zero: true,
        quadratic_term_zero: true,
    };
    for x in 0..d {
        for y in x + 1..d {
            for z in y + 1..d {
                let (lin, quad) = jacobi_coefficients(base, f2, x, y, z);
                out.linear_term_zero &= lin.is_zero();
                out.quadratic_term_zero &= quad.is_zero();
            }
        }
    }
    Ok(out)
}

/// Coarse isomorphism invariants: dimension, center, derived series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub dim: usize,
    pub center_dim: usize,
    /// `dim [L, L]` and `dim [[L, L], [L, L]]`.
    pub derived_dims: [usize; 2],
}

fn bracket_span(l: &LieAlgebra, basis: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (a, x) in basis.iter().enumerate() {
        for y in &basis[a + 1..] {
            let v = l.bracket_vec(x, y);
            if e.insert(&v) {
                out.push(v);
            }
        }
    }
    out
}

pub fn invariant_profile(l: &LieAlgebra) -> InvariantProfile {
    let all: Vec<SparseVec> = (0..l.dim()).map(SparseVec::unit).collect();
    let d1 = bracket_span(l, &all);
    let d2 = bracket_span(l, &d1);
    InvariantProfile {
        dim: l.dim(),
        center_dim: l.center().len(),
        derived_dims: [d1.len(), d2.len()],
    }
}

/// Whether `[-, -]_t` satisfies Jacobi at this parameter value.
pub fn is_lie_at(d: &DeformedAlgebra) -> bool {
    d.algebra.check_jacobi().is_ok()
}

pub fn same_table(a: &LieAlgebra, b: &LieAlgebra) -> bool {
    a.dim() == b.dim()
        && (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.bracket(i, j) == b.bracket(i, j)))
}

/// `t ↦ [x, y]_t − [x, y]`, which should be `t·f(x, y)`.
pub fn bracket_shift(d: &DeformedAlgebra, i: usize, j: usize) -> SparseVec {
    let mut v = d.algebra.bracket(i, j).clone();
    v.add_assign_scaled(&-Rational::from_integer(1.into()), d.base.bracket(i, j));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::fixtures;
    use crate::cochain::ComplexContext;
    use crate::exactlin::{int, rat};
    use std::sync::Arc;

    fn g2() -> (LieAlgebra, ComplexContext, Cochain) {
        let s = fixtures::g2_seaweed();
        let arc = Arc::new(s.clone());
        let ctx = ComplexContext::from_indices(&arc, &[0, 1, 2], &[0, 1, 2]).unwrap();
        let f2 = ctx.cochain_from(2, [(vec![1, 2], SparseVec::from_pairs([(1, int(2)), (2, int(3))]))]);
        (s, ctx, f2)
    }

    #[test]
    fn g2_deformation() {
        let (s, _, f2) = g2();
        for t in [int(1), int(-2), rat(5, 3)] {
            let d = deform(&s, &f2, &t).unwrap();
            assert_eq!(
                d.algebra.bracket(1, 2),
                &SparseVec::from_pairs([(1, &t * int(2)), (2, &t * int(3))])
            );
            assert_eq!(bracket_shift(&d, 1, 2), f2.value(&[1, 2]).scaled(&t));
            assert_eq!(d.algebra.bracket(0, 1), &SparseVec::single(0, int(6)));
            assert_eq!(d.algebra.bracket(0, 2), &SparseVec::single(0, int(-4)));
            assert!(is_lie_at(&d));
            let back = deform(&d.algebra, &f2, &-t.clone()).unwrap();
            assert!(same_table(&back.algebra, &s));
        }
        let d0 = deform(&s, &f2, &int(0)).unwrap();
        assert!(same_table(&d0.algebra, &s));
        assert_eq!(jacobi_in_t(&s, &f2).unwrap(), JacobiInT { linear_term_zero: true, quadratic_term_zero: true });
    }

    #[test]
    fn linear_term_is_minus_coboundary() {
        let (s, ctx, _) = g2();
        let f = ctx.cochain_from(
            2,
            [
                (vec![0, 1], SparseVec::unit(2)),
                (vec![0, 2], SparseVec::single(1, int(5))),
            ],
        );
        let df = ctx.coboundary(&f).unwrap();
        let (lin, _) = jacobi_coefficients(&s, &f, 0, 1, 2);
        assert_eq!(lin, df.value(&[0, 1, 2]).neg());
        assert!(!jacobi_in_t(&s, &f).unwrap().linear_term_zero);
        assert!(jacobi_in_t(&s, &ctx.zero(2)).unwrap().holds_for_all_t());
    }

    #[test]
    fn profiles() {
        let (s, _, f2) = g2();
        let p0 = invariant_profile(&s);
        assert_eq!((p0.dim, p0.center_dim, p0.derived_dims), (3, 1, [1, 0]));
        let p1 = invariant_profile(&deform(&s, &f2, &int(1)).unwrap().algebra);
        assert_eq!(p1.center_dim, 0);
        assert_eq!(invariant_profile(&LieAlgebra::abelian(4)).derived_dims, [0, 0]);
    }
}
