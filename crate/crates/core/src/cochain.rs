//! Chevalley–Eilenberg complexes `C^q(a, V)` for a subalgebra `a` of an
//! ambient algebra acting on a subspace `V`.
//!
//! A q-cochain stores one module vector per strictly increasing q-tuple of
//! domain indices; tuples are `u64` bitmasks, so domains have at most 64
//! basis vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::{Coordinates, LieAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{int, Echelon, Rational, SparseVec};

pub type Mask = u64;

pub fn mask_of_sorted(t: &[usize]) -> Mask {
    t.iter().fold(0, |m, &i| m | 1 << i)
}

/// Sorts a tuple, returning its mask and the permutation sign, or `None` on repeats.
pub fn sort_tuple(t: &[usize]) -> Option<(Mask, i32)> {
    let mut m: Mask = 0;
    let mut sign = 1;
    for &i in t {
        if m >> i & 1 == 1 {
            return None;
        }
        // Each element already placed above i is an inversion.
        if (m >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        m |= 1 << i;
    }
    Some((m, sign))
}

pub fn tuple_of(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

#[inline]
fn below(m: Mask, i: usize) -> u32 {
    (m & ((1u64 << i) - 1)).count_ones()
}

#[inline]
fn sign_of(parity: u32) -> Rational {
    if parity % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Colexicographic rank of a q-subset among all q-subsets.
fn tuple_rank(m: Mask) -> usize {
    tuple_of(m)
        .iter()
        .enumerate()
        .map(|(k, &c)| binomial(c, k + 1))
        .sum()
}

/// All q-subsets of `0..n` in colexicographic order.
pub fn subsets(n: usize, q: usize) -> Vec<Mask> {
    let mut out = Vec::with_capacity(binomial(n, q));
    if q > n {
        return out;
    }
    if q == 0 {
        out.push(0);
        return out;
    }
    let mut m: Mask = (1u64 << q) - 1;
    let limit: u128 = 1u128 << n;
    while (m as u128) < limit {
        out.push(m);
        // Gosper's hack.
        let c = m & m.wrapping_neg();
        let r = m + c;
        if r == 0 {
            break;
        }
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

#[derive(Clone, Debug)]
enum Frame {
    Indices(HashMap<usize, usize>),
    General(Coordinates),
}

impl Frame {
    fn new(basis: &[SparseVec]) -> Result<Frame> {
        let units: Option<Vec<usize>> = basis
            .iter()
            .map(|v| match v.iter().collect::<Vec<_>>().as_slice() {
                [(i, c)] if c.is_one() => Some(*i),
                _ => None,
            })
            .collect();
        if let Some(ix) = units {
            let map: HashMap<usize, usize> = ix.iter().enumerate().map(|(p, &i)| (i, p)).collect();
            if map.len() == ix.len() {
                return Ok(Frame::Indices(map));
            }
        }
        Ok(Frame::General(Coordinates::new(basis)?))
    }

    fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        match self {
            Frame::Indices(map) => v.remap(|k| map.get(&k).copied()),
            Frame::General(c) => c.coords(v),
        }
    }
}

/// Action of an element on domain and module, in their own coordinates.
#[derive(Clone, Debug)]
pub struct Acting {
    /// `on_domain[a]` = coordinates of `[x, d_a]`.
    pub on_domain: Vec<SparseVec>,
    /// `on_module[j]` = coordinates of `x·v_j`.
    pub on_module: Vec<SparseVec>,
    /// `rev[c]` = pairs `(a, λ)` with λ the `d_c` coefficient of `[x, d_a]`.
    rev: Vec<Vec<(usize, Rational)>>,
}

impl Acting {
    fn new(on_domain: Vec<SparseVec>, on_module: Vec<SparseVec>) -> Acting {
        let mut rev = vec![Vec::new(); on_domain.len()];
        for (a, v) in on_domain.iter().enumerate() {
            for (c, l) in v.iter() {
                rev[c].push((a, l.clone()));
            }
        }
        Acting {
            on_domain,
            on_module,
            rev,
        }
    }

    /// Eigenvalues when the action is diagonal on both bases.
    fn diagonal(&self) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let diag = |cols: &[SparseVec]| -> Option<Vec<Rational>> {
            cols.iter()
                .enumerate()
                .map(|(i, v)| match v.iter().collect::<Vec<_>>().as_slice() {
                    [] => Some(Rational::zero()),
                    [(k, c)] if *k == i => Some((*c).clone()),
                    _ => None,
                })
                .collect()
        };
        Some((diag(&self.on_domain)?, diag(&self.on_module)?))
    }
}

/// Weights of domain and module basis vectors under a family of diagonal elements.
#[derive(Clone, Debug, Default)]
struct Weights {
    domain: Vec<Vec<Rational>>,
    module: Vec<Vec<Rational>>,
}

impl Weights {
    fn from_diagonal(diag: &[(Vec<Rational>, Vec<Rational>)], m: usize, n: usize) -> Weights {
        Weights {
            domain: (0..m).map(|a| diag.iter().map(|d| d.0[a].clone()).collect()).collect(),
            module: (0..n).map(|j| diag.iter().map(|d| d.1[j].clone()).collect()).collect(),
        }
    }

    fn len(&self) -> usize {
        self.domain.first().map_or(0, Vec::len)
    }

    fn tuple_weight(&self, t: Mask) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.len()];
        for a in tuple_of(t) {
            for (x, y) in w.iter_mut().zip(&self.domain[a]) {
                *x += y;
            }
        }
        w
    }
}

/// Which part of the cochain space enters a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// All cochains.
    Full,
    /// Cochains of weight zero for the toral elements of the domain.
    WeightZero,
}

impl Reduction {
    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::Full => "full",
            Reduction::WeightZero => "weight-zero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub z: usize,
    pub b: usize,
    pub h: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantDims {
    pub z: usize,
    pub b: usize,
    pub h: usize,
    /// `dim (B^q ∩ invariant cochains)`.
    pub b_cap: usize,
}

impl InvariantDims {
    pub fn coboundaries_agree(&self) -> bool {
        self.b == self.b_cap
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    domain_dim: usize,
    module_dim: usize,
    values: BTreeMap<Mask, SparseVec>,
}

impl Cochain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on an increasing tuple given as a mask.
    pub fn at(&self, m: Mask) -> SparseVec {
        self.values.get(&m).cloned().unwrap_or_default()
    }

    /// Value on basis arguments in any order (alternating; zero on repeats).
    pub fn value(&self, args: &[usize]) -> SparseVec {
        assert_eq!(args.len(), self.degree);
        match sort_tuple(args) {
            None => SparseVec::new(),
            Some((m, s)) => {
                let v = self.at(m);
                if s < 0 {
                    v.neg()
                } else {
                    v
                }
            }
        }
    }

    /// Multilinear evaluation on arbitrary domain vectors.
    pub fn evaluate(&self, args: &[SparseVec]) -> SparseVec {
        assert_eq!(args.len(), self.degree);
        let mut out = SparseVec::new();
        let mut pick = Vec::with_capacity(self.degree);
        self.evaluate_rec(args, &mut pick, Rational::one(), &mut out);
        out
    }

    fn evaluate_rec(&self, args: &[SparseVec], pick: &mut Vec<usize>, c: Rational, out: &mut SparseVec) {
        if pick.len() == args.len() {
            let v = self.value(pick);
            out.add_assign_scaled(&c, &v);
            return;
        }
        for (i, a) in args[pick.len()].iter() {
            pick.push(i);
            self.evaluate_rec(args, pick, &c * a, out);
            pick.pop();
        }
    }

    pub fn set(&mut self, args: &[usize], v: SparseVec) {
        let (m, s) = sort_tuple(args).expect("distinct arguments");
        let v = if s < 0 { v.neg() } else { v };
        if v.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, v);
        }
    }

    pub fn add_at(&mut self, m: Mask, c: &Rational, v: &SparseVec) {
        let e = self.values.entry(m).or_default();
        e.add_assign_scaled(c, v);
        if e.is_zero() {
            self.values.remove(&m);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Mask, &SparseVec)> {
        self.values.iter().map(|(m, v)| (*m, v))
    }

    pub fn add_scaled(&self, c: &Rational, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, v) in other.entries() {
            out.add_at(m, c, v);
        }
        out
    }

    pub fn scaled(&self, c: &Rational) -> Cochain {
        let mut out = self.clone();
        out.values = BTreeMap::new();
        for (m, v) in self.entries() {
            out.add_at(m, c, v);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn neg(&self) -> Cochain {
        self.scaled(&-Rational::one())
    }
}

#[derive(Clone, Debug)]
pub struct ComplexContext {
    ambient: Arc<LieAlgebra>,
    domain: Vec<SparseVec>,
    module: Vec<SparseVec>,
    domain_frame: Frame,
    module_frame: Frame,
    /// `bracket_rev[c]` = triples `(a, b, λ)`, `a < b`, with λ the `d_c` coefficient of `[d_a, d_b]`.
    bracket_rev: Vec<Vec<(usize, usize, Rational)>>,
    domain_bracket: Vec<SparseVec>,
    /// `action[a][j]` = coordinates of `d_a · v_j`.
    action: Vec<Vec<SparseVec>>,
    weights: Option<Weights>,
}

impl ComplexContext {
    /// Complex of `span(domain)` acting on `span(module)` by the ambient bracket.
    pub fn new(ambient: &Arc<LieAlgebra>, domain: Vec<SparseVec>, module: Vec<SparseVec>) -> Result<ComplexContext> {
        let m = domain.len();
        if m > 64 {
            return Err(Error::Dimension(format!("domain of dimension {m} exceeds 64")));
        }
        let domain_frame = Frame::new(&domain)?;
        let module_frame = Frame::new(&module)?;
        let g = ambient.as_ref();
        let mut domain_bracket = vec![SparseVec::new(); m * m];
        let mut bracket_rev = vec![Vec::new(); m];
        for a in 0..m {
            for b in a + 1..m {
                let v = g.bracket_vec(&domain[a], &domain[b]);
                let c = domain_frame.coords(&v).ok_or_else(|| {
                    Error::NotClosed(format!("domain bracket ({}, {}) leaves the domain", a + 1, b + 1))
                })?;
                for (k, l) in c.iter() {
                    bracket_rev[k].push((a, b, l.clone()));
                }
                domain_bracket[b * m + a] = c.neg();
                domain_bracket[a * m + b] = c;
            }
        }
        let mut action = Vec::with_capacity(m);
        for (a, x) in domain.iter().enumerate() {
            let cols = module
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    module_frame.coords(&g.bracket_vec(x, v)).ok_or_else(|| {
                        Error::NotClosed(format!("domain vector {} moves module vector {} outside", a + 1, j + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            action.push(cols);
        }
        let mut ctx = ComplexContext {
            ambient: ambient.clone(),
            domain,
            module,
            domain_frame,
            module_frame,
            bracket_rev,
            domain_bracket,
            action,
            weights: None,
        };
        let diag: Vec<(Vec<Rational>, Vec<Rational>)> =
            (0..m).filter_map(|a| ctx.domain_acting(a).diagonal()).collect();
        if !diag.is_empty() {
            ctx.weights = Some(Weights::from_diagonal(&diag, m, ctx.module.len()));
        }
        Ok(ctx)
    }

    pub fn from_indices(ambient: &Arc<LieAlgebra>, domain: &[usize], module: &[usize]) -> Result<ComplexContext> {
        let d = domain.iter().map(|&i| SparseVec::unit(i)).collect();
        let v = module.iter().map(|&i| SparseVec::unit(i)).collect();
        ComplexContext::new(ambient, d, v)
    }

    /// Adjoint complex `C(L, L)`.
    pub fn adjoint(alg: &Arc<LieAlgebra>) -> Result<ComplexContext> {
        let all: Vec<usize> = (0..alg.dim()).collect();
        ComplexContext::from_indices(alg, &all, &all)
    }

    pub fn ambient(&self) -> &Arc<LieAlgebra> {
        &self.ambient
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.len()
    }

    pub fn module_dim(&self) -> usize {
        self.module.len()
    }

    pub fn domain_vector(&self, a: usize) -> &SparseVec {
        &self.domain[a]
    }

    pub fn module_vector(&self, j: usize) -> &SparseVec {
        &self.module[j]
    }

    pub fn domain_coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.domain_frame.coords(v)
    }

    pub fn module_coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.module_frame.coords(v)
    }

    /// Module coordinates to ambient coordinates.
    pub fn module_to_ambient(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.add_assign_scaled(c, &self.module[j]);
        }
        out
    }

    pub fn domain_to_ambient(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, c) in v.iter() {
            out.add_assign_scaled(c, &self.domain[a]);
        }
        out
    }

    /// `[d_a, d_b]` in domain coordinates.
    pub fn domain_bracket(&self, a: usize, b: usize) -> &SparseVec {
        &self.domain_bracket[a * self.domain_dim() + b]
    }

    /// `d_a · v` for `v` in module coordinates.
    pub fn act(&self, a: usize, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.add_assign_scaled(c, &self.action[a][j]);
        }
        out
    }

    pub fn has_weights(&self) -> bool {
        self.weights.is_some()
    }

    /// Action of a domain basis element.
    pub fn domain_acting(&self, a: usize) -> Acting {
        let m = self.domain_dim();
        Acting::new(
            (0..m).map(|b| self.domain_bracket(a, b).clone()).collect(),
            self.action[a].clone(),
        )
    }

    /// Action of an ambient element normalizing both domain and module.
    pub fn acting(&self, x: &SparseVec) -> Result<Acting> {
        let g = self.ambient.as_ref();
        let on_domain = self
            .domain
            .iter()
            .map(|d| {
                self.domain_frame
                    .coords(&g.bracket_vec(x, d))
                    .ok_or_else(|| Error::NotClosed("acting element does not preserve the domain".into()))
            })
            .collect::<Result<_>>()?;
        let on_module = self
            .module
            .iter()
            .map(|v| {
                self.module_frame
                    .coords(&g.bracket_vec(x, v))
                    .ok_or_else(|| Error::NotClosed("acting element does not preserve the module".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Acting::new(on_domain, on_module))
    }

    pub fn zero(&self, q: usize) -> Cochain {
        Cochain {
            degree: q,
            domain_dim: self.domain_dim(),
            module_dim: self.module_dim(),
            values: BTreeMap::new(),
        }
    }

    /// Cochain with `f(d_{t_1}, …) = v` on one tuple (module coordinates).
    pub fn basis_cochain(&self, args: &[usize], v: SparseVec) -> Cochain {
        let mut f = self.zero(args.len());
        f.set(args, v);
        f
    }

    pub fn cochain_from<I: IntoIterator<Item = (Vec<usize>, SparseVec)>>(&self, q: usize, entries: I) -> Cochain {
        let mut f = self.zero(q);
        for (t, v) in entries {
            let (m, s) = sort_tuple(&t).expect("distinct arguments");
            f.add_at(m, &int(s as i64), &v);
        }
        f
    }

    fn check(&self, f: &Cochain) -> Result<()> {
        if f.domain_dim != self.domain_dim() || f.module_dim != self.module_dim() {
            return Err(Error::Context(format!(
                "cochain over ({}, {}) used in a complex over ({}, {})",
                f.domain_dim,
                f.module_dim,
                self.domain_dim(),
                self.module_dim()
            )));
        }
        Ok(())
    }

    fn coboundary_term(&self, t: Mask, v: &SparseVec, c: &Rational, out: &mut HashMap<Mask, SparseVec>) {
        let m = self.domain_dim();
        for x in 0..m {
            if t >> x & 1 == 1 {
                continue;
            }
            let w = self.act(x, v);
            if w.is_zero() {
                continue;
            }
            let s = t | 1 << x;
            let sc = sign_of(below(t, x)) * c;
            out.entry(s).or_default().add_assign_scaled(&sc, &w);
        }
        for (p, cix) in tuple_of(t).into_iter().enumerate() {
            let rest = t & !(1u64 << cix);
            for (a, b, l) in &self.bracket_rev[cix] {
                if rest >> a & 1 == 1 || rest >> b & 1 == 1 {
                    continue;
                }
                let s = rest | 1 << a | 1 << b;
                let parity = below(s, *a) + below(s, *b) + p as u32;
                let sc = sign_of(parity) * l * c;
                out.entry(s).or_default().add_assign_scaled(&sc, v);
            }
        }
    }

    /// Chevalley–Eilenberg differential.
    pub fn coboundary(&self, f: &Cochain) -> Result<Cochain> {
        self.check(f)?;
        let mut out: HashMap<Mask, SparseVec> = HashMap::new();
        if f.degree < self.domain_dim() {
            let one = Rational::one();
            for (t, v) in f.entries() {
                self.coboundary_term(t, v, &one, &mut out);
            }
        }
        let mut g = self.zero(f.degree + 1);
        g.values = out.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(g)
    }

    fn lie_term(&self, x: &Acting, t: Mask, v: &SparseVec, c: &Rational, out: &mut HashMap<Mask, SparseVec>) {
        let mut xv = SparseVec::new();
        for (j, a) in v.iter() {
            xv.add_assign_scaled(a, &x.on_module[j]);
        }
        out.entry(t).or_default().add_assign_scaled(c, &xv);
        for (p, cix) in tuple_of(t).into_iter().enumerate() {
            let rest = t & !(1u64 << cix);
            for (a, l) in &x.rev[cix] {
                if rest >> a & 1 == 1 {
                    continue;
                }
                let s = rest | 1 << a;
                let ia = below(s, *a);
                let parity = (ia as i64 - p as i64).unsigned_abs() as u32;
                let sc = -(sign_of(parity) * l * c);
                out.entry(s).or_default().add_assign_scaled(&sc, v);
            }
        }
    }

    /// `(x·f)(x₁..x_q) = x·f(x₁..x_q) − Σᵢ f(x₁,..,[x,xᵢ],..,x_q)`.
    pub fn lie_derivative(&self, x: &Acting, f: &Cochain) -> Result<Cochain> {
        self.check(f)?;
        if x.on_domain.len() != self.domain_dim() || x.on_module.len() != self.module_dim() {
            return Err(Error::Context("acting element built for another complex".into()));
        }
        let mut out = HashMap::new();
        let one = Rational::one();
        for (t, v) in f.entries() {
            self.lie_term(x, t, v, &one, &mut out);
        }
        let mut g = self.zero(f.degree);
        g.values = out.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(g)
    }

    fn key(&self, t: Mask, j: usize) -> usize {
        tuple_rank(t) * self.module_dim() + j
    }

    /// Cochain as a sparse coordinate vector.
    pub fn to_vector(&self, f: &Cochain) -> SparseVec {
        SparseVec::from_pairs(
            f.entries()
                .flat_map(|(t, v)| v.iter().map(move |(j, c)| (self.key(t, j), c.clone())).collect::<Vec<_>>()),
        )
    }

    fn column(&self, out: HashMap<Mask, SparseVec>) -> SparseVec {
        SparseVec::from_pairs(
            out.into_iter()
                .flat_map(|(t, v)| v.iter().map(|(j, c)| (self.key(t, j), c.clone())).collect::<Vec<_>>()),
        )
    }

    fn delta_column(&self, t: Mask, j: usize) -> SparseVec {
        let mut out = HashMap::new();
        if (t.count_ones() as usize) < self.domain_dim() {
            self.coboundary_term(t, &SparseVec::unit(j), &Rational::one(), &mut out);
        }
        self.column(out)
    }

    /// Basis pairs `(tuple, module index)` of `C^q`, optionally of weight zero
    /// under the given diagonal family.
    fn basis(&self, q: usize, weights: Option<&Weights>) -> Vec<(Mask, usize)> {
        let n = self.module_dim();
        let tuples = subsets(self.domain_dim(), q);
        match weights {
            None => tuples.into_iter().flat_map(|t| (0..n).map(move |j| (t, j))).collect(),
            Some(w) => {
                let mut by_weight: HashMap<&Vec<Rational>, Vec<usize>> = HashMap::new();
                for (j, wj) in w.module.iter().enumerate() {
                    by_weight.entry(wj).or_default().push(j);
                }
                let mut out = Vec::new();
                for t in tuples {
                    let wt = w.tuple_weight(t);
                    if let Some(js) = by_weight.get(&wt) {
                        out.extend(js.iter().map(|&j| (t, j)));
                    }
                }
                out
            }
        }
    }

    fn weights_for(&self, reduction: Reduction) -> Option<&Weights> {
        match reduction {
            Reduction::Full => None,
            Reduction::WeightZero => self.weights.as_ref(),
        }
    }

    /// Weight-zero reduction when the domain contains toral elements.
    pub fn default_reduction(&self) -> Reduction {
        if self.weights.is_some() {
            Reduction::WeightZero
        } else {
            Reduction::Full
        }
    }

    /// Number of basis cochains in `C^q` entering the given reduction.
    pub fn cochain_count(&self, q: usize, reduction: Reduction) -> usize {
        match self.weights_for(reduction) {
            None => binomial(self.domain_dim(), q) * self.module_dim(),
            Some(w) => self.basis(q, Some(w)).len(),
        }
    }

    fn delta_rank(&self, basis: &[(Mask, usize)]) -> usize {
        let mut e = Echelon::new();
        for &(t, j) in basis {
            e.insert(&self.delta_column(t, j));
        }
        e.rank()
    }

    pub fn cohomology_dims(&self, q: usize, reduction: Reduction) -> Dims {
        if q > self.domain_dim() {
            return Dims { z: 0, b: 0, h: 0 };
        }
        let w = self.weights_for(reduction);
        let cq = self.basis(q, w);
        let z = cq.len() - self.delta_rank(&cq);
        let b = if q == 0 {
            0
        } else {
            self.delta_rank(&self.basis(q - 1, w))
        };
        Dims { z, b, h: z - b }
    }

    /// Cocycle basis of `C^q`, restricted to weight zero under `reduction`.
    pub fn cocycles(&self, q: usize, reduction: Reduction) -> Vec<Cochain> {
        let basis = self.basis(q, self.weights_for(reduction));
        let mut e = Echelon::tracked();
        for &(t, j) in &basis {
            e.insert(&self.delta_column(t, j));
        }
        e.relations()
            .iter()
            .map(|rel| self.combine(q, &basis, rel))
            .collect()
    }

    fn combine(&self, q: usize, basis: &[(Mask, usize)], coeffs: &SparseVec) -> Cochain {
        let mut f = self.zero(q);
        for (i, c) in coeffs.iter() {
            let (t, j) = basis[i];
            f.add_at(t, c, &SparseVec::unit(j));
        }
        f
    }

    /// Cocycles representing a basis of `H^q` (weight zero under `reduction`).
    pub fn cohomology_representatives(&self, q: usize, reduction: Reduction) -> Vec<Cochain> {
        let mut e = Echelon::new();
        if q > 0 {
            for (t, j) in self.basis(q - 1, self.weights_for(reduction)) {
                e.insert(&self.delta_column(t, j));
            }
        }
        self.cocycles(q, reduction)
            .into_iter()
            .filter(|z| e.insert(&self.to_vector(z)))
            .collect()
    }

    /// Some `g` with `δg = f`, if one exists.
    pub fn primitive(&self, f: &Cochain) -> Result<Option<Cochain>> {
        self.check(f)?;
        if f.degree == 0 {
            return Ok(if f.is_zero() { Some(self.zero(0)) } else { None });
        }
        let basis = self.basis(f.degree - 1, None);
        let mut e = Echelon::tracked();
        for &(t, j) in &basis {
            e.insert(&self.delta_column(t, j));
        }
        Ok(e.solve(&self.to_vector(f)).map(|c| self.combine(f.degree - 1, &basis, &c)))
    }

    pub fn is_coboundary(&self, f: &Cochain) -> Result<bool> {
        Ok(self.primitive(f)?.is_some())
    }

    /// Text rendering such as `f(e4,e5) = e6`.
    pub fn describe(&self, f: &Cochain) -> String {
        let g = self.ambient.as_ref();
        let name = |v: &SparseVec| -> String {
            match v.iter().collect::<Vec<_>>().as_slice() {
                [(i, c)] if c.is_one() => g.label(*i).to_string(),
                _ => format!("[{v}]"),
            }
        };
        let mut s = String::new();
        for (t, v) in f.entries() {
            let args: Vec<String> = tuple_of(t).iter().map(|&a| name(&self.domain[a])).collect();
            let val = self.module_to_ambient(v);
            let mut terms = Vec::new();
            for (k, c) in val.iter() {
                terms.push(if c.is_one() {
                    g.label(k).to_string()
                } else {
                    format!("{c}·{}", g.label(k))
                });
            }
            let _ = writeln!(s, "f({}) = {}", args.join(","), terms.join(" + "));
        }
        s
    }
}

/// Invariance under a subalgebra acting on a complex: diagonal generators are
/// imposed as weight conditions, the others as kernel equations.
#[derive(Clone, Debug)]
pub struct Invariance {
    weights: Option<Weights>,
    others: Vec<Acting>,
}

impl Invariance {
    pub fn trivial() -> Invariance {
        Invariance {
            weights: None,
            others: Vec::new(),
        }
    }

    /// Invariance under the span of `generators` (ambient vectors).
    pub fn new(ctx: &ComplexContext, generators: &[SparseVec]) -> Result<Invariance> {
        let mut diag = Vec::new();
        let mut others = Vec::new();
        for x in generators {
            let a = ctx.acting(x)?;
            match a.diagonal() {
                Some(d) => diag.push(d),
                None => others.push(a),
            }
        }
        let weights = (!diag.is_empty())
            .then(|| Weights::from_diagonal(&diag, ctx.domain_dim(), ctx.module_dim()));
        Ok(Invariance { weights, others })
    }
}

impl ComplexContext {
    /// Basis of the invariant q-cochains.
    pub fn invariant_cochains(&self, q: usize, inv: &Invariance) -> Vec<Cochain> {
        if q > self.domain_dim() {
            return Vec::new();
        }
        let cand = self.basis(q, inv.weights.as_ref());
        if inv.others.is_empty() {
            return cand
                .iter()
                .map(|&(t, j)| {
                    let mut f = self.zero(q);
                    f.add_at(t, &Rational::one(), &SparseVec::unit(j));
                    f
                })
                .collect();
        }
        let stride = binomial(self.domain_dim(), q) * self.module_dim();
        let mut e = Echelon::tracked();
        for &(t, j) in &cand {
            let mut col = Vec::new();
            for (k, x) in inv.others.iter().enumerate() {
                let mut out = HashMap::new();
                self.lie_term(x, t, &SparseVec::unit(j), &Rational::one(), &mut out);
                for (s, v) in out {
                    for (jj, c) in v.iter() {
                        col.push((k * stride + self.key(s, jj), c.clone()));
                    }
                }
            }
            e.insert(&SparseVec::from_pairs(col));
        }
        e.relations()
            .iter()
            .map(|rel| self.combine(q, &cand, rel))
            .collect()
    }

    /// Basis of the invariant q-cocycles.
    pub fn invariant_cocycles(&self, q: usize, inv: &Invariance) -> Vec<Cochain> {
        let iq = self.invariant_cochains(q, inv);
        let mut e = Echelon::tracked();
        for f in &iq {
            e.insert(&self.to_vector(&self.coboundary(f).unwrap()));
        }
        e.relations()
            .iter()
            .map(|rel| {
                let mut f = self.zero(q);
                for (i, c) in rel.iter() {
                    f = f.add_scaled(c, &iq[i]);
                }
                f
            })
            .collect()
    }

    pub fn invariant_cohomology_dims(&self, q: usize, inv: &Invariance) -> InvariantDims {
        let iq = self.invariant_cochains(q, inv);
        let mut e = Echelon::new();
        for f in &iq {
            e.insert(&self.to_vector(&self.coboundary(f).unwrap()));
        }
        let z = iq.len() - e.rank();
        let (b, b_cap) = if q == 0 || q > self.domain_dim() {
            (0, 0)
        } else {
            let prev = self.invariant_cochains(q - 1, inv);
            let mut eb = Echelon::new();
            for f in &prev {
                eb.insert(&self.to_vector(&self.coboundary(f).unwrap()));
            }
            let b = eb.rank();
            // dim(U ∩ W) = dim U + dim W − dim(U + W), U = weight-zero part of B^q.
            let mut eu = Echelon::new();
            for (t, j) in self.basis(q - 1, inv.weights.as_ref()) {
                eu.insert(&self.delta_column(t, j));
            }
            let du = eu.rank();
            let mut sum = eu;
            for f in &iq {
                sum.insert(&self.to_vector(f));
            }
            (b, du + iq.len() - sum.rank())
        };
        InvariantDims { z, b, h: z - b, b_cap }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{construct, fixtures};
    use crate::exactlin::rat;
    use crate::rootsystem::{RootSystem, TypeLabel};
    use crate::seaweed::{build_seaweed, SeaweedSpec};
    use proptest::prelude::*;

    fn g2_fixture_ctx() -> ComplexContext {
        ComplexContext::adjoint(&Arc::new(fixtures::g2_seaweed())).unwrap()
    }

    fn a2_ns() -> (ComplexContext, Invariance) {
        let g = Arc::new(fixtures::a2_table1());
        let spec = SeaweedSpec::new(TypeLabel::A, 2, [], [1, 2]).unwrap();
        let sw = build_seaweed(&g, &spec).unwrap();
        let ctx = ComplexContext::from_indices(&g, &sw.nilradical, &sw.member).unwrap();
        let gens: Vec<SparseVec> = sw.reductive.iter().map(|&i| SparseVec::unit(i)).collect();
        let inv = Invariance::new(&ctx, &gens).unwrap();
        (ctx, inv)
    }

    #[test]
    fn sorting_signs() {
        assert_eq!(sort_tuple(&[2, 0, 1]), Some((0b111, 1)));
        assert_eq!(sort_tuple(&[1, 0]), Some((0b11, -1)));
        assert_eq!(sort_tuple(&[1, 1]), None);
        assert_eq!(subsets(4, 2).len(), 6);
        let ranks: Vec<usize> = subsets(5, 3).into_iter().map(tuple_rank).collect();
        assert_eq!(ranks, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn g2_degree_zero_coboundary() {
        let ctx = g2_fixture_ctx();
        let v = ctx.basis_cochain(&[], SparseVec::unit(0));
        let dv = ctx.coboundary(&v).unwrap();
        assert_eq!(dv.value(&[1]), SparseVec::single(0, int(-6)));
    }

    #[test]
    fn g2_generic_two_cochain_display() {
        // f(e_a, e_b) = Σ_k c^{ab}_k e_k with symbolic coefficients tracked one at a time.
        let ctx = g2_fixture_ctx();
        let mut coeff_13_14 = Vec::new();
        for k in 0..3 {
            let f = ctx.basis_cochain(&[1, 2], SparseVec::unit(k));
            let df = ctx.coboundary(&f).unwrap();
            coeff_13_14.push(df.value(&[0, 1, 2]).get(0));
        }
        assert_eq!(coeff_13_14, vec![int(0), int(6), int(-4)]);
    }

    #[test]
    fn g2_fixture_cohomology() {
        let ctx = g2_fixture_ctx();
        let h: Vec<usize> = (0..=4).map(|q| ctx.cohomology_dims(q, Reduction::Full).h).collect();
        assert_eq!(h, vec![1, 2, 1, 0, 0]);
        let w: Vec<usize> = (0..=3).map(|q| ctx.cohomology_dims(q, Reduction::WeightZero).h).collect();
        assert_eq!(w, vec![1, 2, 1, 0]);
    }

    #[test]
    fn a2_invariant_cochains() {
        let (ctx, inv) = a2_ns();
        let c1 = ctx.invariant_cochains(1, &inv);
        assert_eq!(c1.len(), 3);
        for f in &c1 {
            let (t, v) = f.entries().next().unwrap();
            assert_eq!(f.entries().count(), 1);
            let arg = tuple_of(t)[0];
            assert_eq!(ctx.module_to_ambient(v).iter().next().unwrap().0, ctx.domain_vector(arg).iter().next().unwrap().0);
        }
        let d2 = ctx.invariant_cohomology_dims(2, &inv);
        assert_eq!((d2.z, d2.b, d2.h), (1, 1, 0));
        assert!(d2.coboundaries_agree());
        assert_eq!(ctx.invariant_cohomology_dims(0, &inv).h, 0);
        let gen = ctx.cochain_from(2, [(vec![0, 1], SparseVec::unit(2))]);
        let e7 = ctx.acting(&SparseVec::unit(6)).unwrap();
        assert!(ctx.lie_derivative(&e7, &gen).unwrap().is_zero());
        assert_eq!(ctx.invariant_cochains(2, &Invariance::trivial()).len(), 3 * 5);
    }

    #[test]
    fn a2_seaweed_is_rigid() {
        let g = Arc::new(fixtures::a2_table1());
        let spec = SeaweedSpec::new(TypeLabel::A, 2, [], [1, 2]).unwrap();
        let sw = build_seaweed(&g, &spec).unwrap();
        let ctx = ComplexContext::from_indices(&g, &sw.member, &sw.member).unwrap();
        for q in 0..=6 {
            let d = ctx.cohomology_dims(q, Reduction::Full);
            assert_eq!(d.h, 0, "q = {q}");
            assert_eq!(ctx.cohomology_dims(q, Reduction::WeightZero).h, 0);
        }
    }

    #[test]
    fn lie_derivative_degree_zero_and_center() {
        let ctx = g2_fixture_ctx();
        let v = ctx.basis_cochain(&[], SparseVec::unit(0));
        let x = ctx.domain_acting(1);
        assert_eq!(ctx.lie_derivative(&x, &v).unwrap().at(0), SparseVec::single(0, int(-6)));
        let z = ctx.acting(&SparseVec::from_pairs([(1, int(2)), (2, int(3))])).unwrap();
        for q in 0..=3 {
            for (t, j) in ctx.basis(q, None) {
                let mut f = ctx.zero(q);
                f.add_at(t, &int(1), &SparseVec::unit(j));
                assert!(ctx.lie_derivative(&z, &f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn context_mismatch() {
        let a = g2_fixture_ctx();
        let (b, _) = a2_ns();
        assert!(matches!(a.coboundary(&b.zero(1)), Err(Error::Context(_))));
    }

    #[test]
    fn delta_squared_vanishes_exhaustively() {
        let g = Arc::new(construct(&RootSystem::build(TypeLabel::A, 2).unwrap()).unwrap());
        let spec = SeaweedSpec::new(TypeLabel::A, 2, [1], [2]).unwrap();
        let sw = build_seaweed(&g, &spec).unwrap();
        for ctx in [
            ComplexContext::from_indices(&g, &sw.member, &sw.member).unwrap(),
            ComplexContext::from_indices(&g, &sw.nilradical, &sw.member).unwrap(),
            g2_fixture_ctx(),
        ] {
            for q in 0..=ctx.domain_dim() {
                for (t, j) in ctx.basis(q, None) {
                    let mut f = ctx.zero(q);
                    f.add_at(t, &int(1), &SparseVec::unit(j));
                    let dd = ctx.coboundary(&ctx.coboundary(&f).unwrap()).unwrap();
                    assert!(dd.is_zero());
                }
            }
        }
    }

    #[test]
    fn q_beyond_domain() {
        let ctx = g2_fixture_ctx();
        assert_eq!(ctx.cohomology_dims(4, Reduction::Full), Dims { z: 0, b: 0, h: 0 });
        let top = ctx.basis_cochain(&[0, 1, 2], SparseVec::unit(0));
        assert!(ctx.coboundary(&top).unwrap().is_zero());
    }

    #[test]
    fn primitive_recovers_coboundaries() {
        let ctx = g2_fixture_ctx();
        let g = ctx.cochain_from(1, [(vec![0], SparseVec::unit(1)), (vec![2], SparseVec::single(0, rat(1, 2)))]);
        let dg = ctx.coboundary(&g).unwrap();
        let p = ctx.primitive(&dg).unwrap().unwrap();
        assert_eq!(ctx.coboundary(&p).unwrap(), dg);
        let f = ctx.basis_cochain(&[1, 2], SparseVec::single(1, int(2)).add_scaled(&int(3), &SparseVec::unit(2)));
        assert!(ctx.coboundary(&f).unwrap().is_zero());
        assert!(!ctx.is_coboundary(&f).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn delta_squared_on_random_cochains(
            coeffs in proptest::collection::vec(-3i64..=3, 8 * 28),
            q in 1usize..3,
        ) {
            let g = Arc::new(fixtures::a2_table1());
            let ctx = ComplexContext::adjoint(&g).unwrap();
            let mut f = ctx.zero(q);
            for (k, (t, j)) in ctx.basis(q, None).into_iter().enumerate().take(coeffs.len()) {
                f.add_at(t, &int(coeffs[k]), &SparseVec::unit(j));
            }
            let dd = ctx.coboundary(&ctx.coboundary(&f).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn dims_are_basis_independent(
            scales in proptest::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 8),
            pi1 in 0usize..4, pi2 in 0usize..4,
        ) {
            let g = construct(&RootSystem::build(TypeLabel::A, 2).unwrap()).unwrap();
            let h = Arc::new(g.rescaled(&scales.iter().map(|&s| int(s)).collect::<Vec<_>>()));
            let g = Arc::new(g);
            let set = |m: usize| (0..2).filter(move |i| m >> i & 1 == 1).map(|i| i + 1);
            let spec = SeaweedSpec::new(TypeLabel::A, 2, set(pi1), set(pi2)).unwrap();
            let a = build_seaweed(&g, &spec).unwrap();
            let b = build_seaweed(&h, &spec).unwrap();
            let ca = ComplexContext::from_indices(&g, &a.member, &a.member).unwrap();
            let cb = ComplexContext::from_indices(&h, &b.member, &b.member).unwrap();
            for q in 0..=3 {
                prop_assert_eq!(ca.cohomology_dims(q, Reduction::Full), cb.cohomology_dims(q, Reduction::Full));
            }
        }
    }
}
