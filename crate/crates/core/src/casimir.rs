//! Operators on `C(g, g)` used to certify `H^q(n, s)^r = 0`: extension by zero,
//! restriction to the nilradical, the homotopy `k`, the Casimir operator and
//! its modified form, and the certificate that replays
//! `Z^q(n,s)^r → C^q(g,g) → C^{q−1}(g,g) → C^q(g,g) → B^q(n,s)^r`.
//!
//! `Γ` acts on values only: `(ΓF)(X) = Σⱼ [e^j, [eⱼ, F(X)]]`. With
//! `(kF)(X) = Σⱼ [e^j, F(eⱼ, X)]` this satisfies `Γ = δk + kδ`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::{DualBasis, LieAlgebra};
use crate::cochain::{tuple_of, Cochain, ComplexContext, Invariance, Mask};
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, int, Echelon, Matrix, Rational, SparseVec};
use crate::rootsystem::{Root, RootSystem};
use crate::seaweed::Seaweed;

pub const CASIMIR_READING: &str = "value";

pub struct OperatorContext {
    pub seaweed: Seaweed,
    g: Arc<LieAlgebra>,
    dual: DualBasis,
    adjoint: ComplexContext,
    ns: ComplexContext,
    invariance: Invariance,
    /// Casimir element acting on g, column `l` = `Σⱼ [e^j, [eⱼ, e_l]]`.
    casimir: Vec<SparseVec>,
}

impl OperatorContext {
    pub fn new(seaweed: &Seaweed) -> Result<OperatorContext> {
        let g = seaweed.ambient.clone();
        let dual = g.dual_basis()?;
        let adjoint = ComplexContext::adjoint(&g)?;
        let ns = ComplexContext::from_indices(&g, &seaweed.nilradical, &seaweed.member)?;
        let gens: Vec<SparseVec> = seaweed.reductive.iter().map(|&i| SparseVec::unit(i)).collect();
        let invariance = Invariance::new(&ns, &gens)?;
        let casimir = (0..g.dim())
            .map(|l| {
                let mut acc = SparseVec::new();
                for j in 0..g.dim() {
                    let inner = g.bracket(j, l);
                    if !inner.is_zero() {
                        acc.add_assign_scaled(&Rational::one(), &g.bracket_vec(&dual.vectors[j], inner));
                    }
                }
                acc
            })
            .collect();
        Ok(OperatorContext {
            seaweed: seaweed.clone(),
            g,
            dual,
            adjoint,
            ns,
            invariance,
            casimir,
        })
    }

    pub fn ambient(&self) -> &Arc<LieAlgebra> {
        &self.g
    }

    pub fn dual_basis(&self) -> &DualBasis {
        &self.dual
    }

    /// The complex `C(g, g)`.
    pub fn adjoint(&self) -> &ComplexContext {
        &self.adjoint
    }

    /// The complex `C(n, s)`.
    pub fn ns(&self) -> &ComplexContext {
        &self.ns
    }

    /// r-invariance on `C(n, s)`.
    pub fn invariance(&self) -> &Invariance {
        &self.invariance
    }

    /// `ψ`: extension of an (n, s)-cochain by zero.
    pub fn extend_by_zero(&self, f: &Cochain) -> Cochain {
        let sw = &self.seaweed;
        let mut out = self.adjoint.zero(f.degree());
        for (t, v) in f.entries() {
            let m: Mask = tuple_of(t).iter().fold(0, |m, &a| m | 1 << sw.nilradical[a]);
            let val = v.remap(|j| Some(sw.member[j])).unwrap();
            out.add_at(m, &Rational::one(), &val);
        }
        out
    }

    /// `φ`: restriction to n-tuples, re-expressed in s-coordinates.
    pub fn restrict(&self, f: &Cochain) -> Result<Cochain> {
        let sw = &self.seaweed;
        let npos: HashMap<usize, usize> =
            sw.nilradical.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut out = self.ns.zero(f.degree());
        for (t, v) in f.entries() {
            let args = tuple_of(t);
            let Some(local) = args.iter().map(|a| npos.get(a).copied()).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let val = sw
                .to_local(v)
                .ok_or_else(|| Error::Restriction(args.iter().map(|a| a + 1).collect()))?;
            let m: Mask = local.iter().fold(0, |m, &a| m | 1 << a);
            out.add_at(m, &Rational::one(), &val);
        }
        Ok(out)
    }

    /// `(kF)(X) = Σⱼ [e^j, F(eⱼ, X)]`.
    pub fn homotopy(&self, f: &Cochain) -> Result<Cochain> {
        if f.degree() == 0 {
            return Err(Error::Context("homotopy needs degree at least 1".into()));
        }
        let mut out = self.adjoint.zero(f.degree() - 1);
        for (t, v) in f.entries() {
            for (p, c) in tuple_of(t).into_iter().enumerate() {
                let w = self.g.bracket_vec(&self.dual.vectors[c], v);
                let sign = if p % 2 == 0 { int(1) } else { int(-1) };
                out.add_at(t & !(1u64 << c), &sign, &w);
            }
        }
        Ok(out)
    }

    fn apply_casimir(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (l, c) in v.iter() {
            out.add_assign_scaled(c, &self.casimir[l]);
        }
        out
    }

    /// `Γ` acting on values: `(ΓF)(X) = Σⱼ [e^j, [eⱼ, F(X)]]`.
    pub fn casimir_action(&self, f: &Cochain) -> Cochain {
        let mut out = self.adjoint.zero(f.degree());
        for (t, v) in f.entries() {
            out.add_at(t, &Rational::one(), &self.apply_casimir(v));
        }
        out
    }

    /// `Σⱼ e^j·(eⱼ·F)` with the full cochain action (arguments and values).
    pub fn casimir_full_action(&self, f: &Cochain) -> Result<Cochain> {
        let mut out = self.adjoint.zero(f.degree());
        for j in 0..self.g.dim() {
            let x = self.adjoint.domain_acting(j);
            let y = self.adjoint.acting(&self.dual.vectors[j])?;
            let inner = self.adjoint.lie_derivative(&x, f)?;
            out = out.add_scaled(&Rational::one(), &self.adjoint.lie_derivative(&y, &inner)?);
        }
        Ok(out)
    }

    /// `Γ̄F = (Γ − kδ)F`.
    pub fn modified_casimir(&self, f: &Cochain) -> Result<Cochain> {
        let df = self.adjoint.coboundary(f)?;
        let kdf = self.homotopy(&df)?;
        Ok(self.casimir_action(f).sub(&kdf))
    }

    /// Contributions `Σ_{j ∈ part} [e^j, (δF)(eⱼ, X)]` grouped by the part of
    /// the ambient basis containing `eⱼ`.
    pub fn case_contributions(&self, f: &Cochain, args: &[usize]) -> Result<CaseBreakdown> {
        let df = self.adjoint.coboundary(f)?;
        let sw = &self.seaweed;
        let mut parts = CaseBreakdown::default();
        for j in 0..self.g.dim() {
            let mut full = vec![j];
            full.extend_from_slice(args);
            let v = df.value(&full);
            if v.is_zero() {
                continue;
            }
            let term = self.g.bracket_vec(&self.dual.vectors[j], &v);
            let slot = if sw.nilradical.contains(&j) {
                &mut parts.nilradical
            } else if sw.reductive.contains(&j) {
                &mut parts.reductive
            } else if sw.dual_nilradical.contains(&j) {
                &mut parts.dual_nilradical
            } else {
                &mut parts.remainder
            };
            slot.add_assign_scaled(&Rational::one(), &term);
        }
        Ok(parts)
    }

    /// Pairing on h* induced by the algebra's invariant form.
    pub fn form_pairing(&self, a: &Root, b: &Root) -> Result<Rational> {
        form_pairing(&self.g, a, b)
    }

    /// Scalar by which `Γ̄` acts on a zero-extended cocycle valued in `g_β`:
    /// `(β,β) + Σ_{α: e_α ∉ n} [e_α,[e^α,·]]`-eigenvalues, each read off the
    /// `(−α)`-string through β.
    pub fn positive_coefficient(&self, beta: &Root) -> Result<Rational> {
        let rs = self.g.root_system().ok_or(Error::MissingRoots)?;
        let mut total = self.form_pairing(beta, beta)?;
        for i in 0..self.g.dim() {
            let Some(alpha) = self.g.root_of(i) else { continue };
            if self.seaweed.nilradical.contains(&i) {
                continue;
            }
            let aa = self.form_pairing(alpha, alpha)?;
            if alpha == beta {
                total += aa;
            } else if *alpha != beta.neg() {
                total += aa * string_factor(rs, &alpha.neg(), beta)? / int(2);
            }
        }
        Ok(total)
    }

    /// Replays `δ∘k∘ψ` on a basis of `Z^q(n,s)^r` and checks it lands injectively
    /// in `B^q(n,s)^r`.
    pub fn rigidity_certificate(&self, q: usize) -> RigidityCertificate {
        let ns = &self.ns;
        let inv = &self.invariance;
        let z = ns.invariant_cocycles(q, inv);
        let prev = if q == 0 { Vec::new() } else { ns.invariant_cochains(q - 1, inv) };
        let mut coboundaries = Echelon::new();
        for f in &prev {
            coboundaries.insert(&ns.to_vector(&ns.coboundary(f).unwrap()));
        }
        let mut cert = RigidityCertificate {
            spec: self.seaweed.spec.to_string(),
            degree: q,
            casimir_reading: CASIMIR_READING.to_string(),
            invariant_cocycles: z.len(),
            invariant_coboundaries: coboundaries.rank(),
            image_rank: 0,
            images_in_coboundaries: true,
            closed_on_cocycles: true,
            eigenvalues: Vec::new(),
            characteristic_polynomial: Vec::new(),
            spectrum_positive: true,
            witnesses: Vec::new(),
            counterexample: None,
            success: false,
        };
        if q == 0 {
            cert.counterexample = Some("degree 0 is outside the certificate's range".into());
            return cert;
        }
        let mut zspan = Echelon::tracked();
        for f in &z {
            zspan.insert(&ns.to_vector(f));
        }
        let mut images = Echelon::new();
        let mut columns = Vec::new();
        for f in &z {
            let image = self
                .homotopy(&self.extend_by_zero(f))
                .and_then(|kf| self.adjoint.coboundary(&kf))
                .and_then(|g| self.restrict(&g));
            let image = match image {
                Ok(r) => r,
                Err(e) => {
                    cert.counterexample = Some(format!("{e} for cocycle\n{}", ns.describe(f)));
                    return cert;
                }
            };
            let v = ns.to_vector(&image);
            images.insert(&v);
            if !coboundaries.contains(&v) {
                cert.images_in_coboundaries = false;
            }
            match zspan.solve(&v) {
                Some(c) => columns.push(c),
                None => cert.closed_on_cocycles = false,
            }
            cert.witnesses.push(Witness {
                cocycle: ns.describe(f).trim_end().to_string(),
                image: ns.describe(&image).trim_end().to_string(),
                predicted: self.predicted_for(f).map(|r| format_rational(&r)),
                observed: scalar_ratio(&image, f).map(|r| format_rational(&r)),
            });
        }
        cert.image_rank = images.rank();
        if cert.closed_on_cocycles && !z.is_empty() {
            let m = Matrix::from_sparse_columns(z.len(), &columns);
            let spectrum = Spectrum::of(&m);
            cert.eigenvalues = spectrum.eigenvalues.iter().map(format_rational).collect();
            cert.characteristic_polynomial = spectrum.charpoly.iter().map(format_rational).collect();
            cert.spectrum_positive = spectrum.all_positive;
        }
        cert.success = cert.counterexample.is_none()
            && cert.image_rank == z.len()
            && cert.images_in_coboundaries
            && cert.spectrum_positive;
        cert
    }

    /// Predicted `Γ̄` scalar when every value of `f` lies in a single root space.
    fn predicted_for(&self, f: &Cochain) -> Option<Rational> {
        let mut beta: Option<&Root> = None;
        for (_, v) in f.entries() {
            for (j, _) in v.iter() {
                let r = self.g.root_of(self.seaweed.member[j])?;
                match beta {
                    None => beta = Some(r),
                    Some(b) if b == r => {}
                    Some(_) => return None,
                }
            }
        }
        self.positive_coefficient(beta?).ok()
    }
}

/// λ with `g = λ·f`, if any; `None` for `f = 0`.
pub fn scalar_ratio(g: &Cochain, f: &Cochain) -> Option<Rational> {
    let (m, v) = f.entries().find(|(_, v)| !v.is_zero())?;
    let (i, c) = v.leading()?;
    let lambda = g.at(m).get(i) / c;
    (*g == f.scaled(&lambda)).then_some(lambda)
}

/// `q(r+1)` for the α-string through β.
fn string_factor(rs: &RootSystem, alpha: &Root, beta: &Root) -> Result<Rational> {
    let (r, q) = rs.root_string(alpha, beta)?;
    Ok(int((q * (r + 1)) as i64))
}

/// `(α,α)·q·(r+1)/2` for the α-string `β − rα, …, β + qα`.
pub fn string_eigenvalue(rs: &RootSystem, alpha: &Root, beta: &Root) -> Result<Rational> {
    Ok(rs.pairing(alpha, alpha) * string_factor(rs, alpha, beta)? / int(2))
}

/// Pairing `(λ, μ) = λᵀ M⁻¹ μ` on h*, where `M` is the invariant form on the
/// Cartan basis and λ, μ are read off as eigenvalues on simple root vectors.
pub fn form_pairing(g: &LieAlgebra, a: &Root, b: &Root) -> Result<Rational> {
    let rank = a.rank();
    let cartan = g.cartan_indices();
    let mut values = Vec::with_capacity(rank);
    for i in 0..rank {
        let idx = g.index_of_root(&Root::simple(rank, i)).ok_or(Error::MissingRoots)?;
        values.push(
            cartan
                .iter()
                .map(|&h| g.bracket(h, idx).get(idx))
                .collect::<Vec<_>>(),
        );
    }
    let eval = |r: &Root| -> Vec<Rational> {
        (0..cartan.len())
            .map(|k| (0..rank).map(|i| int(r.0[i]) * &values[i][k]).sum())
            .collect()
    };
    let form = g.invariant_form();
    let m = Matrix::from_fn(cartan.len(), cartan.len(), |i, j| form.get(cartan[i], cartan[j]).clone());
    let inv = m.inverse().ok_or(Error::DegenerateForm)?;
    let (x, y) = (eval(a), eval(b));
    let my = inv.mul_vec(&y);
    Ok(x.iter().zip(&my).map(|(p, q)| p * q).sum())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseBreakdown {
    pub nilradical: SparseVec,
    pub remainder: SparseVec,
    pub dual_nilradical: SparseVec,
    pub reductive: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cocycle: String,
    pub image: String,
    /// Scalar predicted from root strings, when the cocycle has one value root.
    pub predicted: Option<String>,
    /// λ with image = λ·cocycle, when the image is a multiple of the cocycle.
    pub observed: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub spec: String,
    pub degree: usize,
    pub casimir_reading: String,
    pub invariant_cocycles: usize,
    pub invariant_coboundaries: usize,
    /// Rank of `φ∘δ∘k∘ψ` on the invariant cocycles.
    pub image_rank: usize,
    pub images_in_coboundaries: bool,
    /// Whether the images stay inside the span of the invariant cocycles.
    pub closed_on_cocycles: bool,
    /// Exact eigenvalues when the matrix is triangular.
    pub eigenvalues: Vec<String>,
    /// Coefficients, constant term first.
    pub characteristic_polynomial: Vec<String>,
    pub spectrum_positive: bool,
    pub witnesses: Vec<Witness>,
    pub counterexample: Option<String>,
    pub success: bool,
}

/// Characteristic polynomial and a positivity check of the spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub charpoly: Vec<Rational>,
    pub eigenvalues: Vec<Rational>,
    pub all_positive: bool,
}

impl Spectrum {
    pub fn of(m: &Matrix) -> Spectrum {
        let n = m.rows();
        let charpoly = charpoly(m);
        let triangular = (0..n).all(|i| (0..i).all(|j| m.get(i, j).is_zero()))
            || (0..n).all(|i| (i + 1..n).all(|j| m.get(i, j).is_zero()));
        let eigenvalues = if triangular {
            (0..n).map(|i| m.get(i, i).clone()).collect()
        } else {
            Vec::new()
        };
        let all_positive = if triangular {
            eigenvalues.iter().all(Signed::is_positive)
        } else {
            all_roots_positive(&charpoly)
        };
        Spectrum {
            charpoly,
            eigenvalues,
            all_positive,
        }
    }
}

/// `det(tI − M)` by Faddeev–LeVerrier, constant term first.
pub fn charpoly(m: &Matrix) -> Vec<Rational> {
    let n = m.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        c[n - k] = -(m.mul(&mk).trace()) / int(k as i64);
    }
    c
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lead;
        for (i, x) in b.iter().enumerate() {
            r[i + shift] -= &f * x;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    let mut d: Vec<Rational> = p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect();
    if d.is_empty() {
        d.push(Rational::zero());
    }
    d
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !is_zero_poly(&b) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return vec![Rational::zero()];
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &b[db];
        for (i, x) in b.iter().enumerate() {
            r[i + shift] -= &f * x;
        }
        q[shift] = f;
        r.pop();
    }
    q
}

fn sign_changes(values: &[Rational]) -> usize {
    let nz: Vec<&Rational> = values.iter().filter(|v| !v.is_zero()).collect();
    nz.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
}

/// Whether every complex root of `p` is real and strictly positive (Sturm).
pub fn all_roots_positive(p: &[Rational]) -> bool {
    let mut p = p.to_vec();
    trim(&mut p);
    if p.len() == 1 {
        return true;
    }
    if p[0].is_zero() {
        return false;
    }
    let g = poly_gcd(&p, &derivative(&p));
    let sq = poly_div(&p, &g);
    let deg = sq.len() - 1;
    let mut seq = vec![sq.clone(), derivative(&sq)];
    loop {
        let n = seq.len();
        if is_zero_poly(&seq[n - 1]) {
            seq.pop();
            break;
        }
        let r = poly_rem(&seq[n - 2], &seq[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at_zero: Vec<Rational> = seq.iter().map(|s| s[0].clone()).collect();
    let at_inf: Vec<Rational> = seq.iter().map(|s| s.last().unwrap().clone()).collect();
    let positive_roots = sign_changes(&at_zero) - sign_changes(&at_inf);
    positive_roots == deg && deg > 0 || deg == 0
}

/// `(args, value)` pairs of a cochain, args sorted; handy for goldens.
pub fn entry_list(f: &Cochain) -> Vec<(Vec<usize>, SparseVec)> {
    f.entries().map(|(m, v)| (tuple_of(m), v.clone())).collect()
}
