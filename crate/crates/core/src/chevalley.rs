//! Lie algebras as structure-constant tables over ℚ.
//!
//! Two sources: [`construct`] builds a Chevalley basis from a root system,
//! [`load_fixture`] reads a verbatim bracket table. Basis order for
//! constructed algebras is positive roots (lexicographic), then negative roots
//! in the same order, then the simple coroots.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{int, parse_rational, Echelon, Matrix, Rational, SparseVec};
use crate::rootsystem::{Root, RootSystem, TypeLabel};

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    labels: Vec<String>,
    table: Vec<SparseVec>,
    roots: Vec<Option<Root>>,
    cartan: Vec<usize>,
    form_scale: Rational,
    root_system: Option<Arc<RootSystem>>,
    section: Option<Vec<usize>>,
}

/// Coordinates of the dual basis `e^j` in the `e`-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasis {
    pub vectors: Vec<SparseVec>,
}

impl LieAlgebra {
    /// Builds an algebra from a list of brackets `[e_i, e_j]` (0-based), completing
    /// antisymmetrically and checking Jacobi.
    pub fn from_brackets(
        labels: Vec<String>,
        cartan: Vec<usize>,
        brackets: Vec<(usize, usize, SparseVec)>,
    ) -> Result<LieAlgebra> {
        let alg = LieAlgebra::from_brackets_unchecked(labels, cartan, brackets)?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// As [`LieAlgebra::from_brackets`] without the Jacobi check.
    pub fn from_brackets_unchecked(
        labels: Vec<String>,
        cartan: Vec<usize>,
        brackets: Vec<(usize, usize, SparseVec)>,
    ) -> Result<LieAlgebra> {
        let dim = labels.len();
        let mut table = vec![SparseVec::new(); dim * dim];
        let mut given = vec![false; dim * dim];
        for (i, j, v) in brackets {
            if i >= dim || j >= dim || v.max_index().is_some_and(|k| k >= dim) {
                return Err(Error::Dimension(format!(
                    "bracket [{}, {}] refers to an index beyond dim {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Antisymmetry(i + 1, j + 1));
                }
                continue;
            }
            let neg = v.neg();
            if (given[i * dim + j] && table[i * dim + j] != v)
                || (given[j * dim + i] && table[j * dim + i] != neg)
            {
                return Err(Error::Antisymmetry(i + 1, j + 1));
            }
            given[i * dim + j] = true;
            given[j * dim + i] = true;
            table[i * dim + j] = v;
            table[j * dim + i] = neg;
        }
        if let Some(&c) = cartan.iter().find(|&&c| c >= dim) {
            return Err(Error::Dimension(format!("Cartan index {} beyond dim {dim}", c + 1)));
        }
        Ok(LieAlgebra {
            labels,
            table,
            roots: vec![None; dim],
            cartan,
            form_scale: Rational::one(),
            root_system: None,
            section: None,
        })
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> LieAlgebra {
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        LieAlgebra::from_brackets_unchecked(labels, Vec::new(), Vec::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// `[e_i, e_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: HashMap<usize, Rational> = HashMap::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if i == j {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.bracket(i, j).iter() {
                    *acc.entry(k).or_insert_with(Rational::zero) += &ab * c;
                }
            }
        }
        SparseVec::from_pairs(acc)
    }

    /// `[x, e_j]`.
    pub fn bracket_with_basis(&self, x: &SparseVec, j: usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            out.add_assign_scaled(a, self.bracket(i, j));
        }
        out
    }

    pub fn root_of(&self, i: usize) -> Option<&Root> {
        self.roots[i].as_ref()
    }

    pub fn roots(&self) -> &[Option<Root>] {
        &self.roots
    }

    pub fn has_roots(&self) -> bool {
        self.roots
            .iter()
            .enumerate()
            .all(|(i, r)| r.is_some() != self.cartan.contains(&i))
    }

    pub fn index_of_root(&self, r: &Root) -> Option<usize> {
        self.roots.iter().position(|x| x.as_ref() == Some(r))
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan
    }

    pub fn form_scale(&self) -> &Rational {
        &self.form_scale
    }

    pub fn root_system(&self) -> Option<&Arc<RootSystem>> {
        self.root_system.as_ref()
    }

    /// Declared complement to the center (fixtures only).
    pub fn section(&self) -> Option<&[usize]> {
        self.section.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> LieAlgebra {
        assert_eq!(labels.len(), self.dim());
        self.labels = labels;
        self
    }

    pub fn with_form_scale(mut self, scale: Rational) -> LieAlgebra {
        self.form_scale = scale;
        self
    }

    pub fn with_section(mut self, section: Vec<usize>) -> LieAlgebra {
        self.section = Some(section);
        self
    }

    pub fn with_roots(mut self, roots: Vec<Option<Root>>, rs: Option<Arc<RootSystem>>) -> LieAlgebra {
        assert_eq!(roots.len(), self.dim());
        self.roots = roots;
        self.root_system = rs;
        self
    }

    /// Jacobiator of a basis triple.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (m, x) in self.bracket(a, b).iter() {
                out.add_assign_scaled(x, self.bracket(m, c));
            }
        }
        out
    }

    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                if self.bracket(i, j).is_zero() && (0..n).all(|k| self.bracket(j, k).is_zero()) {
                    continue;
                }
                for k in j + 1..n {
                    if !self.jacobi_residual(i, j, k).is_zero() {
                        return Err(Error::Jacobi(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Trace form `Tr(ad x ∘ ad y)` on the basis.
    pub fn killing_matrix(&self) -> Matrix {
        let n = self.dim();
        // rev[k] lists (i, l, c) with c = coefficient of e_l in [e_i, e_k].
        let mut rev: Vec<Vec<(usize, usize, Rational)>> = vec![Vec::new(); n];
        for i in 0..n {
            for k in 0..n {
                for (l, c) in self.bracket(i, k).iter() {
                    rev[k].push((i, l, c.clone()));
                }
            }
        }
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for l in 0..n {
                for (k, c1) in self.bracket(j, l).iter() {
                    for (i, l2, c2) in &rev[k] {
                        if *l2 == l {
                            let v = m.get(*i, j) + c1 * c2;
                            m.set(*i, j, v);
                        }
                    }
                }
            }
        }
        m
    }

    /// The invariant form used for duals: `form_scale · killing_matrix`.
    pub fn invariant_form(&self) -> Matrix {
        self.killing_matrix().scaled(&self.form_scale)
    }

    pub fn dual_basis(&self) -> Result<DualBasis> {
        let form = self.invariant_form();
        let inv = form.inverse().ok_or(Error::DegenerateForm)?;
        let n = self.dim();
        let vectors = (0..n)
            .map(|j| SparseVec::from_pairs((0..n).map(|i| (i, inv.get(i, j).clone()))))
            .collect();
        Ok(DualBasis { vectors })
    }

    /// Basis of the center, each vector scaled to a primitive integer vector
    /// with positive leading coefficient.
    pub fn center(&self) -> Vec<SparseVec> {
        let basis: Vec<SparseVec> = (0..self.dim()).map(SparseVec::unit).collect();
        self.centralizer(&basis, &basis)
    }

    /// Elements of `span(candidates)` commuting with every vector of `targets`,
    /// returned in ambient coordinates.
    pub fn centralizer(&self, candidates: &[SparseVec], targets: &[SparseVec]) -> Vec<SparseVec> {
        let n = self.dim();
        let mut e = Echelon::tracked();
        for x in candidates {
            let mut col = Vec::new();
            for (t, y) in targets.iter().enumerate() {
                for (k, c) in self.bracket_vec(x, y).iter() {
                    col.push((t * n + k, c.clone()));
                }
            }
            e.insert(&SparseVec::from_pairs(col));
        }
        e.relations()
            .iter()
            .map(|rel| {
                let mut v = SparseVec::new();
                for (i, c) in rel.iter() {
                    v.add_assign_scaled(c, &candidates[i]);
                }
                primitive(&v)
            })
            .filter(|v| !v.is_zero())
            .collect()
    }

    /// Restriction to the span of `basis` (which must be bracket-closed), with
    /// structure constants expressed in that basis.
    pub fn subalgebra(&self, basis: &[SparseVec], labels: Vec<String>) -> Result<LieAlgebra> {
        assert_eq!(basis.len(), labels.len());
        let coords = Coordinates::new(basis)?;
        let mut brackets = Vec::new();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let b = self.bracket_vec(&basis[i], &basis[j]);
                let c = coords.coords(&b).ok_or_else(|| {
                    Error::NotClosed(format!("[{}, {}] leaves the span", labels[i], labels[j]))
                })?;
                if !c.is_zero() {
                    brackets.push((i, j, c));
                }
            }
        }
        let mut cartan = Vec::new();
        let mut roots = Vec::new();
        for (p, v) in basis.iter().enumerate() {
            if !v.is_zero() && v.iter().all(|(i, _)| self.cartan.contains(&i)) {
                cartan.push(p);
            }
            let r = match v.iter().collect::<Vec<_>>().as_slice() {
                [(i, _)] => self.roots[*i].clone(),
                _ => None,
            };
            roots.push(r);
        }
        let mut alg = LieAlgebra::from_brackets_unchecked(labels, cartan, brackets)?;
        alg.roots = roots;
        alg.root_system = self.root_system.clone();
        alg.form_scale = self.form_scale.clone();
        Ok(alg)
    }

    pub fn subalgebra_on_indices(&self, indices: &[usize]) -> Result<LieAlgebra> {
        let basis: Vec<SparseVec> = indices.iter().map(|&i| SparseVec::unit(i)).collect();
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        self.subalgebra(&basis, labels)
    }

    /// `self ⊕ other`, basis of `self` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n = self.dim();
        let shift = |v: &SparseVec| v.remap(|k| Some(k + n)).unwrap();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                brackets.push((i, j, self.bracket(i, j).clone()));
            }
        }
        for i in 0..other.dim() {
            for j in i + 1..other.dim() {
                brackets.push((i + n, j + n, shift(other.bracket(i, j))));
            }
        }
        let mut labels: Vec<String> = self.labels.iter().map(|l| format!("{l}'")).collect();
        labels.extend(other.labels.iter().map(|l| format!("{l}''")));
        let mut cartan = self.cartan.clone();
        cartan.extend(other.cartan.iter().map(|c| c + n));
        let mut alg = LieAlgebra::from_brackets_unchecked(labels, cartan, brackets).unwrap();
        if let (Some(a), Some(b)) = (self.section(), other.section()) {
            let mut s = a.to_vec();
            s.extend(b.iter().map(|c| c + n));
            alg.section = Some(s);
        }
        alg
    }

    /// Same algebra in the basis `e_i' = s_i e_i`.
    pub fn rescaled(&self, scales: &[Rational]) -> LieAlgebra {
        let n = self.dim();
        assert_eq!(scales.len(), n);
        assert!(scales.iter().all(|s| !s.is_zero()));
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = self.bracket(i, j);
                let v = SparseVec::from_pairs(
                    b.iter().map(|(k, c)| (k, c * &scales[i] * &scales[j] / &scales[k])),
                );
                brackets.push((i, j, v));
            }
        }
        let mut alg =
            LieAlgebra::from_brackets_unchecked(self.labels.clone(), self.cartan.clone(), brackets)
                .unwrap();
        alg.roots = self.roots.clone();
        alg.root_system = self.root_system.clone();
        alg.form_scale = self.form_scale.clone();
        alg.section = self.section.clone();
        alg
    }
}

impl DualBasis {
    pub fn vector(&self, j: usize) -> &SparseVec {
        &self.vectors[j]
    }
}

/// Scales `v` to a primitive integer vector with positive leading coefficient.
pub fn primitive(v: &SparseVec) -> SparseVec {
    use num_integer::Integer;
    if v.is_zero() {
        return v.clone();
    }
    let mut den = num_bigint::BigInt::one();
    for (_, c) in v.iter() {
        den = den.lcm(c.denom());
    }
    let mut g = num_bigint::BigInt::zero();
    for (_, c) in v.iter() {
        g = g.gcd(&(c.numer() * (&den / c.denom())));
    }
    let mut s = Rational::new(den, g);
    if v.leading().unwrap().1.is_negative() {
        s = -s;
    }
    v.scaled(&s)
}

/// Coordinates relative to an arbitrary linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    echelon: Echelon,
    len: usize,
}

impl Coordinates {
    pub fn new(basis: &[SparseVec]) -> Result<Coordinates> {
        let mut echelon = Echelon::tracked();
        for v in basis {
            if !echelon.insert(v) {
                return Err(Error::Dimension("basis vectors are linearly dependent".into()));
            }
        }
        Ok(Coordinates {
            echelon,
            len: basis.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.echelon.solve(v)
    }
}

struct Constants<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(Root, Root), Rational>,
}

impl<'a> Constants<'a> {
    fn precedes(a: &Root, b: &Root) -> bool {
        (a.height(), a) < (b.height(), b)
    }

    fn len2(&self, a: &Root) -> Rational {
        self.rs.pairing(a, a)
    }

    fn extraspecial(&self, xi: &Root) -> (Root, Root) {
        self.rs
            .positive_roots()
            .iter()
            .filter_map(|a| {
                let b = xi.sub(a);
                (b.is_positive() && self.rs.is_root(&b) && Self::precedes(a, &b)).then(|| (a.clone(), b))
            })
            .min_by(|x, y| (x.0.height(), &x.0).cmp(&(y.0.height(), &y.0)))
            .expect("every non-simple positive root has a special pair")
    }

    /// `N_{a,b}`, zero when `a + b` is not a root.
    fn n(&mut self, a: &Root, b: &Root) -> Rational {
        let c = a.add(b);
        if !self.rs.is_root(&c) {
            return Rational::zero();
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = if a.is_positive() && b.is_positive() {
            if Self::precedes(b, a) {
                -self.n(b, a)
            } else {
                let (p, q) = self.extraspecial(&c);
                if (&p, &q) == (a, b) {
                    let (r, _) = self.rs.root_string(&p, &q).unwrap();
                    int(r as i64 + 1)
                } else {
                    let np = self.n(&p, &q);
                    let mut s = Rational::zero();
                    let t1 = self.n(b, &p.neg()) * self.n(a, &q.neg());
                    if !t1.is_zero() {
                        let d = b.sub(&p);
                        s += t1 / self.len2(&d);
                    }
                    let t2 = self.n(&p.neg(), a) * self.n(b, &q.neg());
                    if !t2.is_zero() {
                        let d = a.sub(&p);
                        s += t2 / self.len2(&d);
                    }
                    self.len2(&c) / np * s
                }
            }
        } else if a.is_negative() && b.is_negative() {
            -self.n(&a.neg(), &b.neg())
        } else if a.is_positive() {
            if c.is_positive() {
                -(self.len2(&c) / self.len2(a)) * self.n(&b.neg(), &c)
            } else {
                self.len2(&c) / self.len2(b) * self.n(&c.neg(), a)
            }
        } else {
            -self.n(b, a)
        };
        self.memo.insert(key, v.clone());
        v
    }
}

/// Chevalley basis of the simple algebra with root system `rs`.
///
/// Structure constants are fixed by `N_{α,β} = r + 1` on extraspecial pairs
/// (ordering positive roots by height, then lexicographically); the invariant
/// form is scaled so that it induces the root-system pairing on `h*`.
pub fn construct(rs: &RootSystem) -> Result<LieAlgebra> {
    let alg = construct_unchecked(rs);
    alg.check_jacobi()?;
    Ok(alg)
}

pub fn construct_unchecked(rs: &RootSystem) -> LieAlgebra {
    let roots = rs.roots();
    let nroots = roots.len();
    let rank = rs.rank();
    let dim = nroots + rank;
    let mut k = Constants {
        rs,
        memo: HashMap::new(),
    };
    let mut brackets = Vec::new();
    for (i, a) in roots.iter().enumerate() {
        for (j, b) in roots.iter().enumerate().skip(i + 1) {
            let s = a.add(b);
            let v = if s.is_zero() {
                let coeffs = rs.coroot_coefficients(a);
                SparseVec::from_pairs(coeffs.into_iter().enumerate().map(|(t, c)| (nroots + t, c)))
            } else if let Some(idx) = rs.index_of(&s) {
                SparseVec::single(idx, k.n(a, b))
            } else {
                continue;
            };
            brackets.push((i, j, v));
        }
        for t in 0..rank {
            let ev = rs.cartan_integer(a, &Root::simple(rank, t));
            if ev != 0 {
                brackets.push((nroots + t, i, SparseVec::single(i, int(ev))));
            }
        }
    }
    let labels = (1..=dim).map(|i| format!("e{i}")).collect();
    let cartan: Vec<usize> = (nroots..dim).collect();
    let mut alg = LieAlgebra::from_brackets_unchecked(labels, cartan, brackets).unwrap();
    let mut annotated: Vec<Option<Root>> = roots.into_iter().map(Some).collect();
    annotated.extend(std::iter::repeat(None).take(rank));
    alg.roots = annotated;
    alg.root_system = Some(Arc::new(rs.clone()));
    // κ(h_1, h_1) should become 4 / (α_1, α_1).
    let h = nroots;
    let mut kappa = Rational::zero();
    for l in 0..dim {
        for (m, c1) in alg.bracket(h, l).iter() {
            kappa += c1 * alg.bracket(h, m).get(l);
        }
    }
    let a1 = Root::simple(rank, 0);
    alg.form_scale = int(4) / rs.pairing(&a1, &a1) / kappa;
    alg
}

/// Parses the structure-constant text format.
///
/// ```text
/// dim 3
/// labels e2 e13 e14
/// cartan_indices 2 3
/// form_scale 1/4        (optional)
/// type A 2              (optional, with root lines)
/// root 1 : 1 0
/// section 1 2           (optional)
/// bracket 1 2 : 1 6, 3 -1/2
/// ```
///
/// Indices are 1-based; `#` starts a comment.
pub fn load_fixture(text: &str) -> Result<LieAlgebra> {
    let mut dim: Option<usize> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut cartan: Vec<usize> = Vec::new();
    let mut form_scale = Rational::one();
    let mut rs: Option<RootSystem> = None;
    let mut roots: Vec<(usize, Root)> = Vec::new();
    let mut section: Option<Vec<usize>> = None;
    let mut brackets: Vec<(usize, usize, SparseVec)> = Vec::new();

    let index = |tok: &str, line: usize| -> Result<usize> {
        let i: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("line {line}: bad index `{tok}`")))?;
        if i == 0 {
            return Err(Error::Parse(format!("line {line}: indices are 1-based")));
        }
        Ok(i - 1)
    };

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "dim" => {
                dim = Some(rest.parse().map_err(|_| Error::Parse(format!("line {ln}: bad dim")))?)
            }
            "labels" => labels = Some(rest.split_whitespace().map(String::from).collect()),
            "cartan_indices" => {
                cartan = rest
                    .split_whitespace()
                    .map(|t| index(t, ln))
                    .collect::<Result<_>>()?
            }
            "form_scale" => form_scale = parse_rational(rest)?,
            "type" => {
                let mut it = rest.split_whitespace();
                let t = TypeLabel::parse(it.next().unwrap_or(""))?;
                let n: usize = it
                    .next()
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {ln}: type needs a rank")))?;
                rs = Some(RootSystem::build(t, n)?);
            }
            "root" => {
                let (i, coeffs) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("line {ln}: expected `root i : c1 c2 ...`")))?;
                let i = index(i.trim(), ln)?;
                let c: Vec<i64> = coeffs
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Parse(format!("line {ln}: bad coefficient `{t}`"))))
                    .collect::<Result<_>>()?;
                roots.push((i, Root(c)));
            }
            "section" => {
                section = Some(
                    rest.split_whitespace()
                        .map(|t| index(t, ln))
                        .collect::<Result<_>>()?,
                )
            }
            "bracket" => {
                let (ij, terms) = rest.split_once(':').unwrap_or((rest, ""));
                let ij: Vec<usize> = ij
                    .split_whitespace()
                    .map(|t| index(t, ln))
                    .collect::<Result<_>>()?;
                if ij.len() != 2 {
                    return Err(Error::Parse(format!("line {ln}: bracket needs two indices")));
                }
                let mut pairs = Vec::new();
                for term in terms.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let mut it = term.split_whitespace();
                    let (Some(k), Some(c), None) = (it.next(), it.next(), it.next()) else {
                        return Err(Error::Parse(format!("line {ln}: expected `k coefficient`, got `{term}`")));
                    };
                    pairs.push((index(k, ln)?, parse_rational(c)?));
                }
                brackets.push((ij[0], ij[1], SparseVec::from_pairs(pairs)));
            }
            other => return Err(Error::Parse(format!("line {ln}: unknown field `{other}`"))),
        }
    }

    let labels = match (dim, labels) {
        (Some(d), Some(l)) if l.len() != d => {
            return Err(Error::Dimension(format!("dim {d} but {} labels", l.len())))
        }
        (_, Some(l)) => l,
        (Some(d), None) => (1..=d).map(|i| format!("e{i}")).collect(),
        (None, None) => return Err(Error::Parse("missing dim".into())),
    };
    let n = labels.len();
    let mut alg = LieAlgebra::from_brackets_unchecked(labels, cartan, brackets)?;
    alg.check_jacobi()?;
    alg.form_scale = form_scale;
    if let Some(s) = &section {
        if let Some(&bad) = s.iter().find(|&&i| i >= n) {
            return Err(Error::Dimension(format!("section index {} beyond dim {n}", bad + 1)));
        }
    }
    alg.section = section;
    if !roots.is_empty() {
        let Some(rs) = rs else {
            return Err(Error::Parse("root annotations need a `type` line".into()));
        };
        let mut annotated = vec![None; n];
        for (i, r) in roots {
            if i >= n {
                return Err(Error::Dimension(format!("root index {} beyond dim {n}", i + 1)));
            }
            if r.rank() != rs.rank() || !rs.is_root(&r) {
                return Err(Error::NotARoot(format!("{r} at index {}", i + 1)));
            }
            annotated[i] = Some(r);
        }
        alg.roots = annotated;
        alg.root_system = Some(Arc::new(rs));
    } else if let Some(rs) = rs {
        alg.root_system = Some(Arc::new(rs));
    }
    Ok(alg)
}

pub mod fixtures {
    use super::{load_fixture, LieAlgebra};

    pub const A2_TABLE1: &str = include_str!("../../../fixtures/a2_table1");
    pub const G2_SEAWEED: &str = include_str!("../../../fixtures/g2_seaweed");

    pub fn a2_table1() -> LieAlgebra {
        load_fixture(A2_TABLE1).expect("shipped fixture parses")
    }

    pub fn g2_seaweed() -> LieAlgebra {
        load_fixture(G2_SEAWEED).expect("shipped fixture parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use crate::rootsystem::valid_types;

    fn canonical(t: TypeLabel, n: usize) -> LieAlgebra {
        construct(&RootSystem::build(t, n).unwrap()).unwrap()
    }

    #[test]
    fn a1_is_sl2() {
        let g = canonical(TypeLabel::A, 1);
        assert_eq!(g.dim(), 3);
        assert_eq!(g.bracket(0, 1), &SparseVec::single(2, int(1)));
        assert_eq!(g.bracket(2, 0), &SparseVec::single(0, int(2)));
        assert_eq!(g.bracket(2, 1), &SparseVec::single(1, int(-2)));
    }

    #[test]
    fn small_types_satisfy_jacobi_and_are_semisimple() {
        for (t, n) in valid_types(4) {
            let rs = RootSystem::build(t, n).unwrap();
            let g = construct(&rs).unwrap();
            assert_eq!(g.dim(), rs.num_roots() + n);
            assert_eq!(g.killing_matrix().rank(), g.dim(), "{t}{n}");
        }
    }

    #[test]
    fn structure_constants_are_string_lengths() {
        for (t, n) in valid_types(4) {
            let rs = RootSystem::build(t, n).unwrap();
            let g = construct(&rs).unwrap();
            let roots = rs.roots();
            for (i, a) in roots.iter().enumerate() {
                for (j, b) in roots.iter().enumerate() {
                    let s = a.add(b);
                    let br = g.bracket(i, j);
                    if s.is_zero() || i == j {
                        continue;
                    }
                    match rs.index_of(&s) {
                        None => assert!(br.is_zero()),
                        Some(k) => {
                            let (r, _) = rs.root_string(a, b).unwrap();
                            let c = br.get(k);
                            assert_eq!(br.nnz(), 1);
                            assert_eq!(c.abs(), int(r as i64 + 1), "{t}{n} {a} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_acts_by_root_values() {
        let rs = RootSystem::build(TypeLabel::G, 2).unwrap();
        let g = construct(&rs).unwrap();
        for (i, r) in rs.roots().iter().enumerate() {
            for (t, &h) in g.cartan_indices().iter().enumerate() {
                let ev = rs.cartan_integer(r, &Root::simple(2, t));
                assert_eq!(g.bracket(h, i), &SparseVec::single(i, int(ev)).scaled(&int(1)));
            }
        }
    }

    #[test]
    fn string_eigenvalue_in_chevalley_basis() {
        for t in [TypeLabel::A, TypeLabel::G] {
            let rs = RootSystem::build(t, 2).unwrap();
            let g = construct(&rs).unwrap();
            let roots = rs.roots();
            for (ia, a) in roots.iter().enumerate() {
                let ina = rs.index_of(&a.neg()).unwrap();
                for (ib, b) in roots.iter().enumerate() {
                    if a == b || *a == b.neg() {
                        continue;
                    }
                    let (r, q) = rs.root_string(a, b).unwrap();
                    let inner = g.bracket_with_basis(&SparseVec::unit(ia), ib);
                    let outer = g.bracket_vec(&SparseVec::unit(ina), &inner);
                    assert_eq!(outer, SparseVec::single(ib, int((q * (r + 1)) as i64)).scaled(&int(1)));
                    // With the normalized dual ê_{-α} = ((α,α)/2) e_{-α}:
                    let hat = rs.pairing(a, a) / int(2);
                    assert_eq!(
                        outer.scaled(&hat),
                        SparseVec::single(ib, rs.pairing(a, a) * int((q * (r + 1)) as i64) / int(2))
                    );
                }
            }
        }
    }

    #[test]
    fn cartan_sum_is_root_length() {
        for (t, n) in valid_types(3) {
            let rs = RootSystem::build(t, n).unwrap();
            let g = construct(&rs).unwrap();
            let dual = g.dual_basis().unwrap();
            for (ib, b) in rs.roots().iter().enumerate() {
                let mut acc = SparseVec::new();
                for &h in g.cartan_indices() {
                    let inner = g.bracket(h, ib).clone();
                    acc.add_assign_scaled(&int(1), &g.bracket_vec(dual.vector(h), &inner));
                }
                assert_eq!(acc, SparseVec::single(ib, rs.pairing(b, b)), "{t}{n} {b}");
            }
        }
    }

    #[test]
    fn dual_basis_pairs_to_identity() {
        let g = canonical(TypeLabel::B, 2);
        let form = g.invariant_form();
        let dual = g.dual_basis().unwrap();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let v: Rational = dual.vector(j).iter().map(|(k, c)| c * form.get(i, k)).sum();
                assert_eq!(v, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn a2_fixture_values() {
        let g = fixtures::a2_table1();
        assert_eq!(g.dim(), 8);
        assert_eq!(g.bracket(0, 1), &SparseVec::single(2, int(-2)));
        assert_eq!(g.bracket(2, 5), &SparseVec::from_pairs([(6, int(2)), (7, int(2))]));
        assert_eq!(g.bracket(5, 7), &SparseVec::single(5, int(2)));
        assert_eq!(g.bracket(6, 0), &SparseVec::single(0, int(4)));
        let k = g.killing_matrix();
        assert!(k.is_symmetric());
        assert_eq!(k.rank(), 8);
        assert_eq!(k.get(0, 3), &int(24));
        assert_eq!(g.invariant_form().get(0, 3), &int(6));
        let dual = g.dual_basis().unwrap();
        assert_eq!(dual.vector(0), &SparseVec::single(3, rat(1, 6)));
        assert_eq!(dual.vector(3), &SparseVec::single(0, rat(1, 6)));
        assert_eq!(dual.vector(6), &SparseVec::from_pairs([(6, rat(1, 9)), (7, rat(1, 18))]));
        assert_eq!(dual.vector(7), &SparseVec::from_pairs([(6, rat(1, 18)), (7, rat(1, 9))]));
        let raw = k.inverse().unwrap();
        assert_eq!(raw.get(3, 0), &rat(1, 24));
    }

    #[test]
    fn g2_fixture_values() {
        let s = fixtures::g2_seaweed();
        assert_eq!(s.labels(), &["e2", "e13", "e14"]);
        assert_eq!(s.bracket(0, 1), &SparseVec::single(0, int(6)));
        assert_eq!(s.bracket(0, 2), &SparseVec::single(0, int(-4)));
        assert!(s.bracket(1, 2).is_zero());
        assert_eq!(s.section(), Some(&[0usize, 1][..]));
        assert_eq!(s.center(), vec![SparseVec::from_pairs([(1, int(2)), (2, int(3))])]);
    }

    #[test]
    fn empty_bracket_list_is_abelian() {
        let a = load_fixture("dim 2\n").unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.killing_matrix().is_zero());
        assert_eq!(a.center().len(), 2);
        assert_eq!(a.dual_basis(), Err(Error::DegenerateForm));
    }

    #[test]
    fn fixture_errors() {
        assert!(matches!(load_fixture("dim 2\nbracket 1 3 : 1 1\n"), Err(Error::Dimension(_))));
        assert!(matches!(load_fixture("dim 2\nbracket 1 2 : 1 1/0\n"), Err(Error::Parse(_))));
        assert!(matches!(load_fixture("dim 2\nlabels a\n"), Err(Error::Dimension(_))));
        assert!(matches!(load_fixture("dim x\n"), Err(Error::Parse(_))));
        let bad = "dim 3\nbracket 1 2 : 2 1\nbracket 1 3 : 3 1\nbracket 2 3 : 1 1\n";
        assert_eq!(load_fixture(bad).unwrap_err(), Error::Jacobi(1, 2, 3));
    }

    #[test]
    fn subalgebra_and_center() {
        let g = canonical(TypeLabel::G, 2);
        let s = g.subalgebra_on_indices(&[1, 12, 13]).unwrap();
        let z = s.center();
        assert_eq!(z, vec![SparseVec::from_pairs([(1, int(1)), (2, int(2))])]);
        assert!(g.subalgebra_on_indices(&[1, 7]).is_err());
    }
}
