//! Seaweed subalgebras `p(π₁ | π₂)` of a simple algebra with a root-annotated basis.
//!
//! Orientation: the seaweed contains the Cartan, the positive root vectors
//! supported on π₁ and the negative root vectors supported on π₂. For A2 with
//! `(∅, Π)` this is the Cartan plus the three negative root vectors.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chevalley::{Coordinates, LieAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseVec};
use crate::rootsystem::{Root, RootSystem, TypeLabel};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeaweedSpec {
    pub type_label: TypeLabel,
    pub rank: usize,
    /// 1-based simple-root indices.
    pub pi1: BTreeSet<usize>,
    pub pi2: BTreeSet<usize>,
}

impl SeaweedSpec {
    pub fn new<I: IntoIterator<Item = usize>, J: IntoIterator<Item = usize>>(
        type_label: TypeLabel,
        rank: usize,
        pi1: I,
        pi2: J,
    ) -> Result<SeaweedSpec> {
        if !type_label.is_valid_rank(rank) {
            return Err(Error::InvalidType(format!("{type_label}{rank}")));
        }
        let pi1: BTreeSet<usize> = pi1.into_iter().collect();
        let pi2: BTreeSet<usize> = pi2.into_iter().collect();
        if let Some(bad) = pi1.iter().chain(&pi2).find(|&&i| i == 0 || i > rank) {
            return Err(Error::Dimension(format!(
                "simple-root index {bad} outside 1..={rank}"
            )));
        }
        Ok(SeaweedSpec {
            type_label,
            rank,
            pi1,
            pi2,
        })
    }

    /// Parses a comma-separated 1-based index list such as `"1,3"` or `""`.
    pub fn parse_set(text: &str) -> Result<BTreeSet<usize>> {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad simple-root index `{t}`")))
            })
            .collect()
    }

    pub fn parse(type_label: &str, rank: usize, pi1: &str, pi2: &str) -> Result<SeaweedSpec> {
        SeaweedSpec::new(
            TypeLabel::parse(type_label)?,
            rank,
            SeaweedSpec::parse_set(pi1)?,
            SeaweedSpec::parse_set(pi2)?,
        )
    }

    pub fn union(&self) -> BTreeSet<usize> {
        self.pi1.union(&self.pi2).copied().collect()
    }

    /// All `4^rank` specs of a type, ordered by the bit patterns of (π₁, π₂).
    pub fn all(type_label: TypeLabel, rank: usize) -> Vec<SeaweedSpec> {
        let subsets = |mask: usize| (0..rank).filter(move |i| mask >> i & 1 == 1).map(|i| i + 1);
        let mut out = Vec::new();
        for a in 0..1usize << rank {
            for b in 0..1usize << rank {
                out.push(SeaweedSpec::new(type_label, rank, subsets(a), subsets(b)).unwrap());
            }
        }
        out
    }
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl fmt::Display for SeaweedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} {} | {}",
            self.type_label,
            self.rank,
            fmt_set(&self.pi1),
            fmt_set(&self.pi2)
        )
    }
}

pub fn is_indecomposable(spec: &SeaweedSpec) -> bool {
    spec.union().len() == spec.rank
}

#[derive(Clone, Debug)]
pub struct Seaweed {
    pub spec: SeaweedSpec,
    pub ambient: Arc<LieAlgebra>,
    /// Ambient basis indices of s, ascending.
    pub member: Vec<usize>,
    pub reductive: Vec<usize>,
    pub nilradical: Vec<usize>,
    pub dual_nilradical: Vec<usize>,
    pub remainder: Vec<usize>,
}

fn in_seaweed(spec: &SeaweedSpec, r: &Root) -> bool {
    let supp = r.support();
    if r.is_positive() {
        supp.iter().all(|i| spec.pi1.contains(&(i + 1)))
    } else {
        supp.iter().all(|i| spec.pi2.contains(&(i + 1)))
    }
}

pub fn build_seaweed(g: &Arc<LieAlgebra>, spec: &SeaweedSpec) -> Result<Seaweed> {
    if !g.has_roots() {
        return Err(Error::MissingRoots);
    }
    if let Some(rs) = g.root_system() {
        if rs.type_label() != spec.type_label || rs.rank() != spec.rank {
            return Err(Error::Context(format!(
                "algebra has type {} but spec asks for {}{}",
                rs.name(),
                spec.type_label,
                spec.rank
            )));
        }
    }
    let n = g.dim();
    let mut member = Vec::new();
    let mut reductive = Vec::new();
    let mut nilradical = Vec::new();
    for i in 0..n {
        match g.root_of(i) {
            None => {
                member.push(i);
                reductive.push(i);
            }
            Some(r) if in_seaweed(spec, r) => {
                member.push(i);
                if in_seaweed(spec, &r.neg()) {
                    reductive.push(i);
                } else {
                    nilradical.push(i);
                }
            }
            Some(_) => {}
        }
    }
    let mut dual_nilradical: Vec<usize> = nilradical
        .iter()
        .map(|&i| {
            g.index_of_root(&g.root_of(i).unwrap().neg())
                .ok_or(Error::MissingRoots)
        })
        .collect::<Result<_>>()?;
    dual_nilradical.sort_unstable();
    let remainder = (0..n)
        .filter(|i| !member.contains(i) && !dual_nilradical.contains(i))
        .collect();
    let sw = Seaweed {
        spec: spec.clone(),
        ambient: g.clone(),
        member,
        reductive,
        nilradical,
        dual_nilradical,
        remainder,
    };
    sw.check()?;
    Ok(sw)
}

impl Seaweed {
    /// Bracket closure of s and the ideal property of n.
    fn check(&self) -> Result<()> {
        let g = &self.ambient;
        let inside = |v: &SparseVec, set: &[usize]| v.iter().all(|(k, _)| set.contains(&k));
        for &i in &self.member {
            for &j in &self.member {
                let b = g.bracket(i, j);
                if !inside(b, &self.member) {
                    return Err(Error::NotClosed(format!("[{}, {}] leaves s", g.label(i), g.label(j))));
                }
                if self.nilradical.contains(&j) && !inside(b, &self.nilradical) {
                    return Err(Error::NotClosed(format!("[{}, {}] leaves n", g.label(i), g.label(j))));
                }
            }
        }
        debug_assert!(self.dual_nilradical.iter().all(|i| !self.member.contains(i)));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.member.len()
    }

    pub fn root_system(&self) -> Option<&Arc<RootSystem>> {
        self.ambient.root_system()
    }

    /// Position of an ambient index inside `member`.
    pub fn local(&self, ambient_index: usize) -> Option<usize> {
        self.member.binary_search(&ambient_index).ok()
    }

    /// s as a standalone algebra in the basis `member`.
    pub fn algebra(&self) -> LieAlgebra {
        self.ambient
            .subalgebra_on_indices(&self.member)
            .expect("seaweed is bracket-closed")
    }

    pub fn to_ambient(&self, v: &SparseVec) -> SparseVec {
        v.remap(|k| Some(self.member[k])).unwrap()
    }

    pub fn to_local(&self, v: &SparseVec) -> Option<SparseVec> {
        v.remap(|k| self.local(k))
    }

    /// Center of s in ambient coordinates; every vector lies in the Cartan span.
    pub fn center(&self) -> Vec<SparseVec> {
        let basis: Vec<SparseVec> = self.member.iter().map(|&i| SparseVec::unit(i)).collect();
        let z = self.ambient.centralizer(&basis, &basis);
        for v in &z {
            assert!(
                v.iter().all(|(k, _)| self.ambient.cartan_indices().contains(&k)),
                "center vector {v} leaves the Cartan subalgebra"
            );
        }
        z
    }

    /// Central splitting with the requested section, in the local basis of s.
    pub fn split_over_center(&self, section: &Section) -> Result<CenterSplit> {
        let local = self.algebra();
        match section {
            Section::KillingOrthogonal => {
                let z = self.center();
                let form = self.ambient.invariant_form();
                let cartan: Vec<usize> = self.ambient.cartan_indices().to_vec();
                // h' = {h ∈ h : B(h, z) = 0 for all central z}
                let mut e = Echelon::tracked();
                for &h in &cartan {
                    let col = SparseVec::from_pairs(z.iter().enumerate().map(|(t, zv)| {
                        let v = zv.iter().map(|(k, c)| c * form.get(h, k)).sum();
                        (t, v)
                    }));
                    e.insert(&col);
                }
                let mut complement: Vec<SparseVec> = e
                    .relations()
                    .iter()
                    .map(|rel| rel.remap(|t| Some(cartan[t])).unwrap())
                    .collect();
                complement.extend(
                    self.member
                        .iter()
                        .filter(|&&i| self.ambient.root_of(i).is_some())
                        .map(|&i| SparseVec::unit(i)),
                );
                let complement: Vec<SparseVec> = complement
                    .iter()
                    .map(|v| self.to_local(v).expect("complement lies in s"))
                    .collect();
                split_over_center(&local, &complement)
            }
            Section::Named(ix) => {
                let complement: Vec<SparseVec> = ix
                    .iter()
                    .map(|&i| {
                        self.local(i)
                            .map(SparseVec::unit)
                            .ok_or_else(|| Error::Section(format!("{} is not in s", self.ambient.label(i))))
                    })
                    .collect::<Result<_>>()?;
                split_over_center(&local, &complement)
            }
            Section::Vectors(vs) => split_over_center(&local, vs),
        }
    }
}

/// Choice of complement to the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    /// Killing-orthogonal complement of the center inside the Cartan, plus all root vectors.
    KillingOrthogonal,
    /// Basis indices (ambient for seaweeds, local for standalone algebras).
    Named(Vec<usize>),
    /// Explicit vectors in the local basis.
    Vectors(Vec<SparseVec>),
}

#[derive(Clone, Debug)]
pub struct CenterSplit {
    /// Center of s, local coordinates.
    pub center_basis: Vec<SparseVec>,
    pub complement_basis: Vec<SparseVec>,
    /// s′ with its induced structure constants, isomorphic to Q = s / Z(s).
    pub quotient: LieAlgebra,
}

/// Splits `s = Z(s) ⊕ s′` for a given complement `s′`.
pub fn split_over_center(s: &LieAlgebra, complement: &[SparseVec]) -> Result<CenterSplit> {
    let center = s.center();
    if center.len() + complement.len() != s.dim() {
        return Err(Error::Section(format!(
            "dim Z = {}, dim complement = {}, dim s = {}",
            center.len(),
            complement.len(),
            s.dim()
        )));
    }
    let mut all = center.clone();
    all.extend(complement.iter().cloned());
    Coordinates::new(&all).map_err(|_| Error::Section("complement meets the center".into()))?;
    let coords = Coordinates::new(complement)?;
    for i in 0..s.dim() {
        for j in i + 1..s.dim() {
            if coords.coords(s.bracket(i, j)).is_none() {
                return Err(Error::Section(format!(
                    "[{}, {}] is not in the complement",
                    s.label(i),
                    s.label(j)
                )));
            }
        }
    }
    let mut h_count = 0;
    let labels = complement
        .iter()
        .map(|v| match v.iter().collect::<Vec<_>>().as_slice() {
            [(k, c)] if c.is_integer() && **c == num_traits::One::one() => s.label(*k).to_string(),
            _ => {
                h_count += 1;
                format!("h'{h_count}")
            }
        })
        .collect();
    let quotient = s.subalgebra(complement, labels)?;
    Ok(CenterSplit {
        center_basis: center,
        complement_basis: complement.to_vec(),
        quotient,
    })
}

/// Splitting of a standalone algebra using its declared section, or the
/// whole algebra when the center is trivial.
pub fn split_standalone(s: &LieAlgebra) -> Result<CenterSplit> {
    if let Some(sec) = s.section() {
        let complement: Vec<SparseVec> = sec.iter().map(|&i| SparseVec::unit(i)).collect();
        return split_over_center(s, &complement);
    }
    if s.center().is_empty() {
        let complement: Vec<SparseVec> = (0..s.dim()).map(SparseVec::unit).collect();
        return split_over_center(s, &complement);
    }
    Err(Error::Section(
        "algebra has a center but declares no section".into(),
    ))
}

/// A connected piece of the Dynkin diagram on π₁ ∪ π₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientComponent {
    pub spec: SeaweedSpec,
    /// Ambient simple-root index (1-based) for each node of the standard labeling.
    pub nodes: Vec<usize>,
}

pub fn quotient_components(spec: &SeaweedSpec) -> Vec<SeaweedSpec> {
    quotient_components_with_nodes(spec)
        .into_iter()
        .map(|c| c.spec)
        .collect()
}

pub fn quotient_components_with_nodes(spec: &SeaweedSpec) -> Vec<QuotientComponent> {
    let rs = RootSystem::build(spec.type_label, spec.rank).expect("spec has a valid type");
    let a = rs.cartan_matrix();
    let keep: Vec<usize> = spec.union().into_iter().map(|i| i - 1).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &keep {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            for &w in &keep {
                if a[v][w] != 0 && seen.insert(w) {
                    comp.push(w);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let (t, nodes) = classify(a, &comp);
        let map = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
            nodes
                .iter()
                .enumerate()
                .filter(|(_, &amb)| set.contains(&(amb + 1)))
                .map(|(i, _)| i + 1)
                .collect()
        };
        out.push(QuotientComponent {
            spec: SeaweedSpec {
                type_label: t,
                rank: nodes.len(),
                pi1: map(&spec.pi1),
                pi2: map(&spec.pi2),
            },
            nodes: nodes.iter().map(|x| x + 1).collect(),
        });
    }
    out
}

/// Type of a connected sub-diagram and the lexicographically first
/// isomorphism from the standard labeling onto it.
fn classify(a: &[Vec<i64>], comp: &[usize]) -> (TypeLabel, Vec<usize>) {
    let k = comp.len();
    for t in TypeLabel::ALL {
        if !t.is_valid_rank(k) {
            continue;
        }
        let std = RootSystem::build(t, k).unwrap();
        let sa = std.cartan_matrix();
        let mut map = Vec::with_capacity(k);
        if search(sa, a, comp, &mut map) {
            return (t, map);
        }
    }
    unreachable!("connected sub-diagram of a finite type is of finite type")
}

fn search(sa: &[Vec<i64>], a: &[Vec<i64>], comp: &[usize], map: &mut Vec<usize>) -> bool {
    let i = map.len();
    if i == comp.len() {
        return true;
    }
    for &c in comp {
        if map.contains(&c) {
            continue;
        }
        if (0..i).all(|j| sa[i][j] == a[c][map[j]] && sa[j][i] == a[map[j]][c]) {
            map.push(c);
            if search(sa, a, comp, map) {
                return true;
            }
            map.pop();
        }
    }
    false
}

/// Two copies of the Dynkin diagram; a node is `●` when its simple root lies
/// in the row's set and `○` otherwise. Branch nodes of D and E hang below the
/// main chain.
pub fn render_split_dynkin(spec: &SeaweedSpec) -> String {
    let rs = RootSystem::build(spec.type_label, spec.rank).expect("spec has a valid type");
    let n = spec.rank;
    // Main chain and an optional branch node hanging under a chain node.
    let (chain, branch): (Vec<usize>, Option<(usize, usize)>) = match spec.type_label {
        TypeLabel::D if n >= 4 => ((0..n - 1).collect(), Some((n - 1, n - 3))),
        TypeLabel::E => {
            let mut c = vec![0];
            c.extend(2..n);
            (c, Some((1, 2)))
        }
        _ => ((0..n).collect(), None),
    };
    let edges = rs.dynkin_edges();
    let edge = |x: usize, y: usize| -> String {
        let e = edges
            .iter()
            .find(|e| (e.i, e.j) == (x.min(y), x.max(y)))
            .expect("consecutive chain nodes are joined");
        let arrow = match e.short {
            Some(s) if s == y => ">",
            Some(_) => "<",
            None => "",
        };
        match e.multiplicity {
            1 => "───".to_string(),
            2 => format!("═{arrow}═"),
            _ => format!("≡{arrow}≡"),
        }
    };
    let block = |prefix: &str, glyph: &dyn Fn(usize) -> String, bonds: bool| -> String {
        let mut line = String::from(prefix);
        for (p, &v) in chain.iter().enumerate() {
            if p > 0 {
                if bonds {
                    line.push_str(&edge(chain[p - 1], v));
                } else {
                    line.push_str(&" ".repeat(4 - glyph(chain[p - 1]).chars().count()));
                }
            }
            line.push_str(&glyph(v));
        }
        let mut out = line.trim_end().to_string();
        if let Some((b, at)) = branch {
            let col = prefix.chars().count() + 4 * chain.iter().position(|&v| v == at).unwrap();
            out.push('\n');
            out.push_str(&" ".repeat(col));
            out.push('│');
            out.push('\n');
            out.push_str(&" ".repeat(col));
            out.push_str(glyph(b).trim_end());
        }
        out
    };
    let node = |set: &BTreeSet<usize>| {
        let set = set.clone();
        move |v: usize| if set.contains(&(v + 1)) { "●".to_string() } else { "○".to_string() }
    };
    let label = |v: usize| (v + 1).to_string();
    [
        block("pi1  ", &node(&spec.pi1), true),
        block("pi2  ", &node(&spec.pi2), true),
        block("     ", &label, false),
    ]
    .join("\n")
}

/// Component summary like `["A2", "A1"]`.
pub fn component_names(spec: &SeaweedSpec) -> Vec<String> {
    quotient_components(spec)
        .iter()
        .map(|c| format!("{}{}", c.type_label, c.rank))
        .collect()
}
