//! Root data for the simple types A–G.
//!
//! Roots are stored as integer coefficient vectors over the simple roots.
//! The invariant form is the Gram matrix of the simple roots in a standard
//! ambient realization, rescaled so that long roots have squared length 2.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{int, rat, Matrix, Rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLabel {
    pub const ALL: [TypeLabel; 7] = [
        TypeLabel::A,
        TypeLabel::B,
        TypeLabel::C,
        TypeLabel::D,
        TypeLabel::E,
        TypeLabel::F,
        TypeLabel::G,
    ];

    pub fn parse(text: &str) -> Result<TypeLabel> {
        match text.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(TypeLabel::A),
            "B" => Ok(TypeLabel::B),
            "C" => Ok(TypeLabel::C),
            "D" => Ok(TypeLabel::D),
            "E" => Ok(TypeLabel::E),
            "F" => Ok(TypeLabel::F),
            "G" => Ok(TypeLabel::G),
            other => Err(Error::InvalidType(format!("unknown type label `{other}`"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            TypeLabel::A => 'A',
            TypeLabel::B => 'B',
            TypeLabel::C => 'C',
            TypeLabel::D => 'D',
            TypeLabel::E => 'E',
            TypeLabel::F => 'F',
            TypeLabel::G => 'G',
        }
    }

    /// Whether `(self, rank)` names a simple type in the usual non-redundant list.
    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            TypeLabel::A => rank >= 1,
            TypeLabel::B => rank >= 2,
            TypeLabel::C => rank >= 3,
            TypeLabel::D => rank >= 4,
            TypeLabel::E => (6..=8).contains(&rank),
            TypeLabel::F => rank == 4,
            TypeLabel::G => rank == 2,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A root (or lattice vector) as integer coefficients over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn zero(rank: usize) -> Root {
        Root(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Root {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c <= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_multiple(&self, k: i64, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    /// Simple roots with nonzero coefficient (0-based).
    pub fn support(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Edge of a Dynkin diagram between simple roots `i < j` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinEdge {
    pub i: usize,
    pub j: usize,
    /// 1, 2 or 3 bonds.
    pub multiplicity: u8,
    /// For multiple bonds, the index of the shorter root (the arrow points to it).
    pub short: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    type_label: TypeLabel,
    rank: usize,
    simple_roots: Vec<Vector>,
    positive_roots: Vec<Root>,
    form: Matrix,
    cartan: Vec<Vec<i64>>,
    index: HashMap<Root, usize>,
}

fn ambient_simple_roots(t: TypeLabel, n: usize) -> Vec<Vector> {
    let basis = |dim: usize, entries: &[(usize, Rational)]| -> Vector {
        let mut v = vec![Rational::zero(); dim];
        for (i, c) in entries {
            v[*i] = c.clone();
        }
        v
    };
    let diff = |dim: usize, i: usize, j: usize| basis(dim, &[(i, int(1)), (j, int(-1))]);
    match t {
        TypeLabel::A => (0..n).map(|i| diff(n + 1, i, i + 1)).collect(),
        TypeLabel::B => {
            let mut v: Vec<Vector> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            v.push(basis(n, &[(n - 1, int(1))]));
            v
        }
        TypeLabel::C => {
            let mut v: Vec<Vector> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            v.push(basis(n, &[(n - 1, int(2))]));
            v
        }
        TypeLabel::D => {
            let mut v: Vec<Vector> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            v.push(basis(n, &[(n - 2, int(1)), (n - 1, int(1))]));
            v
        }
        TypeLabel::E => {
            // Bourbaki realization inside R^8; E6 and E7 use the first n roots.
            let h = rat(1, 2);
            let mut a1 = vec![-h.clone(); 8];
            a1[0] = h.clone();
            a1[7] = h;
            let mut v = vec![a1, basis(8, &[(0, int(1)), (1, int(1))])];
            for k in 0..n - 2 {
                v.push(diff(8, k + 1, k));
            }
            v
        }
        TypeLabel::F => {
            let h = rat(1, 2);
            vec![
                diff(4, 1, 2),
                diff(4, 2, 3),
                basis(4, &[(3, int(1))]),
                vec![h.clone(), -h.clone(), -h.clone(), -h],
            ]
        }
        TypeLabel::G => vec![
            basis(3, &[(0, int(1)), (1, int(-1))]),
            basis(3, &[(0, int(-2)), (1, int(1)), (2, int(1))]),
        ],
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_i64(r: &Rational) -> i64 {
    assert!(r.is_integer(), "expected an integer, found {r}");
    r.to_integer().to_i64().expect("integer out of range")
}

impl RootSystem {
    pub fn build(type_label: TypeLabel, rank: usize) -> Result<RootSystem> {
        if !type_label.is_valid_rank(rank) {
            return Err(Error::InvalidType(format!(
                "{type_label}{rank} is not a simple type (A n>=1, B n>=2, C n>=3, D n>=4, E 6-8, F4, G2)"
            )));
        }
        let simple_roots = ambient_simple_roots(type_label, rank);
        let gram = Matrix::from_fn(rank, rank, |i, j| dot(&simple_roots[i], &simple_roots[j]));
        let longest = (0..rank).map(|i| gram.get(i, i).clone()).max().unwrap();
        let form = gram.scaled(&(int(2) / longest));
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| to_i64(&(int(2) * form.get(i, j) / form.get(j, j))))
                    .collect()
            })
            .collect();

        // Height-by-height closure using string lengths: for β positive and α_i
        // simple, β + α_i is a root exactly when r − ⟨β, α_i∨⟩ > 0, where r is
        // the length of the string below β.
        let mut known: BTreeSet<Root> = (0..rank).map(|i| Root::simple(rank, i)).collect();
        let mut layer: Vec<Root> = known.iter().cloned().collect();
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for beta in &layer {
                for i in 0..rank {
                    let a = Root::simple(rank, i);
                    let p: i64 = (0..rank).map(|j| beta.0[j] * cartan[j][i]).sum();
                    let mut r = 0;
                    while known.contains(&beta.add_multiple(-(r + 1), &a)) {
                        r += 1;
                    }
                    if r - p > 0 {
                        next.insert(beta.add(&a));
                    }
                }
            }
            layer = next.difference(&known).cloned().collect();
            known.extend(layer.iter().cloned());
        }
        let positive_roots: Vec<Root> = known.into_iter().collect();
        let npos = positive_roots.len();
        let mut index = HashMap::new();
        for (k, r) in positive_roots.iter().enumerate() {
            index.insert(r.clone(), k);
            index.insert(r.neg(), npos + k);
        }
        Ok(RootSystem {
            type_label,
            rank,
            simple_roots,
            positive_roots,
            form,
            cartan,
            index,
        })
    }

    pub fn type_label(&self) -> TypeLabel {
        self.type_label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_label, self.rank)
    }

    /// Simple roots in ambient coordinates.
    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple_roots
    }

    /// Positive roots in ascending lexicographic order of coefficient vectors.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// Positive roots followed by their negatives in the same order.
    pub fn roots(&self) -> Vec<Root> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(Root::neg));
        all
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    /// Position of a root in [`RootSystem::roots`].
    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    /// Gram matrix of the simple roots.
    pub fn form(&self) -> &Matrix {
        &self.form
    }

    /// Cartan integers `a[i][j] = 2(αᵢ,αⱼ)/(αⱼ,αⱼ)`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn pairing(&self, a: &Root, b: &Root) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b.0[j] != 0 {
                    s += self.form.get(i, j) * int(a.0[i] * b.0[j]);
                }
            }
        }
        s
    }

    /// `⟨β, α∨⟩ = 2(β,α)/(α,α)`.
    pub fn cartan_integer(&self, beta: &Root, alpha: &Root) -> i64 {
        to_i64(&(int(2) * self.pairing(beta, alpha) / self.pairing(alpha, alpha)))
    }

    /// `(r, q)`: the α-string through β is `β − rα, …, β + qα`.
    pub fn root_string(&self, alpha: &Root, beta: &Root) -> Result<(usize, usize)> {
        for (name, x) in [("alpha", alpha), ("beta", beta)] {
            if !self.is_root(x) {
                return Err(Error::NotARoot(format!("{name} = {x}")));
            }
        }
        if alpha == beta || *alpha == beta.neg() {
            return Err(Error::DegenerateString);
        }
        let mut r = 0usize;
        while self.is_root(&beta.add_multiple(-(r as i64 + 1), alpha)) {
            r += 1;
        }
        let mut q = 0usize;
        while self.is_root(&beta.add_multiple(q as i64 + 1, alpha)) {
            q += 1;
        }
        Ok((r, q))
    }

    /// Reflection of `beta` through `alpha`.
    pub fn reflect(&self, beta: &Root, alpha: &Root) -> Root {
        beta.add_multiple(-self.cartan_integer(beta, alpha), alpha)
    }

    /// Coroot `α∨` expressed over the simple coroots.
    pub fn coroot_coefficients(&self, alpha: &Root) -> Vec<Rational> {
        let aa = self.pairing(alpha, alpha);
        (0..self.rank)
            .map(|i| int(alpha.0[i]) * self.form.get(i, i) / &aa)
            .collect()
    }

    pub fn is_long(&self, alpha: &Root) -> bool {
        self.pairing(alpha, alpha) == int(2)
    }

    pub fn dynkin_edges(&self) -> Vec<DynkinEdge> {
        let mut edges = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let m = self.cartan[i][j] * self.cartan[j][i];
                if m == 0 {
                    continue;
                }
                let short = if m == 1 {
                    None
                } else if self.form.get(i, i) < self.form.get(j, j) {
                    Some(i)
                } else {
                    Some(j)
                };
                edges.push(DynkinEdge {
                    i,
                    j,
                    multiplicity: m as u8,
                    short,
                });
            }
        }
        edges
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots
            .iter()
            .max_by_key(|r| r.height())
            .expect("nonempty root system")
    }

    /// Ambient coordinates of a lattice vector.
    pub fn ambient(&self, r: &Root) -> Vector {
        let dim = self.simple_roots[0].len();
        let mut v = vec![Rational::zero(); dim];
        for (i, c) in r.0.iter().enumerate() {
            if *c != 0 {
                for (k, x) in self.simple_roots[i].iter().enumerate() {
                    v[k] += x * int(*c);
                }
            }
        }
        v
    }
}

/// Closed-form root count `|Δ|`.
pub fn expected_root_count(t: TypeLabel, n: usize) -> usize {
    match t {
        TypeLabel::A => n * (n + 1),
        TypeLabel::B | TypeLabel::C => 2 * n * n,
        TypeLabel::D => 2 * n * (n - 1),
        TypeLabel::E => match n {
            6 => 72,
            7 => 126,
            _ => 240,
        },
        TypeLabel::F => 48,
        TypeLabel::G => 12,
    }
}

/// All valid `(type, rank)` pairs with rank at most `max_rank`.
pub fn valid_types(max_rank: usize) -> Vec<(TypeLabel, usize)> {
    let mut out = Vec::new();
    for t in TypeLabel::ALL {
        for n in 1..=max_rank {
            if t.is_valid_rank(n) {
                out.push((t, n));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent oracle: orbit of the simple roots under simple reflections,
    /// computed in ambient coordinates with the unnormalized dot product.
    fn weyl_orbit(rs: &RootSystem) -> HashSet<Vector> {
        let simple = rs.simple_roots();
        let mut seen: HashSet<Vector> = simple.iter().cloned().collect();
        let mut frontier: Vec<Vector> = simple.to_vec();
        while let Some(v) = frontier.pop() {
            for a in simple {
                let k = int(2) * dot(&v, a) / dot(a, a);
                let w: Vector = v.iter().zip(a).map(|(x, y)| x - &k * y).collect();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        seen
    }

    #[test]
    fn counts_match_closed_form_and_orbit_oracle() {
        for (t, n) in valid_types(8) {
            let rs = RootSystem::build(t, n).unwrap();
            assert_eq!(rs.num_roots(), expected_root_count(t, n), "{t}{n}");
            let generated: HashSet<Vector> = rs.roots().iter().map(|r| rs.ambient(r)).collect();
            assert_eq!(generated, weyl_orbit(&rs), "{t}{n}");
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(RootSystem::build(TypeLabel::A, 1).unwrap().positive_roots().len(), 1);
        assert_eq!(RootSystem::build(TypeLabel::A, 2).unwrap().positive_roots().len(), 3);
        assert_eq!(RootSystem::build(TypeLabel::G, 2).unwrap().positive_roots().len(), 6);
    }

    #[test]
    fn invalid_pairs_rejected() {
        for (t, n) in [
            (TypeLabel::A, 0),
            (TypeLabel::B, 1),
            (TypeLabel::C, 2),
            (TypeLabel::D, 3),
            (TypeLabel::E, 5),
            (TypeLabel::E, 9),
            (TypeLabel::F, 3),
            (TypeLabel::G, 3),
        ] {
            assert!(matches!(RootSystem::build(t, n), Err(Error::InvalidType(_))));
        }
    }

    #[test]
    fn a2_pairing() {
        let rs = RootSystem::build(TypeLabel::A, 2).unwrap();
        let a1 = Root::simple(2, 0);
        let a2 = Root::simple(2, 1);
        assert_eq!(rs.pairing(&a1, &a1), int(2));
        assert_eq!(rs.pairing(&a1, &a2), int(-1));
        assert_eq!(rs.pairing(&Root::zero(2), &a2), int(0));
        assert_eq!(rs.cartan_matrix(), &[vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn a2_strings() {
        let rs = RootSystem::build(TypeLabel::A, 2).unwrap();
        let a1 = Root::simple(2, 0);
        let a2 = Root::simple(2, 1);
        assert_eq!(rs.root_string(&a1, &a2).unwrap(), (0, 1));
        assert_eq!(rs.root_string(&a1, &a1.add(&a2)).unwrap(), (1, 0));
        assert_eq!(rs.root_string(&a1, &a1), Err(Error::DegenerateString));
        assert_eq!(rs.root_string(&a1, &a1.neg()), Err(Error::DegenerateString));
    }

    #[test]
    fn long_roots_have_length_two() {
        for (t, n) in valid_types(8) {
            let rs = RootSystem::build(t, n).unwrap();
            let max = rs.roots().iter().map(|r| rs.pairing(r, r)).max().unwrap();
            assert_eq!(max, int(2), "{t}{n}");
        }
    }

    #[test]
    fn string_cartan_identity_and_unbroken_strings() {
        for (t, n) in valid_types(4) {
            let rs = RootSystem::build(t, n).unwrap();
            let roots = rs.roots();
            for a in &roots {
                assert!(rs.pairing(a, a) > int(0));
                for b in &roots {
                    assert_eq!(rs.pairing(a, b), rs.pairing(b, a));
                    if a == b || *a == b.neg() {
                        continue;
                    }
                    let (r, q) = rs.root_string(a, b).unwrap();
                    assert_eq!(r as i64 - q as i64, rs.cartan_integer(b, a), "{t}{n} {a} {b}");
                    for j in -(r as i64)..=q as i64 {
                        assert!(rs.is_root(&b.add_multiple(j, a)));
                    }
                    assert!(rs.is_root(&rs.reflect(b, a)));
                }
            }
        }
    }

    #[test]
    fn ordering_is_lexicographic() {
        let rs = RootSystem::build(TypeLabel::G, 2).unwrap();
        let pos = rs.positive_roots();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pos[0], Root(vec![0, 1]));
        assert_eq!(pos[1], Root(vec![1, 0]));
        assert!(!rs.is_long(&pos[1]));
    }

    #[test]
    fn dynkin_arrows_point_to_short_roots() {
        let g2 = RootSystem::build(TypeLabel::G, 2).unwrap();
        assert_eq!(
            g2.dynkin_edges(),
            vec![DynkinEdge { i: 0, j: 1, multiplicity: 3, short: Some(0) }]
        );
        let b3 = RootSystem::build(TypeLabel::B, 3).unwrap();
        assert_eq!(b3.dynkin_edges()[1].short, Some(2));
        let c3 = RootSystem::build(TypeLabel::C, 3).unwrap();
        assert_eq!(c3.dynkin_edges()[1].short, Some(1));
        let e6 = RootSystem::build(TypeLabel::E, 6).unwrap();
        let pairs: Vec<(usize, usize)> = e6.dynkin_edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }
}
