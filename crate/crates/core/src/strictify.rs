//! Strictification of coherent actions of finite groups.
//!
//! Isomorphisms are modelled by one abelian coefficient group `A` (either
//! `ℚ*` or `ℤ/m`) on which `G` acts by automorphisms. A coherent action is a
//! normalized 2-cocycle `φ: G × G → A`; a compatible system is a family
//! `F_g[h] ∈ A` (the component `X_{gh} → g·X_h`) satisfying
//!
//! ```text
//! F_{g₁g₀}[h] = φ(g₁, g₀) · g₁·F_{g₀}[h] · F_{g₁}[g₀h],    F_e = id.
//! ```
//!
//! [`strictify`] builds such a family from arbitrary values on the edges of a
//! spanning tree of the Cayley graph.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactint::{Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the multiplication table (identity at 0, inverses,
    /// associativity) and that `generators` generate.
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        if n == 0 {
            return bad("empty table".into());
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table must be square with entries below the order".into());
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return bad("element 0 is not the identity".into());
        }
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => *inv = b,
                None => return bad(format!("element {a} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if generators.is_empty() || generators.iter().any(|&g| g >= n) {
            return bad("generators must be a nonempty set of elements".into());
        }
        let group = Self { table, inverse, generators };
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &t in &group.generators {
                let w = group.mul(v, t);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.contains(&false) {
            return bad("generators do not generate the group".into());
        }
        Ok(group)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(table, vec![1 % n])
    }

    /// `ℤ/2 × ℤ/2`, elements as bit pairs.
    pub fn klein() -> Self {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::new(table, vec![1, 2]).expect("valid table")
    }

    /// Permutations of three points in lexicographic order, generated by the
    /// transposition `(0 1)` and the cycle `(0 1 2)`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("permutation");
        // (a·b)(x) = a(b(x))
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        Self::new(table, vec![index([1, 0, 2]), index([1, 2, 0])]).expect("valid table")
    }

    /// Symmetries of the square: `rᵃsᶠ` at index `a + 4f`, generated by `r`
    /// and `s`.
    pub fn dihedral4() -> Self {
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (a, f, b, g) = (x % 4, x / 4, y % 4, y / 4);
                        let rot = (if f == 0 { a + b } else { a + 4 - b }) % 4;
                        rot + 4 * ((f + g) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::new(table, vec![1, 4]).expect("valid table")
    }

    /// `"Z<n>"`, `"S3"`, `"D4"` or `"Z2xZ2"`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "S3" => Ok(Self::symmetric3()),
            "D4" => Ok(Self::dihedral4()),
            "Z2xZ2" => Ok(Self::klein()),
            _ => match name.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if (1..=64).contains(&n) => Self::cyclic(n),
                _ => Err(Error::InvalidGroup(format!("unknown preset {name:?}"))),
            },
        }
    }

    /// `ℤ/1 … ℤ/12`, `S₃`, `D₄`, `ℤ/2 × ℤ/2`, with their preset names.
    pub fn catalog() -> Vec<(String, Self)> {
        let mut out: Vec<(String, Self)> =
            (1..=12).map(|n| (format!("Z{n}"), Self::cyclic(n).expect("positive order"))).collect();
        out.push(("S3".into(), Self::symmetric3()));
        out.push(("D4".into(), Self::dihedral4()));
        out.push(("Z2xZ2".into(), Self::klein()));
        out
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Homomorphisms into a finite group given by its elements and product,
    /// found by trying every image of the generators.
    pub fn homomorphisms<T: Clone + PartialEq>(&self, target: &[T], identity: &T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
        let k = self.generators.len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            if let Some(h) = self.extend(&choice, target, identity, &mul) {
                out.push(h);
            }
            let mut i = 0;
            while i < k {
                choice[i] += 1;
                if choice[i] < target.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == k {
                return out;
            }
        }
    }

    fn extend<T: Clone + PartialEq>(&self, choice: &[usize], target: &[T], identity: &T, mul: &impl Fn(&T, &T) -> T) -> Option<Vec<T>> {
        let n = self.order();
        let mut image: Vec<Option<T>> = vec![None; n];
        image[0] = Some(identity.clone());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (t, &c) in self.generators.iter().zip(choice) {
                let w = self.mul(v, *t);
                let value = mul(image[v].as_ref()?, &target[c]);
                match &image[w] {
                    Some(existing) if *existing != value => return None,
                    Some(_) => {}
                    None => {
                        image[w] = Some(value);
                        queue.push_back(w);
                    }
                }
            }
        }
        let image: Vec<T> = image.into_iter().collect::<Option<_>>()?;
        let hom = (0..n).all(|a| (0..n).all(|b| image[self.mul(a, b)] == mul(&image[a], &image[b])));
        hom.then_some(image)
    }
}

/// Homomorphisms `G → (ℤ/m)^×` as unit residues, or `G → {±1}` when
/// `modulus` is `None`, encoded as 0 for `+1` and 1 for `−1`. The trivial
/// character comes first.
pub fn unit_characters(group: &FiniteGroup, modulus: Option<u64>) -> Vec<Vec<u64>> {
    match modulus {
        None => {
            let signs = group.homomorphisms(&[1i64, -1], &1, |a, b| a * b);
            signs.into_iter().map(|c| c.into_iter().map(|s| u64::from(s < 0)).collect()).collect()
        }
        Some(m) => {
            let units: Vec<u64> = (1..m).filter(|u| u.gcd(&m) == 1).collect();
            group.homomorphisms(&units, &(1 % m), |a, b| a * b % m)
        }
    }
}

/// Element of a coefficient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    /// Nonzero rational, multiplicative.
    Rational(Rational),
    /// Residue in `[0, m)`, additive.
    Residue(u64),
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(x) => write!(f, "{x}"),
            Coefficient::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// `ℚ*` or `ℤ/m` with a `G`-action by automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientGroup {
    /// `g` acts by `x ↦ x` or `x ↦ x⁻¹`; `inverting[g]` selects the latter.
    Multiplicative { inverting: Vec<bool> },
    /// `g` acts by multiplication with the unit `twist[g]`.
    Additive { modulus: u64, twist: Vec<u64> },
}

impl CoefficientGroup {
    pub fn rationals(order: usize) -> Self {
        Self::Multiplicative { inverting: vec![false; order] }
    }

    /// `ℚ*` twisted through a sign character (as returned by
    /// [`unit_characters`] with no modulus).
    pub fn rationals_twisted(group: &FiniteGroup, sign: &[u64]) -> Result<Self> {
        let inverting = sign.iter().map(|&s| s == 1).collect();
        Self::Multiplicative { inverting }.validated(group)
    }

    pub fn residues(order: usize, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidCoefficients("modulus must be at least 2".into()));
        }
        Ok(Self::Additive { modulus, twist: vec![1; order] })
    }

    pub fn residues_twisted(group: &FiniteGroup, modulus: u64, twist: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidCoefficients("modulus must be at least 2".into()));
        }
        Self::Additive { modulus, twist }.validated(group)
    }

    /// Checks that the action is a homomorphism `G → Aut(A)`.
    pub fn validated(self, group: &FiniteGroup) -> Result<Self> {
        let n = group.order();
        let ok = match &self {
            Self::Multiplicative { inverting } => {
                inverting.len() == n
                    && !inverting[0]
                    && (0..n).all(|a| (0..n).all(|b| inverting[group.mul(a, b)] == (inverting[a] ^ inverting[b])))
            }
            Self::Additive { modulus, twist } => {
                let m = *modulus;
                twist.len() == n
                    && twist.iter().all(|&u| u < m && u.gcd(&m) == 1)
                    && twist[0] == 1
                    && (0..n).all(|a| (0..n).all(|b| twist[group.mul(a, b)] == twist[a] * twist[b] % m))
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidCoefficients("action is not a homomorphism into Aut(A)".into()))
        }
    }

    /// Trivial and one twisted model over `ℚ*` and over `ℤ/7`; a twisted
    /// model is skipped when the group has no nontrivial character of the
    /// required kind.
    pub fn models(group: &FiniteGroup) -> Vec<(String, Self)> {
        let n = group.order();
        let mut out = vec![("Qstar".to_string(), Self::rationals(n))];
        if let Some(sign) = unit_characters(group, None).into_iter().find(|c| c.iter().any(|&s| s == 1)) {
            out.push(("Qstar-twisted".into(), Self::rationals_twisted(group, &sign).expect("character")));
        }
        out.push(("Z7".into(), Self::residues(n, 7).expect("modulus")));
        if let Some(tw) = unit_characters(group, Some(7)).into_iter().find(|c| c.iter().any(|&u| u != 1)) {
            out.push(("Z7-twisted".into(), Self::residues_twisted(group, 7, tw).expect("character")));
        }
        out
    }

    pub fn identity(&self) -> Coefficient {
        match self {
            Self::Multiplicative { .. } => Coefficient::Rational(Rational::one()),
            Self::Additive { .. } => Coefficient::Residue(0),
        }
    }

    pub fn contains(&self, x: &Coefficient) -> bool {
        match (self, x) {
            (Self::Multiplicative { .. }, Coefficient::Rational(r)) => !r.is_zero(),
            (Self::Additive { modulus, .. }, Coefficient::Residue(r)) => r < modulus,
            _ => false,
        }
    }

    fn check(&self, x: &Coefficient) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::InvalidCoefficients(format!("{x} is not an invertible element of the coefficient group")))
        }
    }

    pub fn op(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        match (self, a, b) {
            (Self::Multiplicative { .. }, Coefficient::Rational(x), Coefficient::Rational(y)) => Coefficient::Rational(x * y),
            (Self::Additive { modulus, .. }, Coefficient::Residue(x), Coefficient::Residue(y)) => {
                Coefficient::Residue((x + y) % modulus)
            }
            _ => panic!("coefficient from a different group"),
        }
    }

    pub fn inv(&self, a: &Coefficient) -> Coefficient {
        match (self, a) {
            (Self::Multiplicative { .. }, Coefficient::Rational(x)) => Coefficient::Rational(x.recip()),
            (Self::Additive { modulus, .. }, Coefficient::Residue(x)) => Coefficient::Residue((modulus - x) % modulus),
            _ => panic!("coefficient from a different group"),
        }
    }

    /// `aᵏ` in the group law.
    pub fn pow(&self, a: &Coefficient, k: u64) -> Coefficient {
        (0..k).fold(self.identity(), |acc, _| self.op(&acc, a))
    }

    /// `g·a`.
    pub fn act(&self, g: usize, a: &Coefficient) -> Coefficient {
        match self {
            Self::Multiplicative { inverting } if inverting[g] => self.inv(a),
            Self::Multiplicative { .. } => a.clone(),
            Self::Additive { modulus, twist } => match a {
                Coefficient::Residue(x) => Coefficient::Residue(x * twist[g] % modulus),
                _ => panic!("coefficient from a different group"),
            },
        }
    }

    /// Random element: `±p/q` with `1 ≤ p, q ≤ 9`, or a uniform residue.
    pub fn random(&self, rng: &mut impl Rng) -> Coefficient {
        match self {
            Self::Multiplicative { .. } => {
                let p: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let q: i64 = rng.gen_range(1..=9);
                Coefficient::Rational(Rational::new(BigInt::from(p), BigInt::from(q)))
            }
            Self::Additive { modulus, .. } => Coefficient::Residue(rng.gen_range(0..*modulus)),
        }
    }
}

/// A group, a coefficient group and a validated normalized 2-cocycle
/// `φ(g₁, g₀)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentActionData {
    group: FiniteGroup,
    coeffs: CoefficientGroup,
    phi: Vec<Vec<Coefficient>>,
}

impl CoherentActionData {
    /// Checks `φ(g, e) = φ(e, g) = id` and, for all triples,
    /// `g₃·φ(g₂, g₁) · φ(g₃, g₂g₁) = φ(g₃, g₂) · φ(g₃g₂, g₁)`.
    pub fn new(group: FiniteGroup, coeffs: CoefficientGroup, phi: Vec<Vec<Coefficient>>) -> Result<Self> {
        let n = group.order();
        if phi.len() != n || phi.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("φ must be {n}x{n}")));
        }
        for row in &phi {
            for x in row {
                coeffs.check(x)?;
            }
        }
        let id = coeffs.identity();
        if (0..n).any(|g| phi[g][0] != id || phi[0][g] != id) {
            return Err(Error::InvalidCoefficients("φ is not normalized".into()));
        }
        let data = Self { group, coeffs, phi };
        if let Some((a, b, c)) = data.cocycle_failure() {
            return Err(Error::NotCocycle(a, b, c));
        }
        Ok(data)
    }

    fn cocycle_failure(&self) -> Option<(usize, usize, usize)> {
        let (g, a, phi) = (&self.group, &self.coeffs, &self.phi);
        let n = g.order();
        for g3 in 0..n {
            for g2 in 0..n {
                for g1 in 0..n {
                    let lhs = a.op(&a.act(g3, &phi[g2][g1]), &phi[g3][g.mul(g2, g1)]);
                    let rhs = a.op(&phi[g3][g2], &phi[g.mul(g3, g2)][g1]);
                    if lhs != rhs {
                        return Some((g3, g2, g1));
                    }
                }
            }
        }
        None
    }

    pub fn trivial(group: FiniteGroup, coeffs: CoefficientGroup) -> Self {
        let n = group.order();
        let phi = vec![vec![coeffs.identity(); n]; n];
        Self::new(group, coeffs, phi).expect("trivial cocycle")
    }

    /// `δψ(g, h) = g·ψ(h) · ψ(gh)⁻¹ · ψ(g)`, for `ψ` with `ψ(e) = id`.
    pub fn coboundary(group: FiniteGroup, coeffs: CoefficientGroup, psi: &[Coefficient]) -> Result<Self> {
        let n = group.order();
        if psi.len() != n || psi.first() != Some(&coeffs.identity()) {
            return Err(Error::InvalidCoefficients("ψ must have one value per element and ψ(e) = id".into()));
        }
        let phi = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| {
                        let x = coeffs.op(&coeffs.act(g, &psi[h]), &coeffs.inv(&psi[group.mul(g, h)]));
                        coeffs.op(&x, &psi[g])
                    })
                    .collect()
            })
            .collect();
        Self::new(group, coeffs, phi)
    }

    /// A random coboundary, multiplied when possible by the pull-back of the
    /// carry cocycle of `ℤ/k` along a random character `G → ℤ/k`; the product
    /// is kept only if it validates.
    pub fn random(group: FiniteGroup, coeffs: CoefficientGroup, rng: &mut impl Rng) -> Self {
        let n = group.order();
        let mut psi: Vec<Coefficient> = (0..n).map(|_| coeffs.random(rng)).collect();
        psi[0] = coeffs.identity();
        let base = Self::coboundary(group.clone(), coeffs.clone(), &psi).expect("coboundaries are cocycles");

        let k = rng.gen_range(2..=n.max(2));
        let residues: Vec<usize> = (0..k).collect();
        let chars: Vec<Vec<usize>> = group
            .homomorphisms(&residues, &0, |a, b| (a + b) % k)
            .into_iter()
            .filter(|c| c.iter().any(|&x| x != 0))
            .collect();
        if chars.is_empty() {
            return base;
        }
        let chi = &chars[rng.gen_range(0..chars.len())];
        let x = coeffs.random(rng);
        let phi: Vec<Vec<Coefficient>> = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| {
                        let carry = coeffs.pow(&x, ((chi[g] + chi[h]) / k) as u64);
                        coeffs.op(&base.phi[g][h], &carry)
                    })
                    .collect()
            })
            .collect();
        Self::new(group, coeffs, phi).unwrap_or(base)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn coefficients(&self) -> &CoefficientGroup {
        &self.coeffs
    }

    pub fn phi(&self, g1: usize, g0: usize) -> &Coefficient {
        &self.phi[g1][g0]
    }
}

/// Edge `source → target` labelled by the generator `source·target⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CayleyEdge {
    pub source: usize,
    pub target: usize,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    order: usize,
    edges: Vec<CayleyEdge>,
}

impl CayleyGraph {
    pub fn edges(&self) -> &[CayleyEdge] {
        &self.edges
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Outgoing edges of `v`, in generator order.
    pub fn outgoing(&self, v: usize) -> impl Iterator<Item = &CayleyEdge> {
        self.edges.iter().filter(move |e| e.source == v)
    }
}

pub fn cayley_graph(group: &FiniteGroup) -> CayleyGraph {
    let mut edges = Vec::with_capacity(group.order() * group.generators().len());
    for v in 0..group.order() {
        for &t in group.generators() {
            edges.push(CayleyEdge { source: v, target: group.mul(group.inv(t), v), label: t });
        }
    }
    CayleyGraph { order: group.order(), edges }
}

/// Tree reached from `e` along edge orientation, in breadth-first order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    edges: Vec<CayleyEdge>,
    parent: Vec<Option<CayleyEdge>>,
}

impl SpanningTree {
    /// Tree edges in discovery order.
    pub fn edges(&self) -> &[CayleyEdge] {
        &self.edges
    }

    /// The tree edge ending at `v`, `None` for the root.
    pub fn parent_edge(&self, v: usize) -> Option<CayleyEdge> {
        self.parent[v]
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.parent.get(target).copied().flatten().is_some_and(|e| e.source == source)
    }
}

pub fn spanning_tree(graph: &CayleyGraph) -> SpanningTree {
    let mut parent = vec![None; graph.order()];
    let mut seen = vec![false; graph.order()];
    let mut edges = Vec::new();
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for e in graph.outgoing(v) {
            if !seen[e.target] {
                seen[e.target] = true;
                parent[e.target] = Some(*e);
                edges.push(*e);
                queue.push_back(e.target);
            }
        }
    }
    SpanningTree { edges, parent }
}

/// Values on tree edges, keyed by `(source, target)`. Edges left out carry
/// the identity.
pub type TreeAssignment = BTreeMap<(usize, usize), Coefficient>;

/// Uniformly random values on every tree edge.
pub fn random_assignment(data: &CoherentActionData, rng: &mut impl Rng) -> TreeAssignment {
    let tree = spanning_tree(&cayley_graph(&data.group));
    tree.edges().iter().map(|e| ((e.source, e.target), data.coeffs.random(rng))).collect()
}

/// `F_g[h]` for all `g, h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleSystem {
    f: Vec<Vec<Coefficient>>,
}

impl CompatibleSystem {
    pub fn from_components(f: Vec<Vec<Coefficient>>) -> Self {
        Self { f }
    }

    pub fn get(&self, g: usize, h: usize) -> &Coefficient {
        &self.f[g][h]
    }

    pub fn components(&self) -> &[Vec<Coefficient>] {
        &self.f
    }

    pub fn set(&mut self, g: usize, h: usize, x: Coefficient) {
        self.f[g][h] = x;
    }

    /// System of the object `X·s`: `F̃_g[h] = F_g[h·s⁻¹]`.
    pub fn right_shift(&self, group: &FiniteGroup, s: usize) -> Self {
        let si = group.inv(s);
        let f = self.f.iter().map(|row| (0..row.len()).map(|h| row[group.mul(h, si)].clone()).collect()).collect();
        Self { f }
    }
}

/// Builds the compatible system whose tree edge `p → c` (with `c = t⁻¹p`)
/// carries `F_t[c]` from `assignment`.
///
/// With `P(g) = F_{g⁻¹}[g]`, the compatibility equation forces
/// `P(c) = φ(p⁻¹, t) · p⁻¹·F_t[c] · P(p)` along tree edges,
/// `F_g[e] = (φ(g, g⁻¹) · g·P(g))⁻¹` and
/// `F_g[h] = φ(gh, h⁻¹) · gh·P(h) · F_{gh}[e]`. The result is re-verified on
/// every pair.
pub fn strictify(data: &CoherentActionData, assignment: &TreeAssignment) -> Result<CompatibleSystem> {
    let (g, a) = (&data.group, &data.coeffs);
    let n = g.order();
    let tree = spanning_tree(&cayley_graph(g));
    for (&(s, t), x) in assignment {
        if !tree.contains(s, t) {
            return Err(Error::Precondition(format!("({s}, {t}) is not a spanning tree edge")));
        }
        a.check(x)?;
    }

    let mut p = vec![a.identity(); n];
    for e in tree.edges() {
        let value = assignment.get(&(e.source, e.target)).cloned().unwrap_or_else(|| a.identity());
        let pinv = g.inv(e.source);
        let x = a.op(data.phi(pinv, e.label), &a.act(pinv, &value));
        p[e.target] = a.op(&x, &p[e.source]);
    }
    let f_e: Vec<Coefficient> = (0..n)
        .map(|x| a.inv(&a.op(data.phi(x, g.inv(x)), &a.act(x, &p[x]))))
        .collect();
    let f: Vec<Vec<Coefficient>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|h| {
                    let xh = g.mul(x, h);
                    let y = a.op(data.phi(xh, g.inv(h)), &a.act(xh, &p[h]));
                    a.op(&y, &f_e[xh])
                })
                .collect()
        })
        .collect();
    let system = CompatibleSystem { f };

    if !verify_compatibility(&system, data) {
        return Err(Error::InvalidCoefficients("propagated system is not compatible".into()));
    }
    for e in tree.edges() {
        if let Some(x) = assignment.get(&(e.source, e.target)) {
            if system.get(e.label, e.target) != x {
                return Err(Error::InvalidCoefficients("tree edge value not reproduced".into()));
            }
        }
    }
    Ok(system)
}

/// `F_e = id` and the compatibility equation for every `(g₁, g₀, h)`.
pub fn verify_compatibility(system: &CompatibleSystem, data: &CoherentActionData) -> bool {
    let (g, a) = (&data.group, &data.coeffs);
    let n = g.order();
    if system.f.len() != n || system.f.iter().any(|r| r.len() != n || r.iter().any(|x| !a.contains(x))) {
        return false;
    }
    let id = a.identity();
    if system.f[0].iter().any(|x| *x != id) {
        return false;
    }
    for g1 in 0..n {
        for g0 in 0..n {
            for h in 0..n {
                let lhs = &system.f[g.mul(g1, g0)][h];
                let x = a.op(data.phi(g1, g0), &a.act(g1, &system.f[g0][h]));
                let rhs = a.op(&x, &system.f[g1][g.mul(g0, h)]);
                if *lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// `F^Y_s[e]⁻¹ · s·Φ · F^X_s[e]`.
pub fn transport(
    data: &CoherentActionData,
    s: usize,
    phi: &Coefficient,
    fx: &CompatibleSystem,
    fy: &CompatibleSystem,
) -> Coefficient {
    let a = &data.coeffs;
    a.op(&a.op(&a.inv(fy.get(s, 0)), &a.act(s, phi)), fx.get(s, 0))
}

/// `Φ·s`, a morphism `X·s → Y·s` where objects move by
/// [`CompatibleSystem::right_shift`]. Defined as [`transport`] along `s⁻¹`,
/// which makes `(Φ·s₁)·s₂ = Φ·(s₁s₂)` hold.
pub fn strict_action(
    data: &CoherentActionData,
    s: usize,
    phi: &Coefficient,
    fx: &CompatibleSystem,
    fy: &CompatibleSystem,
) -> Coefficient {
    transport(data, data.group.inv(s), phi, fx, fy)
}

/// Checks `(Φ·s₁)·s₂ = Φ·(s₁s₂)` for all `s₁, s₂`.
pub fn right_action_law_holds(
    data: &CoherentActionData,
    phi: &Coefficient,
    fx: &CompatibleSystem,
    fy: &CompatibleSystem,
) -> bool {
    let g = &data.group;
    (0..g.order()).all(|s1| {
        let (fx1, fy1) = (fx.right_shift(g, s1), fy.right_shift(g, s1));
        let phi1 = strict_action(data, s1, phi, fx, fy);
        (0..g.order()).all(|s2| {
            strict_action(data, s2, &phi1, &fx1, &fy1) == strict_action(data, g.mul(s1, s2), phi, fx, fy)
        })
    })
}

/// `(1/|G|)·Σ_g values(g)`. With `modulus = Some(m)` the entries are read as
/// integers mod `m`, `|G|` is inverted mod `m`, and the result is reduced
/// into `[0, m)`; this requires `gcd(|G|, m) = 1`.
pub fn average(group: &FiniteGroup, values: &[RationalMatrix], modulus: Option<u64>) -> Result<RationalMatrix> {
    let n = group.order();
    if values.len() != n {
        return Err(Error::Dimension(format!("{} values for a group of order {n}", values.len())));
    }
    let (r, c) = (values[0].rows(), values[0].cols());
    if values.iter().any(|v| v.rows() != r || v.cols() != c) {
        return Err(Error::Dimension("values differ in shape".into()));
    }
    let sum = values.iter().skip(1).fold(values[0].clone(), |acc, v| &acc + v);
    match modulus {
        None => Ok(sum.scale(&Rational::new(BigInt::one(), BigInt::from(n)))),
        Some(m) => {
            let m_big = BigInt::from(m);
            let ext = BigInt::from(n as u64).extended_gcd(&m_big);
            if !ext.gcd.is_one() {
                return Err(Error::Precondition(format!("gcd(|G| = {n}, {m}) = {} is not 1", ext.gcd)));
            }
            let inv = ext.x.mod_floor(&m_big);
            let sum = sum.to_integer()?;
            Ok(sum.map(|x| Rational::from_integer((x * &inv).mod_floor(&m_big))))
        }
    }
}

/// `p = 3t² − 2t³`, an idempotent whenever `(t² − t)² = 0`.
pub fn idempotent_fix(t: &RationalMatrix) -> Result<RationalMatrix> {
    if !t.is_square() {
        return Err(Error::Dimension("idempotent_fix needs a square matrix".into()));
    }
    let t2 = t * t;
    let d = &t2 - t;
    if !(&d * &d).is_zero() {
        return Err(Error::Precondition("(t² − t)² ≠ 0".into()));
    }
    let t3 = &t2 * t;
    Ok(&t2.scale(&Rational::from_integer(3.into())) - &t3.scale(&Rational::from_integer(2.into())))
}
