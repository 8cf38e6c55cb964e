//! Root systems of types `B_n`, `C_n`, `G2`, `F4`: roots with long/short
//! classification, the weight `λ(r)` (1 on short roots, `p` on long
//! roots), the duality bijection `r ↦ r̄` onto the dual type, Weyl groups
//! with reduced words, and inversion sets `Φ_w`.
//!
//! Roots are integer vectors in standard Euclidean coordinates (Bourbaki
//! conventions; `F4` coordinates are doubled so the half-sum roots stay
//! integral). The fixed total order on positive roots is by height, then
//! lexicographic on coordinates; it is the order used everywhere else for
//! unipotent parametrizations.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SystemType {
    B(usize),
    C(usize),
    G2,
    F4,
}

impl SystemType {
    pub fn parse(s: &str) -> Result<SystemType> {
        let t = s.to_ascii_uppercase();
        match t.as_str() {
            "G2" => Ok(SystemType::G2),
            "F4" => Ok(SystemType::F4),
            _ => {
                let (head, tail) = t.split_at(1);
                let n: usize = tail
                    .parse()
                    .map_err(|_| Error::UnsupportedType(s.into()))?;
                match (head, n) {
                    ("B", n) if n >= 2 => Ok(SystemType::B(n)),
                    ("C", n) if n >= 2 => Ok(SystemType::C(n)),
                    _ => Err(Error::UnsupportedType(s.into())),
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            SystemType::B(n) | SystemType::C(n) => *n,
            SystemType::G2 => 2,
            SystemType::F4 => 4,
        }
    }

    /// The characteristic attached to the type by the isogeny combinatorics.
    pub fn char_p(&self) -> u64 {
        match self {
            SystemType::G2 => 3,
            _ => 2,
        }
    }

    pub fn dual(&self) -> SystemType {
        match self {
            SystemType::B(n) => SystemType::C(*n),
            SystemType::C(n) => SystemType::B(*n),
            SystemType::G2 => SystemType::G2,
            SystemType::F4 => SystemType::F4,
        }
    }

    /// Whether the dual root system is isomorphic to this one.
    pub fn is_self_dual(&self) -> bool {
        matches!(
            self,
            SystemType::B(2) | SystemType::C(2) | SystemType::G2 | SystemType::F4
        )
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemType::B(n) => write!(f, "B{n}"),
            SystemType::C(n) => write!(f, "C{n}"),
            SystemType::G2 => write!(f, "G2"),
            SystemType::F4 => write!(f, "F4"),
        }
    }
}

#[derive(Debug)]
pub struct RootSystem {
    stype: SystemType,
    rank: usize,
    /// Euclidean coordinates; indices `0..num_positive` are the positive
    /// roots in the fixed order, index `i + num_positive` is `-roots[i]`.
    roots: Vec<Vec<i64>>,
    num_positive: usize,
    /// Root index of each simple root, in the defining order.
    simple: Vec<usize>,
    /// Expansion of each root in the simple basis.
    simple_coords: Vec<Vec<i64>>,
    /// Expansion of each coroot in the simple-coroot basis.
    coroot_coords: Vec<Vec<i64>>,
    long: Vec<bool>,
    height: Vec<i64>,
    /// `pairing[r][j] = ⟨r, α_j∨⟩ = 2(r, α_j)/(α_j, α_j)`.
    pairing: Vec<Vec<i64>>,
    /// `reflection[j][r]` = index of `s_j(r)`.
    reflection: Vec<Vec<usize>>,
    index_of: HashMap<Vec<i64>, usize>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn simple_root_vectors(stype: SystemType) -> Vec<Vec<i64>> {
    match stype {
        SystemType::B(n) => {
            let mut out = Vec::new();
            for i in 0..n - 1 {
                let mut v = vec![0i64; n];
                v[i] = 1;
                v[i + 1] = -1;
                out.push(v);
            }
            let mut v = vec![0i64; n];
            v[n - 1] = 1;
            out.push(v);
            out
        }
        SystemType::C(n) => {
            let mut out = Vec::new();
            for i in 0..n - 1 {
                let mut v = vec![0i64; n];
                v[i] = 1;
                v[i + 1] = -1;
                out.push(v);
            }
            let mut v = vec![0i64; n];
            v[n - 1] = 2;
            out.push(v);
            out
        }
        SystemType::G2 => vec![vec![1, -1, 0], vec![-2, 1, 1]],
        // Doubled Bourbaki coordinates.
        SystemType::F4 => vec![
            vec![0, 2, -2, 0],
            vec![0, 0, 2, -2],
            vec![0, 0, 0, 2],
            vec![1, -1, -1, -1],
        ],
    }
}

impl RootSystem {
    pub fn new(stype: SystemType) -> Result<Arc<RootSystem>> {
        let simples = simple_root_vectors(stype);
        let rank = simples.len();

        // Generate all roots with their simple-basis coordinates by closing
        // the simple roots under simple reflections.
        let mut coords: Vec<(Vec<i64>, Vec<i64>)> = Vec::new(); // (euclid, simple basis)
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue: Vec<usize> = Vec::new();
        for (j, v) in simples.iter().enumerate() {
            let mut sc = vec![0i64; rank];
            sc[j] = 1;
            seen.insert(v.clone(), coords.len());
            coords.push((v.clone(), sc));
            queue.push(j);
        }
        let pair = |r: &[i64], alpha: &[i64]| -> i64 {
            let num = 2 * dot(r, alpha);
            let den = dot(alpha, alpha);
            debug_assert_eq!(num % den, 0, "Cartan pairing must be integral");
            num / den
        };
        while let Some(i) = queue.pop() {
            let (ev, sv) = coords[i].clone();
            for (j, alpha) in simples.iter().enumerate() {
                let c = pair(&ev, alpha);
                let new_ev: Vec<i64> = ev
                    .iter()
                    .zip(alpha)
                    .map(|(x, a)| x - c * a)
                    .collect();
                if !seen.contains_key(&new_ev) {
                    let mut new_sv = sv.clone();
                    new_sv[j] -= c;
                    seen.insert(new_ev.clone(), coords.len());
                    coords.push((new_ev, new_sv));
                    queue.push(coords.len() - 1);
                }
            }
        }

        // Fixed order: positive roots by height then lex on Euclidean
        // coordinates; negatives mirror the positive order.
        let mut positives: Vec<(Vec<i64>, Vec<i64>)> = coords
            .iter()
            .filter(|(_, sc)| sc.iter().sum::<i64>() > 0)
            .cloned()
            .collect();
        positives.sort_by_key(|(ev, sc)| (sc.iter().sum::<i64>(), ev.clone()));
        let num_positive = positives.len();
        debug_assert_eq!(coords.len(), 2 * num_positive);

        let mut roots = Vec::with_capacity(2 * num_positive);
        let mut simple_coords = Vec::with_capacity(2 * num_positive);
        for (ev, sc) in &positives {
            roots.push(ev.clone());
            simple_coords.push(sc.clone());
        }
        for (ev, sc) in &positives {
            roots.push(ev.iter().map(|x| -x).collect());
            simple_coords.push(sc.iter().map(|x| -x).collect());
        }

        let index_of: HashMap<Vec<i64>, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let simple: Vec<usize> = simples.iter().map(|v| index_of[v]).collect();

        let norms: Vec<i64> = roots.iter().map(|r| dot(r, r)).collect();
        let max_norm = *norms.iter().max().unwrap();
        let min_norm = *norms.iter().min().unwrap();
        if max_norm == min_norm {
            return Err(Error::UnsupportedType(format!(
                "{stype} has a single root length"
            )));
        }
        let long: Vec<bool> = norms.iter().map(|&n| n == max_norm).collect();

        let height: Vec<i64> = simple_coords.iter().map(|sc| sc.iter().sum()).collect();

        let pairing: Vec<Vec<i64>> = roots
            .iter()
            .map(|r| simples.iter().map(|a| pair(r, a)).collect())
            .collect();

        let reflection: Vec<Vec<usize>> = (0..rank)
            .map(|j| {
                (0..roots.len())
                    .map(|r| {
                        let c = pairing[r][j];
                        let image: Vec<i64> = roots[r]
                            .iter()
                            .zip(&simples[j])
                            .map(|(x, a)| x - c * a)
                            .collect();
                        index_of[&image]
                    })
                    .collect()
            })
            .collect();

        // Coroot coordinates: for r = Σ c_j α_j, the coroot is
        // r∨ = Σ c_j (α_j, α_j)/(r, r) · α_j∨, and the coefficients are
        // integers.
        let mut coroot_coords = Vec::with_capacity(roots.len());
        for (i, sc) in simple_coords.iter().enumerate() {
            let rr = norms[i];
            let mut cc = Vec::with_capacity(rank);
            for (j, &c) in sc.iter().enumerate() {
                let num = c * dot(&simples[j], &simples[j]);
                debug_assert_eq!(num % rr, 0, "coroot coefficients must be integral");
                cc.push(num / rr);
            }
            coroot_coords.push(cc);
        }

        Ok(Arc::new(RootSystem {
            stype,
            rank,
            roots,
            num_positive,
            simple,
            simple_coords,
            coroot_coords,
            long,
            height,
            pairing,
            reflection,
            index_of,
        }))
    }

    pub fn stype(&self) -> SystemType {
        self.stype
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn char_p(&self) -> u64 {
        self.stype.char_p()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn simple_coords(&self, i: usize) -> &[i64] {
        &self.simple_coords[i]
    }

    pub fn coroot_coords(&self, i: usize) -> &[i64] {
        &self.coroot_coords[i]
    }

    /// Indices of the simple roots, in the defining order.
    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive
    }

    pub fn is_long(&self, i: usize) -> bool {
        self.long[i]
    }

    pub fn neg(&self, i: usize) -> usize {
        if i < self.num_positive {
            i + self.num_positive
        } else {
            i - self.num_positive
        }
    }

    pub fn height(&self, i: usize) -> i64 {
        self.height[i]
    }

    /// `λ(r)`: 1 on short roots, `p` on long roots.
    pub fn lambda(&self, i: usize) -> u64 {
        if self.long[i] {
            self.char_p()
        } else {
            1
        }
    }

    /// `⟨r, α_j∨⟩ = 2(r, α_j)/(α_j, α_j)`.
    pub fn pairing(&self, r: usize, j: usize) -> i64 {
        self.pairing[r][j]
    }

    /// `2(r, a)/(r, r)` for arbitrary roots; the exponent of the torus
    /// character `χ_h` of `h_r(t)` on the root line `a`.
    pub fn cartan_pairing(&self, a: usize, r: usize) -> i64 {
        let num = 2 * dot(&self.roots[a], &self.roots[r]);
        let den = dot(&self.roots[r], &self.roots[r]);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    pub fn reflect(&self, j: usize, r: usize) -> usize {
        self.reflection[j][r]
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.index_of.get(coords).copied()
    }

    /// Index of `r + s` when that is a root.
    pub fn add_roots(&self, r: usize, s: usize) -> Option<usize> {
        let sum: Vec<i64> = self.roots[r]
            .iter()
            .zip(&self.roots[s])
            .map(|(a, b)| a + b)
            .collect();
        self.index_of(&sum)
    }

    /// The largest `q ≥ 0` with `s − q·r` a root.
    pub fn string_down(&self, r: usize, s: usize) -> u32 {
        let mut q = 0;
        let mut cur: Vec<i64> = self.roots[s].clone();
        loop {
            let next: Vec<i64> = cur.iter().zip(&self.roots[r]).map(|(a, b)| a - b).collect();
            if self.index_of(&next).is_some() {
                q += 1;
                cur = next;
            } else {
                return q;
            }
        }
    }

    pub fn identity_weyl(&self) -> WeylElement {
        WeylElement {
            word: Vec::new(),
            perm: (0..self.num_roots()).collect(),
        }
    }

    pub fn simple_reflection(&self, j: usize) -> WeylElement {
        WeylElement {
            word: vec![j],
            perm: self.reflection[j].clone(),
        }
    }

    /// The full Weyl group with reduced words, enumerated breadth-first
    /// (so word length equals Coxeter length), in a deterministic order.
    pub fn weyl_group(&self) -> Vec<WeylElement> {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut out = vec![self.identity_weyl()];
        seen.insert(out[0].perm.clone(), 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &wi in &frontier {
                let w = out[wi].clone();
                for j in 0..self.rank {
                    let mut word = w.word.clone();
                    word.push(j);
                    // w' = w ∘ s_j: apply s_j first.
                    let perm: Vec<usize> =
                        (0..self.num_roots()).map(|r| w.perm[self.reflection[j][r]]).collect();
                    if !seen.contains_key(&perm) {
                        seen.insert(perm.clone(), out.len());
                        next.push(out.len());
                        out.push(WeylElement { word, perm });
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// The inversion set `Φ_w = { r ∈ Φ⁺ | w(r) ∉ Φ⁺ }`, in the fixed
    /// positive-root order.
    pub fn phi_w(&self, w: &WeylElement) -> Vec<usize> {
        (0..self.num_positive)
            .filter(|&r| !self.is_positive(w.apply(r)))
            .collect()
    }

    /// For every long root, the coefficients of the short simple roots in
    /// its simple-basis expansion are divisible by `p`.
    pub fn long_root_divisibility(&self) -> bool {
        let p = self.char_p() as i64;
        (0..self.num_roots()).all(|r| {
            if !self.long[r] {
                return true;
            }
            self.simple_coords[r]
                .iter()
                .enumerate()
                .all(|(j, &c)| self.long[self.simple[j]] || c % p == 0)
        })
    }

    /// The duality bijection onto the dual root system: `r` is sent to the
    /// root of the dual system proportional to the coroot `2r/(r,r)` under
    /// the standard identification matching simple roots by index (`B_n ↔
    /// C_n`) or by the diagram symmetry (self-dual types). Long and short
    /// roots are exchanged and `λ(r)·λ(r̄) = p`.
    pub fn duality(self: &Arc<Self>) -> Result<Duality> {
        let target = RootSystem::new(self.stype.dual())?;
        let assignment = match self.stype {
            SystemType::B(_) | SystemType::C(_) => (0..self.rank).collect::<Vec<_>>(),
            SystemType::G2 => vec![1, 0],
            SystemType::F4 => vec![3, 2, 1, 0],
        };
        Duality::build(self.clone(), target, assignment)
    }

    /// The diagram-symmetry permutation of Φ for the self-dual types with
    /// `p` matching the type; this is the root map of the special isogeny
    /// α_π, with the same system as source and target.
    pub fn self_duality(self: &Arc<Self>) -> Result<Duality> {
        let assignment = match self.stype {
            SystemType::B(2) | SystemType::C(2) | SystemType::G2 => vec![1, 0],
            SystemType::F4 => vec![3, 2, 1, 0],
            _ => {
                return Err(Error::UnsupportedType(format!(
                    "{} is not self-dual",
                    self.stype
                )))
            }
        };
        Duality::build(self.clone(), self.clone(), assignment)
    }

    pub fn describe(&self) -> RootSystemDescription {
        RootSystemDescription {
            system: self.stype.to_string(),
            rank: self.rank,
            p: self.char_p(),
            num_roots: self.num_roots(),
            num_positive: self.num_positive,
            roots: (0..self.num_roots())
                .map(|i| RootDescription {
                    coords: self.roots[i].clone(),
                    simple_coords: self.simple_coords[i].clone(),
                    long: self.long[i],
                    height: self.height[i],
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Reduced word in simple reflections (BFS enumeration order makes it
    /// reduced by construction).
    pub word: Vec<usize>,
    /// Permutation of root indices.
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn apply(&self, root: usize) -> usize {
        self.perm[root]
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// A duality bijection `Φ → Φ̄` mapping long roots to short roots, with
/// the simple-root assignment it was built from.
#[derive(Clone, Debug)]
pub struct Duality {
    pub source: Arc<RootSystem>,
    pub target: Arc<RootSystem>,
    assignment: Vec<usize>,
    root_map: Vec<usize>,
}

impl Duality {
    fn build(
        source: Arc<RootSystem>,
        target: Arc<RootSystem>,
        assignment: Vec<usize>,
    ) -> Result<Duality> {
        let mut root_map = Vec::with_capacity(source.num_roots());
        for r in 0..source.num_roots() {
            let cc = source.coroot_coords(r);
            let mut image = vec![0i64; target.rank()];
            for (j, &d) in cc.iter().enumerate() {
                let tj = assignment[j];
                let alpha = target.simple_coords(target.simple_roots()[tj]);
                for (k, &a) in alpha.iter().enumerate() {
                    image[k] += d * a;
                }
            }
            // Convert simple coordinates to Euclidean coordinates of the
            // target before lookup.
            let dim = target.root(0).len();
            let mut euclid = vec![0i64; dim];
            for (j, &c) in image.iter().enumerate() {
                let sv = target.root(target.simple_roots()[j]);
                for (k, &x) in sv.iter().enumerate() {
                    euclid[k] += c * x;
                }
            }
            let idx = target.index_of(&euclid).ok_or_else(|| {
                Error::UnsupportedType(format!(
                    "duality image of root {r} is not a root of {}",
                    target.stype()
                ))
            })?;
            root_map.push(idx);
        }
        let d = Duality {
            source,
            target,
            assignment,
            root_map,
        };
        d.verify()?;
        Ok(d)
    }

    fn verify(&self) -> Result<()> {
        let n = self.source.num_roots();
        let mut seen = vec![false; n];
        for r in 0..n {
            let img = self.root_map[r];
            if seen[img] {
                return Err(Error::UnsupportedType("duality is not injective".into()));
            }
            seen[img] = true;
            if self.source.is_long(r) == self.target.is_long(img) {
                return Err(Error::UnsupportedType(
                    "duality must exchange long and short roots".into(),
                ));
            }
            if self.source.is_positive(r) != self.target.is_positive(img) {
                return Err(Error::UnsupportedType(
                    "duality must preserve positivity".into(),
                ));
            }
            let p = self.source.char_p();
            if self.source.lambda(r) * self.target.lambda(img) != p {
                return Err(Error::UnsupportedType(
                    "λ(r)·λ(r̄) must equal p".into(),
                ));
            }
        }
        // Equivariance generator by generator: s̄_{assign(j)}(r̄) = (s_j r)‾.
        for j in 0..self.source.rank() {
            let tj = self.assignment[j];
            for r in 0..n {
                let lhs = self.target.reflect(tj, self.root_map[r]);
                let rhs = self.root_map[self.source.reflect(j, r)];
                if lhs != rhs {
                    return Err(Error::UnsupportedType(
                        "duality is not Weyl-equivariant".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn map_root(&self, r: usize) -> usize {
        self.root_map[r]
    }

    pub fn map_simple_index(&self, j: usize) -> usize {
        self.assignment[j]
    }

    /// The image of a Weyl element under the induced isomorphism `W ≅ W̄`
    /// (`s_{α_j} ↦ s_{ᾱ_{assign(j)}}`); word length is preserved.
    pub fn map_weyl(&self, w: &WeylElement) -> WeylElement {
        let mut out = self.target.identity_weyl();
        for &j in &w.word {
            let tj = self.assignment[j];
            // out ∘ s_tj, keeping the word in the same order.
            let perm = (0..self.target.num_roots())
                .map(|r| out.perm[self.target.reflect(tj, r)])
                .collect();
            let mut word = out.word;
            word.push(tj);
            out = WeylElement { word, perm };
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct RootSystemDescription {
    pub system: String,
    pub rank: usize,
    pub p: u64,
    pub num_roots: usize,
    pub num_positive: usize,
    pub roots: Vec<RootDescription>,
}

#[derive(Debug, Serialize)]
pub struct RootDescription {
    pub coords: Vec<i64>,
    pub simple_coords: Vec<i64>,
    pub long: bool,
    pub height: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        assert_eq!(RootSystem::new(SystemType::B(2)).unwrap().num_roots(), 8);
        assert_eq!(RootSystem::new(SystemType::G2).unwrap().num_roots(), 12);
        assert_eq!(RootSystem::new(SystemType::F4).unwrap().num_roots(), 48);
        assert_eq!(RootSystem::new(SystemType::B(3)).unwrap().num_roots(), 18);
        assert_eq!(RootSystem::new(SystemType::C(3)).unwrap().num_roots(), 18);
    }

    #[test]
    fn exactly_two_root_lengths() {
        for t in [SystemType::B(2), SystemType::C(3), SystemType::G2, SystemType::F4] {
            let rs = RootSystem::new(t).unwrap();
            let longs = (0..rs.num_roots()).filter(|&r| rs.is_long(r)).count();
            assert!(longs > 0 && longs < rs.num_roots());
        }
        // F4 has 24 long and 24 short roots.
        let f4 = RootSystem::new(SystemType::F4).unwrap();
        let longs = (0..f4.num_roots()).filter(|&r| f4.is_long(r)).count();
        assert_eq!(longs, 24);
    }

    #[test]
    fn lambda_values() {
        let b2 = RootSystem::new(SystemType::B(2)).unwrap();
        let short_simple = b2.simple_roots()[1]; // e_2
        let long_simple = b2.simple_roots()[0]; // e_1 - e_2
        assert_eq!(b2.lambda(short_simple), 1);
        assert_eq!(b2.lambda(long_simple), 2);
        let g2 = RootSystem::new(SystemType::G2).unwrap();
        assert_eq!(g2.lambda(g2.simple_roots()[1]), 3);
        let f4 = RootSystem::new(SystemType::F4).unwrap();
        assert_eq!(f4.lambda(f4.simple_roots()[0]), 2);
    }

    #[test]
    fn weyl_group_orders() {
        assert_eq!(RootSystem::new(SystemType::B(2)).unwrap().weyl_group().len(), 8);
        assert_eq!(RootSystem::new(SystemType::G2).unwrap().weyl_group().len(), 12);
        assert_eq!(RootSystem::new(SystemType::F4).unwrap().weyl_group().len(), 1152);
    }

    #[test]
    fn weyl_permutations_preserve_inner_products() {
        let g2 = RootSystem::new(SystemType::G2).unwrap();
        for w in g2.weyl_group() {
            for r in 0..g2.num_roots() {
                for s in 0..g2.num_roots() {
                    assert_eq!(
                        dot(g2.root(r), g2.root(s)),
                        dot(g2.root(w.apply(r)), g2.root(w.apply(s)))
                    );
                }
            }
        }
    }

    #[test]
    fn inversion_sets() {
        let b2 = RootSystem::new(SystemType::B(2)).unwrap();
        let group = b2.weyl_group();
        let id = &group[0];
        assert!(b2.phi_w(id).is_empty());
        for w in &group {
            assert_eq!(b2.phi_w(w).len(), w.len(), "word {:?}", w.word);
        }
        let longest = group.iter().max_by_key(|w| w.len()).unwrap();
        assert_eq!(b2.phi_w(longest).len(), b2.num_positive());
        // A simple reflection inverts exactly its own root.
        let g2 = RootSystem::new(SystemType::G2).unwrap();
        let s0 = g2.simple_reflection(0);
        assert_eq!(g2.phi_w(&s0), vec![g2.simple_roots()[0]]);
    }

    #[test]
    fn duality_swaps_lengths_and_lambda_product_is_p() {
        for t in [SystemType::B(2), SystemType::C(2), SystemType::B(3), SystemType::G2, SystemType::F4] {
            let rs = RootSystem::new(t).unwrap();
            let d = rs.duality().unwrap();
            assert_eq!(d.target.stype(), t.dual());
            for r in 0..rs.num_roots() {
                assert_eq!(rs.lambda(r) * d.target.lambda(d.map_root(r)), rs.char_p());
            }
        }
    }

    #[test]
    fn duality_b2_simple_roots() {
        let b2 = RootSystem::new(SystemType::B(2)).unwrap();
        let d = b2.duality().unwrap();
        let c2 = d.target.clone();
        let short_simple = b2.simple_roots()[1]; // e_2, short
        let img = d.map_root(short_simple);
        assert!(c2.is_long(img));
        assert_eq!(c2.root(img), &[0, 2]); // 2e_2 in C2
    }

    #[test]
    fn f4_duality_exchanges_24_long_and_24_short() {
        let f4 = RootSystem::new(SystemType::F4).unwrap();
        let d = f4.duality().unwrap();
        let mapped_short = (0..f4.num_roots())
            .filter(|&r| f4.is_long(r))
            .map(|r| d.map_root(r))
            .filter(|&i| !d.target.is_long(i))
            .count();
        assert_eq!(mapped_short, 24);
    }

    #[test]
    fn duality_commutes_with_weyl_and_maps_inversion_sets() {
        let b2 = RootSystem::new(SystemType::B(2)).unwrap();
        let d = b2.duality().unwrap();
        for w in b2.weyl_group() {
            let wbar = d.map_weyl(&w);
            assert_eq!(wbar.len(), w.len());
            // \overline{Φ_w} = Φ̄_{w̄} as sets.
            let mut lhs: Vec<usize> = b2.phi_w(&w).iter().map(|&r| d.map_root(r)).collect();
            lhs.sort_unstable();
            let rhs = d.target.phi_w(&wbar);
            assert_eq!(lhs, rhs);
            for r in 0..b2.num_roots() {
                assert_eq!(d.map_root(w.apply(r)), wbar.apply(d.map_root(r)));
            }
        }
    }

    #[test]
    fn long_root_divisibility_holds() {
        for t in [SystemType::B(2), SystemType::C(3), SystemType::G2, SystemType::F4] {
            assert!(RootSystem::new(t).unwrap().long_root_divisibility(), "{t}");
        }
        // B2 witness: the long positive roots are b = a1 and 2a + b; the
        // short-simple coefficients are 0 and 2.
        let b2 = RootSystem::new(SystemType::B(2)).unwrap();
        let longs: Vec<&[i64]> = (0..b2.num_positive())
            .filter(|&r| b2.is_long(r))
            .map(|r| b2.simple_coords(r))
            .collect();
        assert_eq!(longs, vec![&[1, 0][..], &[1, 2][..]]);
    }

    #[test]
    fn g2_self_duality_is_the_diagram_symmetry() {
        let g2 = RootSystem::new(SystemType::G2).unwrap();
        let d = g2.self_duality().unwrap();
        // a ↦ b and b ↦ a on the simple roots.
        assert_eq!(d.map_root(g2.simple_roots()[0]), g2.simple_roots()[1]);
        assert_eq!(d.map_root(g2.simple_roots()[1]), g2.simple_roots()[0]);
        // Applying the bijection twice is a length-preserving bijection
        // with λ(r)·λ(r̄) = p at each step.
        for r in 0..g2.num_roots() {
            let twice = d.map_root(d.map_root(r));
            assert_eq!(g2.is_long(twice), g2.is_long(r));
        }
    }

    #[test]
    fn single_length_types_are_rejected() {
        assert!(SystemType::parse("A2").is_err());
        assert!(SystemType::parse("B1").is_err());
        assert_eq!(SystemType::parse("b3").unwrap(), SystemType::B(3));
    }
}
