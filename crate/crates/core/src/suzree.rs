//! Suzuki and small Ree groups as rational points of twisted algebraic
//! groups: the fixed-point set `{ g ∈ G(k) | α_π(g) = α_σ(g) }` for a
//! twisted field `(k, σ)`, computed two independent ways at desk scale —
//! subgroup closure from the fixed generators, and exhaustive fixed-point
//! filtering of all Bruhat forms.
//!
//! The closure engine is data-parallel over the BFS frontier when the
//! `parallel` feature is enabled; the sequential fallback produces the
//! identical set.

use std::collections::HashSet;

use serde::Serialize;

use crate::chevalley::{alpha_sigma, BruhatForm, ChevalleyGroup, SpecialIsogeny, TorusElement};
use crate::error::{Error, Result};
use crate::fields::Value;
use crate::matrix::Matrix;
use crate::rootsystem::SystemType;
use crate::twistmix::TwistedRing;

use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default cap on enumerated elements; `²G₂(27)` (order ≈ 10¹⁰) must fail
/// fast instead of exhausting memory.
pub const DEFAULT_CAP: usize = 2_000_000;

/// A Suzuki–Ree group descriptor: the ambient Chevalley group of type B2
/// (p = 2) or G2 (p = 3) over `k`, together with the twisted field
/// `(k, σ)` and the special isogeny `α_π`.
pub struct TwistedGroupDescriptor {
    pub group: Arc<ChevalleyGroup>,
    pub field: TwistedRing,
    pub alpha_pi: SpecialIsogeny,
}

impl TwistedGroupDescriptor {
    pub fn new(stype: SystemType, field: TwistedRing) -> Result<TwistedGroupDescriptor> {
        match (stype, field.carrier.characteristic()) {
            (SystemType::B(2), 2) | (SystemType::G2, 3) => {}
            (t, p) => {
                return Err(Error::UnsupportedType(format!(
                    "twisted groups need B2 in characteristic 2 or G2 in characteristic 3, got {t} over p = {p}"
                )))
            }
        }
        if !field.carrier.is_field() {
            return Err(Error::RingMismatch(
                "the twisted field must have a field carrier".into(),
            ));
        }
        let group = ChevalleyGroup::new(stype, field.carrier.clone())?;
        let alpha_pi = SpecialIsogeny::alpha_pi(group.clone())?;
        Ok(TwistedGroupDescriptor {
            group,
            field,
            alpha_pi,
        })
    }

    /// `q = |k|` for finite `k`.
    pub fn q(&self) -> Option<u64> {
        self.field.carrier.order()
    }

    /// The literature order formula, used as an external oracle:
    /// `q²(q²+1)(q−1)` for ²B₂, `q³(q³+1)(q−1)` for ²G₂.
    pub fn expected_order(&self) -> Option<u64> {
        let q = self.q()?;
        Some(match self.group.system().stype() {
            SystemType::B(2) => q * q * (q * q + 1) * (q - 1),
            SystemType::G2 => q * q * q * (q * q * q + 1) * (q - 1),
            _ => unreachable!(),
        })
    }

    /// Whether `α_π(g) = α_σ(g)`, computing `α_π` through the Bruhat
    /// factorization of `g`.
    pub fn is_fixed_point(&self, g: &Matrix) -> Result<bool> {
        let form = self.group.decompose(g)?;
        self.is_fixed_form_of(&form, g)
    }

    /// Fixed-point test for an element given with its Bruhat form.
    pub fn is_fixed_form(&self, form: &BruhatForm) -> Result<bool> {
        let g = self.group.compose(form)?;
        self.is_fixed_form_of(form, &g)
    }

    fn is_fixed_form_of(&self, form: &BruhatForm, g: &Matrix) -> Result<bool> {
        let lhs = self.alpha_pi.apply_form(form)?;
        let rhs = alpha_sigma(&self.group, g, &self.field.twister)?;
        Ok(lhs == rhs)
    }
}

/// A set of group elements with canonical-encoding membership index.
#[derive(Debug)]
pub struct ElementSet {
    pub elements: Vec<Matrix>,
    pub index: HashSet<Vec<u8>>,
    /// Set after a completed closure run.
    pub closed: bool,
}

impl ElementSet {
    fn new() -> ElementSet {
        ElementSet {
            elements: Vec::new(),
            index: HashSet::new(),
            closed: false,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, group: &ChevalleyGroup, g: &Matrix) -> bool {
        self.index.contains(&g.encode(&group.ring))
    }

    fn insert(&mut self, group: &ChevalleyGroup, g: Matrix) -> bool {
        let key = g.encode(&group.ring);
        if self.index.insert(key) {
            self.elements.push(g);
            true
        } else {
            false
        }
    }

    /// Sorts elements by canonical encoding, making reports deterministic
    /// regardless of discovery order.
    fn canonicalize(&mut self, group: &ChevalleyGroup) {
        self.elements.sort_by_cached_key(|m| m.encode(&group.ring));
    }

    /// A fingerprint of the set (order-independent after
    /// canonicalization).
    pub fn fingerprint(&self, group: &ChevalleyGroup) -> u64 {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let mut keys: Vec<Vec<u8>> = self
            .elements
            .iter()
            .map(|m| m.encode(&group.ring))
            .collect();
        keys.sort();
        let mut h = DefaultHasher::new();
        keys.hash(&mut h);
        h.finish()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClosureOptions {
    pub cap: usize,
    pub parallel: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            cap: DEFAULT_CAP,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClosureStats {
    pub order: usize,
    pub generators_used: usize,
    pub closure_steps: usize,
}

/// Enumerates `U(k)` through its `q^{|Φ⁺|}` Bruhat u-parameter tuples and
/// keeps the fixed points of `(α_π, α_σ)`.
pub fn twisted_unipotent(
    desc: &TwistedGroupDescriptor,
    opts: &ClosureOptions,
) -> Result<ElementSet> {
    let elems = desc
        .field
        .carrier
        .enumerate()
        .ok_or_else(|| Error::CapExceeded("U(k) enumeration needs a finite field".into()))?;
    let np = desc.group.system().num_positive();
    let total = (elems.len() as u128).pow(np as u32);
    if total > opts.cap as u128 {
        return Err(Error::CapExceeded(format!(
            "|U(k)| = {total} candidates exceed the cap {}",
            opts.cap
        )));
    }
    let tuples: Vec<usize> = (0..total as usize).collect();
    let check = |idx: &usize| -> Option<Matrix> {
        let mut form = desc.group.trivial_form();
        let mut rest = *idx;
        for r in 0..np {
            form.u[r] = elems[rest % elems.len()].clone();
            rest /= elems.len();
        }
        match desc.is_fixed_form(&form) {
            Ok(true) => Some(desc.group.compose(&form).unwrap()),
            _ => None,
        }
    };
    let found = run_filter(&tuples, check, opts.parallel);
    let mut set = ElementSet::new();
    for m in found {
        set.insert(&desc.group, m);
    }
    set.canonicalize(&desc.group);
    Ok(set)
}

/// Torus elements of `T(k)` fixed by the isogeny pair: the `(q−1)^rank`
/// unit tuples are filtered exactly.
pub fn fixed_torus_elements(desc: &TwistedGroupDescriptor) -> Result<Vec<Matrix>> {
    let units = desc
        .field
        .carrier
        .enumerate_units()
        .ok_or_else(|| Error::CapExceeded("T(k) enumeration needs a finite field".into()))?;
    let rank = desc.group.system().rank();
    let mut out = Vec::new();
    let total = units.len().pow(rank as u32);
    for idx in 0..total {
        let mut rest = idx;
        let values: Vec<Value> = (0..rank)
            .map(|_| {
                let v = units[rest % units.len()].clone();
                rest /= units.len();
                v
            })
            .collect();
        let mut form = desc.group.trivial_form();
        form.torus = TorusElement { values };
        if desc.is_fixed_form(&form)? {
            out.push(desc.group.compose(&form)?);
        }
    }
    Ok(out)
}

/// Weyl representatives `n_w` fixed by the isogeny pair, filtered over the
/// `|W|` monomial candidates.
pub fn fixed_weyl_representatives(desc: &TwistedGroupDescriptor) -> Result<Vec<Matrix>> {
    let mut out = Vec::new();
    for w in desc.group.weyl() {
        let mut form = desc.group.trivial_form();
        form.w = w.clone();
        if desc.is_fixed_form(&form)? {
            out.push(desc.group.compose(&form)?);
        }
    }
    Ok(out)
}

fn run_filter<T: Sync, F>(items: &[T], f: F, parallel: bool) -> Vec<Matrix>
where
    F: Fn(&T) -> Option<Matrix> + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().filter_map(&f).collect();
    }
    let _ = parallel;
    items.iter().filter_map(f).collect()
}

/// The full twisted group by closure under multiplication of the fixed
/// unipotent, torus, and Weyl generators. The result is independent of
/// generator order and of the parallel/sequential mode.
pub fn twisted_group(
    desc: &TwistedGroupDescriptor,
    opts: &ClosureOptions,
) -> Result<(ElementSet, ClosureStats)> {
    if let Some(expected) = desc.expected_order() {
        if expected > opts.cap as u64 {
            return Err(Error::CapExceeded(format!(
                "expected order {expected} exceeds the cap {}; raise --cap if this is intentional",
                opts.cap
            )));
        }
    }
    let mut generators: Vec<Matrix> = Vec::new();
    let mut seen = HashSet::new();
    let unipotent = twisted_unipotent(desc, opts)?;
    for m in unipotent.elements {
        if seen.insert(m.encode(&desc.group.ring)) {
            generators.push(m);
        }
    }
    for m in fixed_torus_elements(desc)? {
        if seen.insert(m.encode(&desc.group.ring)) {
            generators.push(m);
        }
    }
    for m in fixed_weyl_representatives(desc)? {
        if seen.insert(m.encode(&desc.group.ring)) {
            generators.push(m);
        }
    }
    closure(desc, &generators, opts)
}

/// Work-queue closure of a generator set under right multiplication.
/// Over small finite fields the breadth-first search runs on packed
/// element indices with full lookup tables; the result is identical.
pub fn closure(
    desc: &TwistedGroupDescriptor,
    generators: &[Matrix],
    opts: &ClosureOptions,
) -> Result<(ElementSet, ClosureStats)> {
    let group = &desc.group;
    let ring = &group.ring;
    let packed_gens: Option<Vec<Vec<u64>>> = ring
        .fin_ops()
        .and_then(|_| generators.iter().map(pack_matrix).collect());
    let (elements, steps) = match packed_gens {
        Some(gens) => closure_packed(group, &gens, opts)?,
        None => closure_generic(group, generators, opts)?,
    };
    let mut set = ElementSet::new();
    for m in elements {
        set.insert(group, m);
    }
    set.closed = true;
    set.canonicalize(group);
    let stats = ClosureStats {
        order: set.len(),
        generators_used: generators.len(),
        closure_steps: steps,
    };
    // A closure under right multiplication that contains the identity is a
    // group iff it is closed under inverses.
    for g in &set.elements {
        let inv = g.inverse(ring)?;
        if !set.contains(group, &inv) {
            return Err(Error::ClosureNotAGroup(
                "an element's inverse is missing from the closure".into(),
            ));
        }
    }
    Ok((set, stats))
}

fn closure_generic(
    group: &ChevalleyGroup,
    generators: &[Matrix],
    opts: &ClosureOptions,
) -> Result<(Vec<Matrix>, usize)> {
    let ring = &group.ring;
    let mut index: HashSet<Vec<u8>> = HashSet::new();
    let mut elements: Vec<Matrix> = Vec::new();
    let insert = |index: &mut HashSet<Vec<u8>>, elements: &mut Vec<Matrix>, m: Matrix| -> bool {
        if index.insert(m.encode(ring)) {
            elements.push(m);
            true
        } else {
            false
        }
    };
    insert(&mut index, &mut elements, group.identity());
    let mut frontier: Vec<Matrix> = Vec::new();
    for g in generators {
        if insert(&mut index, &mut elements, g.clone()) {
            frontier.push(g.clone());
        }
    }
    let mut steps = 0usize;
    while !frontier.is_empty() {
        steps += 1;
        let mut next: Vec<Matrix> = Vec::new();
        for chunk in frontier.chunks(512) {
            let produce = |g: &Matrix| -> Vec<Matrix> {
                generators
                    .iter()
                    .map(|s| g.mul(s, ring))
                    .filter(|m| !index.contains(&m.encode(ring)))
                    .collect()
            };
            let produced: Vec<Matrix> = {
                #[cfg(feature = "parallel")]
                {
                    if opts.parallel {
                        chunk.par_iter().flat_map_iter(&produce).collect()
                    } else {
                        chunk.iter().flat_map(produce).collect()
                    }
                }
                #[cfg(not(feature = "parallel"))]
                {
                    chunk.iter().flat_map(produce).collect()
                }
            };
            for m in produced {
                if elements.len() > opts.cap {
                    return Err(Error::CapExceeded(format!(
                        "closure exceeded the cap {}",
                        opts.cap
                    )));
                }
                if insert(&mut index, &mut elements, m.clone()) {
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    Ok((elements, steps))
}

fn pack_matrix(m: &Matrix) -> Option<Vec<u64>> {
    m.data
        .iter()
        .map(|v| match v {
            Value::Fin(x) => Some(*x),
            _ => None,
        })
        .collect()
}

fn unpack_matrix(n: usize, data: &[u64]) -> Matrix {
    Matrix {
        n,
        data: data.iter().map(|&x| Value::Fin(x)).collect(),
    }
}

fn closure_packed(
    group: &ChevalleyGroup,
    generators: &[Vec<u64>],
    opts: &ClosureOptions,
) -> Result<(Vec<Matrix>, usize)> {
    let ops = group.ring.fin_ops().expect("caller checked");
    let n = group.dim();
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let av = a[i * n + k];
                if av == 0 {
                    continue;
                }
                let arow = &mut out[i * n..(i + 1) * n];
                let brow = &b[k * n..(k + 1) * n];
                for (o, &bv) in arow.iter_mut().zip(brow) {
                    if bv != 0 {
                        *o = ops.add(*o, ops.mul(av, bv));
                    }
                }
            }
        }
        out
    };
    let mut index: HashSet<Vec<u64>> = HashSet::new();
    let mut elements: Vec<Vec<u64>> = Vec::new();
    let identity = pack_matrix(&group.identity()).expect("identity is scalar");
    index.insert(identity.clone());
    elements.push(identity);
    let mut frontier: Vec<Vec<u64>> = Vec::new();
    for g in generators {
        if index.insert(g.clone()) {
            elements.push(g.clone());
            frontier.push(g.clone());
        }
    }
    let mut steps = 0usize;
    while !frontier.is_empty() {
        steps += 1;
        let mut next: Vec<Vec<u64>> = Vec::new();
        for chunk in frontier.chunks(512) {
            let produce = |g: &Vec<u64>| -> Vec<Vec<u64>> {
                generators
                    .iter()
                    .map(|s| mul(g, s))
                    .filter(|m| !index.contains(m))
                    .collect()
            };
            let produced: Vec<Vec<u64>> = {
                #[cfg(feature = "parallel")]
                {
                    if opts.parallel {
                        chunk.par_iter().flat_map_iter(&produce).collect()
                    } else {
                        chunk.iter().flat_map(produce).collect()
                    }
                }
                #[cfg(not(feature = "parallel"))]
                {
                    chunk.iter().flat_map(produce).collect()
                }
            };
            for m in produced {
                if elements.len() > opts.cap {
                    return Err(Error::CapExceeded(format!(
                        "closure exceeded the cap {}",
                        opts.cap
                    )));
                }
                if index.insert(m.clone()) {
                    elements.push(m.clone());
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    Ok((
        elements.iter().map(|d| unpack_matrix(n, d)).collect(),
        steps,
    ))
}

/// Exhaustively enumerates all Bruhat forms of `G(k)` and filters the
/// fixed points: the independent oracle for small `q`.
pub fn exhaustive_fixed_points(
    desc: &TwistedGroupDescriptor,
    opts: &ClosureOptions,
) -> Result<ElementSet> {
    let elems = desc
        .field
        .carrier
        .enumerate()
        .ok_or_else(|| Error::CapExceeded("exhaustive filter needs a finite field".into()))?;
    let units = desc.field.carrier.enumerate_units().unwrap();
    let rs = desc.group.system();
    let np = rs.num_positive();
    let rank = rs.rank();
    let q = elems.len() as u128;
    let total: u128 = desc
        .group
        .weyl()
        .iter()
        .map(|w| q.pow(np as u32) * (units.len() as u128).pow(rank as u32) * q.pow(w.len() as u32))
        .sum();
    if total > opts.cap as u128 {
        return Err(Error::CapExceeded(format!(
            "|G(k)| = {total} Bruhat forms exceed the cap {}",
            opts.cap
        )));
    }

    let mut candidates: Vec<BruhatForm> = Vec::with_capacity(total as usize);
    for w in desc.group.weyl() {
        let lw = w.len();
        let n_u = (elems.len() as u64).pow(np as u32);
        let n_t = (units.len() as u64).pow(rank as u32);
        let n_v = (elems.len() as u64).pow(lw as u32);
        for iu in 0..n_u {
            for it in 0..n_t {
                for iv in 0..n_v {
                    let mut form = desc.group.trivial_form();
                    let mut rest = iu;
                    for r in 0..np {
                        form.u[r] = elems[(rest % elems.len() as u64) as usize].clone();
                        rest /= elems.len() as u64;
                    }
                    let mut rest = it;
                    for j in 0..rank {
                        form.torus.values[j] =
                            units[(rest % units.len() as u64) as usize].clone();
                        rest /= units.len() as u64;
                    }
                    form.w = w.clone();
                    let mut rest = iv;
                    form.v = (0..lw)
                        .map(|_| {
                            let v = elems[(rest % elems.len() as u64) as usize].clone();
                            rest /= elems.len() as u64;
                            v
                        })
                        .collect();
                    candidates.push(form);
                }
            }
        }
    }
    let check = |form: &BruhatForm| -> Option<Matrix> {
        match desc.is_fixed_form(form) {
            Ok(true) => Some(desc.group.compose(form).unwrap()),
            _ => None,
        }
    };
    let found = run_filter(&candidates, check, opts.parallel);
    let mut set = ElementSet::new();
    for m in found {
        set.insert(&desc.group, m);
    }
    set.canonicalize(&desc.group);
    Ok(set)
}

/// Verifies `α_π(g) = α_σ(g)` on every element of a computed set, through
/// Bruhat factorization of arbitrary matrices.
pub fn verify_all_fixed(
    desc: &TwistedGroupDescriptor,
    set: &ElementSet,
    parallel: bool,
) -> Result<bool> {
    let check = |g: &Matrix| -> Option<Matrix> {
        match desc.is_fixed_point(g) {
            Ok(true) => None,
            _ => Some(g.clone()),
        }
    };
    let offenders = run_filter(&set.elements, check, parallel);
    Ok(offenders.is_empty())
}

#[derive(Debug, Serialize)]
pub struct InclusionReport {
    pub sub_order: usize,
    pub sup_order: usize,
    pub embedded: bool,
}

/// The functorial inclusion induced by a twisted-field morphism
/// `(k, σ) → (k′, σ′)`: entrywise application of the canonical field
/// embedding must send the subgroup into the supergroup. Errors when no
/// twisted-field morphism exists.
pub fn functorial_inclusion(
    sub: &TwistedGroupDescriptor,
    sup: &TwistedGroupDescriptor,
    opts: &ClosureOptions,
) -> Result<InclusionReport> {
    if sub.group.system().stype() != sup.group.system().stype() {
        return Err(Error::UnsupportedType(
            "inclusion needs matching group types".into(),
        ));
    }
    let embeddings =
        crate::maps::RingMap::finite_embeddings(sub.field.carrier.clone(), sup.field.carrier.clone());
    let twisted = embeddings
        .into_iter()
        .find(|f| {
            crate::twistmix::check_twisted_morphism(f, &sub.field, &sup.field)
                .map(|c| c.ok)
                .unwrap_or(false)
        })
        .ok_or_else(|| {
            Error::NoFieldMorphism(format!(
                "({}, {}) -> ({}, {})",
                sub.field.carrier,
                sub.field.twister.describe(),
                sup.field.carrier,
                sup.field.twister.describe()
            ))
        })?;
    let (sub_set, _) = twisted_group(sub, opts)?;
    let (sup_set, _) = twisted_group(sup, opts)?;
    let embedded = sub_set
        .elements
        .iter()
        .all(|g| sup_set.contains(&sup.group, &g.map(|v| twisted.apply(v))));
    Ok(InclusionReport {
        sub_order: sub_set.len(),
        sup_order: sup_set.len(),
        embedded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::SliceRandom, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn suzuki_f2() -> TwistedGroupDescriptor {
        TwistedGroupDescriptor::new(SystemType::B(2), TwistedRing::f_sqrt_p(2).unwrap()).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        // G2 needs characteristic 3.
        assert!(TwistedGroupDescriptor::new(
            SystemType::G2,
            TwistedRing::f_sqrt_p(2).unwrap()
        )
        .is_err());
        assert!(TwistedGroupDescriptor::new(
            SystemType::C(2),
            TwistedRing::f_sqrt_p(2).unwrap()
        )
        .is_err());
    }

    #[test]
    fn identity_is_fixed_and_long_generators_are_not() {
        let desc = suzuki_f2();
        let group = &desc.group;
        assert!(desc.is_fixed_point(&group.identity()).unwrap());
        // x_b(t) for b long: α_π sends it to x_a(t) ≠ x_b(σt) for t ≠ 0.
        let b_long = group
            .system()
            .simple_roots()
            .iter()
            .copied()
            .find(|&r| group.system().is_long(r))
            .unwrap();
        let one = group.ring.one();
        assert!(!desc.is_fixed_point(&group.x(b_long, &one)).unwrap());
    }

    #[test]
    fn unipotent_fixed_point_counts() {
        let opts = ClosureOptions::default();
        // ²B₂(F₂, id): 4 of the 16 elements of U(F₂) are fixed.
        let set = twisted_unipotent(&suzuki_f2(), &opts).unwrap();
        assert_eq!(set.len(), 4);
        // ²G₂(F₃, id): 27 of the 729.
        let ree = TwistedGroupDescriptor::new(SystemType::G2, TwistedRing::f_sqrt_p(3).unwrap())
            .unwrap();
        let set = twisted_unipotent(&ree, &opts).unwrap();
        assert_eq!(set.len(), 27);
    }

    #[test]
    fn suzuki_f2_order_both_methods() {
        let desc = suzuki_f2();
        let opts = ClosureOptions::default();
        let (set, stats) = twisted_group(&desc, &opts).unwrap();
        assert_eq!(set.len(), 20);
        assert_eq!(desc.expected_order(), Some(20));
        assert!(stats.closure_steps > 0);
        let brute = exhaustive_fixed_points(&desc, &opts).unwrap();
        assert_eq!(brute.len(), 20);
        let same = brute
            .elements
            .iter()
            .all(|g| set.contains(&desc.group, g));
        assert!(same);
        assert!(verify_all_fixed(&desc, &set, opts.parallel).unwrap());
    }

    #[test]
    fn closure_is_order_independent() {
        let desc = suzuki_f2();
        let opts = ClosureOptions::default();
        let mut generators = Vec::new();
        let mut seen = HashSet::new();
        for m in twisted_unipotent(&desc, &opts).unwrap().elements {
            if seen.insert(m.encode(&desc.group.ring)) {
                generators.push(m);
            }
        }
        for m in fixed_torus_elements(&desc).unwrap() {
            if seen.insert(m.encode(&desc.group.ring)) {
                generators.push(m);
            }
        }
        for m in fixed_weyl_representatives(&desc).unwrap() {
            if seen.insert(m.encode(&desc.group.ring)) {
                generators.push(m);
            }
        }
        let (a, _) = closure(&desc, &generators, &opts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut shuffled = generators.clone();
        shuffled.shuffle(&mut rng);
        let (b, _) = closure(&desc, &shuffled, &opts).unwrap();
        assert_eq!(a.fingerprint(&desc.group), b.fingerprint(&desc.group));
        // Sequential and parallel agree.
        let seq = ClosureOptions {
            parallel: false,
            ..opts
        };
        let (c, _) = closure(&desc, &generators, &seq).unwrap();
        assert_eq!(a.fingerprint(&desc.group), c.fingerprint(&desc.group));
    }

    #[test]
    fn fixed_point_set_is_a_subgroup() {
        let desc = suzuki_f2();
        let opts = ClosureOptions::default();
        let (set, _) = twisted_group(&desc, &opts).unwrap();
        let ring = &desc.group.ring;
        for g in &set.elements {
            assert!(set.contains(&desc.group, &g.inverse(ring).unwrap()));
            for h in &set.elements {
                assert!(set.contains(&desc.group, &g.mul(h, ring)));
            }
        }
    }

    #[test]
    fn cap_exceeded_fails_fast() {
        let ree27 = TwistedGroupDescriptor::new(
            SystemType::G2,
            TwistedRing::f_sqrt_q(3, 3).unwrap(),
        )
        .unwrap();
        // Expected order ≈ 1.0e10 exceeds the default cap.
        let err = twisted_group(&ree27, &ClosureOptions::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
    }

    #[test]
    fn inclusion_of_sz2_into_sz8() {
        let sub = suzuki_f2();
        let sup = TwistedGroupDescriptor::new(
            SystemType::B(2),
            TwistedRing::f_sqrt_q(2, 3).unwrap(),
        )
        .unwrap();
        let report = functorial_inclusion(&sub, &sup, &ClosureOptions::default()).unwrap();
        assert_eq!(report.sub_order, 20);
        assert_eq!(report.sup_order, 29120);
        assert!(report.embedded);
        // No twisted-field morphism in the reverse direction.
        assert!(matches!(
            functorial_inclusion(&sup, &sub, &ClosureOptions::default()),
            Err(Error::NoFieldMorphism(_))
        ));
    }
}
