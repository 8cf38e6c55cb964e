//! Twisted and mixed rings in characteristic `p`, with the functors
//! between them and twisted descent.
//!
//! A twisted ring is a pair `(R, φ)` with `φ∘φ = fr_R`; a mixed ring is a
//! quadruple `(R₁, R₂, φ₁, φ₂)` with `φ₂∘φ₁ = fr_{R₁}` and
//! `φ₁∘φ₂ = fr_{R₂}`. Between them:
//!
//! * `mix(R) = (R, R, id, fr)` embeds ordinary rings fully faithfully,
//! * `twix(R, φ) = (R, R, φ, φ)` embeds twisted rings faithfully but not
//!   fully, and coincides with extension of scalars from `F_√p` to `F_p`,
//! * `twist(R) = (R×R, (x,y) ↦ (y^p, x))` embeds ordinary rings into
//!   twisted rings; `T_p = twist(F_p)`,
//! * `τ` swaps the two components of a mixed ring,
//! * a descent datum `f: X̂ → τX̂` with `τf∘f = id` recognizes `X̂` as a
//!   twix image and recovers the twisted ring `(X₂, φ₁∘f₂)`.
//!
//! All categorical identities are checked pointwise: exhaustively on
//! finite carriers, on generators plus seeded samples otherwise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Ring, RingDescription, RingRef, Value};
use crate::maps::{test_points, RingMap, Side};

/// Sample count for pointwise twister verification on infinite carriers.
pub const TWISTER_SAMPLES: usize = 1000;
/// Sample count for morphism square verification on infinite carriers.
pub const MORPHISM_SAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedRing {
    pub carrier: RingRef,
    pub twister: RingMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRing {
    pub c1: RingRef,
    pub c2: RingRef,
    /// `φ₁: c1 → c2`
    pub m1: RingMap,
    /// `φ₂: c2 → c1`
    pub m2: RingMap,
}

/// A pair `(f₁, f₂)` of ring maps between the components of two mixed
/// rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMorphism {
    pub f1: RingMap,
    pub f2: RingMap,
}

/// Outcome of a pointwise commuting-square check.
#[derive(Clone, Debug)]
pub struct MorphismCheck {
    pub ok: bool,
    /// An input element witnessing failure, with its ring.
    pub counterexample: Option<(RingRef, Value)>,
}

impl MorphismCheck {
    fn pass() -> Self {
        MorphismCheck {
            ok: true,
            counterexample: None,
        }
    }

    fn fail(ring: RingRef, v: Value) -> Self {
        MorphismCheck {
            ok: false,
            counterexample: Some((ring, v)),
        }
    }
}

impl TwistedRing {
    /// Builds a twisted ring, verifying `φ∘φ = fr` pointwise.
    pub fn new(carrier: RingRef, twister: RingMap) -> Result<TwistedRing> {
        if !twister.is_endo() || *twister.source != *carrier {
            return Err(Error::RingMismatch(
                "twister must be an endomorphism of the carrier".into(),
            ));
        }
        let tr = TwistedRing { carrier, twister };
        if let Some((_, v)) = tr.twister_defect() {
            return Err(Error::InvalidArgument(format!(
                "twister squared differs from the Frobenius at {}",
                tr.carrier.render(&v)
            )));
        }
        Ok(tr)
    }

    /// Returns a witness where `φ(φ(x)) ≠ x^p`, if any.
    pub fn twister_defect(&self) -> Option<(RingRef, Value)> {
        for v in test_points(&self.carrier, TWISTER_SAMPLES) {
            if self.twister.apply(&self.twister.apply(&v)) != self.carrier.frobenius(&v) {
                return Some((self.carrier.clone(), v));
            }
        }
        None
    }

    /// The field of order `√p`: the twisted ring `(F_p, id)`.
    pub fn f_sqrt_p(p: u64) -> Result<TwistedRing> {
        let fp = Ring::finite_field(p, 1, None)?;
        TwistedRing::new(fp.clone(), RingMap::identity(fp))
    }

    /// The twisted field of order `√q`, `q = p^h` with `h` odd:
    /// `(F_q, x ↦ x^(p^((h+1)/2)))`.
    pub fn f_sqrt_q(p: u64, h: usize) -> Result<TwistedRing> {
        let k = Ring::finite_field(p, h, None)?;
        let sigma = RingMap::tits(k.clone())?;
        TwistedRing::new(k, sigma)
    }

    pub fn describe(&self) -> TwistedRingDescription {
        TwistedRingDescription {
            kind: "twisted".into(),
            carrier: self.carrier.describe(),
            twister: self.twister.describe(),
        }
    }

    /// Structural-plus-pointwise equality.
    pub fn equal(&self, other: &TwistedRing) -> bool {
        self.carrier == other.carrier
            && self.twister.equal_pointwise(&other.twister, MORPHISM_SAMPLES)
    }
}

impl MixedRing {
    /// Builds a mixed ring, verifying `φ₂∘φ₁ = fr₁` and `φ₁∘φ₂ = fr₂`
    /// pointwise.
    pub fn new(c1: RingRef, c2: RingRef, m1: RingMap, m2: RingMap) -> Result<MixedRing> {
        if *m1.source != *c1 || *m1.target != *c2 || *m2.source != *c2 || *m2.target != *c1 {
            return Err(Error::RingMismatch(
                "mixers must run between the two components".into(),
            ));
        }
        let mr = MixedRing { c1, c2, m1, m2 };
        if let Some((ring, v)) = mr.mixer_defect() {
            return Err(Error::InvalidArgument(format!(
                "mixers do not compose to the Frobenius at {}",
                ring.render(&v)
            )));
        }
        Ok(mr)
    }

    pub fn mixer_defect(&self) -> Option<(RingRef, Value)> {
        for v in test_points(&self.c1, TWISTER_SAMPLES) {
            if self.m2.apply(&self.m1.apply(&v)) != self.c1.frobenius(&v) {
                return Some((self.c1.clone(), v));
            }
        }
        for v in test_points(&self.c2, TWISTER_SAMPLES) {
            if self.m1.apply(&self.m2.apply(&v)) != self.c2.frobenius(&v) {
                return Some((self.c2.clone(), v));
            }
        }
        None
    }

    /// The mixed field `(k, ℓ) = (k, ℓ, inc, inc∘fr)` for
    /// `ℓ = F_p(t) ⊇ k = F_p(t^p)`.
    pub fn function_field_mixed(p: u64) -> Result<MixedRing> {
        let k = Ring::rational_function_subfield(p)?;
        let l = Ring::rational_function(p)?;
        let inc = RingMap::inclusion(k.clone(), l.clone())?;
        let fr_into = RingMap::frobenius_power(l.clone(), k.clone(), 1)?;
        MixedRing::new(k, l, inc, fr_into)
    }

    pub fn describe(&self) -> MixedRingDescription {
        MixedRingDescription {
            kind: "mixed".into(),
            components: vec![self.c1.describe(), self.c2.describe()],
            mixers: vec![self.m1.describe(), self.m2.describe()],
        }
    }

    pub fn equal(&self, other: &MixedRing) -> bool {
        self.c1 == other.c1
            && self.c2 == other.c2
            && self.m1.equal_pointwise(&other.m1, MORPHISM_SAMPLES)
            && self.m2.equal_pointwise(&other.m2, MORPHISM_SAMPLES)
    }
}

#[derive(Debug, Serialize)]
pub struct TwistedRingDescription {
    pub kind: String,
    pub carrier: RingDescription,
    pub twister: String,
}

#[derive(Debug, Serialize)]
pub struct MixedRingDescription {
    pub kind: String,
    pub components: Vec<RingDescription>,
    pub mixers: Vec<String>,
}

/// `mix(R) = (R, R, id, fr)`.
pub fn mix(r: RingRef) -> MixedRing {
    MixedRing {
        c1: r.clone(),
        c2: r.clone(),
        m1: RingMap::identity(r.clone()),
        m2: RingMap::frobenius(r),
    }
}

/// `twix(R, φ) = (R, R, φ, φ)`; the mixed-ring identities follow from
/// `φ² = fr`.
pub fn twix(x: &TwistedRing) -> MixedRing {
    MixedRing {
        c1: x.carrier.clone(),
        c2: x.carrier.clone(),
        m1: x.twister.clone(),
        m2: x.twister.clone(),
    }
}

/// `twist(R) = (R×R, (x,y) ↦ (y^p, x))`.
pub fn twist(r: RingRef) -> Result<TwistedRing> {
    let product = Ring::product(r.clone(), r)?;
    let twister = RingMap::twist_twister(product.clone())?;
    TwistedRing::new(product, twister)
}

/// `T_p = twist(F_p)`.
pub fn t_p(p: u64) -> Result<TwistedRing> {
    twist(Ring::finite_field(p, 1, None)?)
}

/// `τ(X₁, X₂, φ₁, φ₂) = (X₂, X₁, φ₂, φ₁)`; an involution.
pub fn tau(x: &MixedRing) -> MixedRing {
    MixedRing {
        c1: x.c2.clone(),
        c2: x.c1.clone(),
        m1: x.m2.clone(),
        m2: x.m1.clone(),
    }
}

/// Extension of scalars from `F_√p` to `F_p` of a twisted ring: equal to
/// `twix`, exposed under its base-change name for reporting.
pub fn base_change_twisted(x: &TwistedRing) -> MixedRing {
    twix(x)
}

/// Checks that `f` is a morphism of twisted rings `X̃ → Ỹ`, i.e. a ring
/// map with `φ_Y∘f = f∘φ_X`, pointwise (exhaustive on finite carriers,
/// generators plus samples otherwise).
pub fn check_twisted_morphism(f: &RingMap, x: &TwistedRing, y: &TwistedRing) -> Result<MorphismCheck> {
    if *f.source != *x.carrier || *f.target != *y.carrier {
        return Err(Error::RingMismatch(
            "morphism endpoints do not match the twisted rings".into(),
        ));
    }
    for v in test_points(&x.carrier, MORPHISM_SAMPLES) {
        if y.twister.apply(&f.apply(&v)) != f.apply(&x.twister.apply(&v)) {
            return Ok(MorphismCheck::fail(x.carrier.clone(), v));
        }
    }
    Ok(MorphismCheck::pass())
}

/// Checks that `(f₁, f₂)` is a morphism of mixed rings `X̂ → Ŷ`:
/// `φ_{Y,i}∘f_i = f_{2−i}∘φ_{X,i}` for `i = 1, 2`.
pub fn check_mixed_morphism(f: &MixedMorphism, x: &MixedRing, y: &MixedRing) -> Result<MorphismCheck> {
    if *f.f1.source != *x.c1
        || *f.f1.target != *y.c1
        || *f.f2.source != *x.c2
        || *f.f2.target != *y.c2
    {
        return Err(Error::RingMismatch(
            "morphism endpoints do not match the mixed rings".into(),
        ));
    }
    for v in test_points(&x.c1, MORPHISM_SAMPLES) {
        if y.m1.apply(&f.f1.apply(&v)) != f.f2.apply(&x.m1.apply(&v)) {
            return Ok(MorphismCheck::fail(x.c1.clone(), v));
        }
    }
    for v in test_points(&x.c2, MORPHISM_SAMPLES) {
        if y.m2.apply(&f.f2.apply(&v)) != f.f1.apply(&x.m2.apply(&v)) {
            return Ok(MorphismCheck::fail(x.c2.clone(), v));
        }
    }
    Ok(MorphismCheck::pass())
}

/// A twisted descent datum on `X̂`: a mixed morphism `f: X̂ → τX̂` with
/// `τf∘f = id`.
#[derive(Clone, Debug)]
pub struct DescentDatum {
    pub f: MixedMorphism,
}

impl DescentDatum {
    /// Validates the descent equations on `X̂` pointwise.
    pub fn new(x: &MixedRing, f: MixedMorphism) -> Result<DescentDatum> {
        let taux = tau(x);
        let check = check_mixed_morphism(&f, x, &taux)?;
        if !check.ok {
            let (ring, v) = check.counterexample.unwrap();
            return Err(Error::InvalidDescentDatum(format!(
                "not a mixed morphism into τX̂ (fails at {})",
                ring.render(&v)
            )));
        }
        // τf∘f = id: componentwise f₂∘f₁ = id and f₁∘f₂ = id.
        for v in test_points(&x.c1, MORPHISM_SAMPLES) {
            if f.f2.apply(&f.f1.apply(&v)) != v {
                return Err(Error::InvalidDescentDatum(format!(
                    "τf∘f ≠ id at {}",
                    x.c1.render(&v)
                )));
            }
        }
        for v in test_points(&x.c2, MORPHISM_SAMPLES) {
            if f.f1.apply(&f.f2.apply(&v)) != v {
                return Err(Error::InvalidDescentDatum(format!(
                    "f∘τf ≠ id at {}",
                    x.c2.render(&v)
                )));
            }
        }
        Ok(DescentDatum { f })
    }

    /// The identity descent datum on a twix image.
    pub fn identity_on_twix(x: &TwistedRing) -> Result<DescentDatum> {
        let hat = twix(x);
        DescentDatum::new(
            &hat,
            MixedMorphism {
                f1: RingMap::identity(x.carrier.clone()),
                f2: RingMap::identity(x.carrier.clone()),
            },
        )
    }
}

/// Descends a mixed ring along a descent datum: returns the twisted ring
/// `(X₂, φ₁∘f₂)` together with the verified isomorphism
/// `(f₁, id): X̂ → twix(result)`.
pub fn descend(x: &MixedRing, datum: &DescentDatum) -> Result<(TwistedRing, MixedMorphism)> {
    let twister = datum.f.f2.then(&x.m1)?;
    let result = TwistedRing::new(x.c2.clone(), twister)?;
    let iso = MixedMorphism {
        f1: datum.f.f1.clone(),
        f2: RingMap::identity(x.c2.clone()),
    };
    let check = check_mixed_morphism(&iso, x, &twix(&result))?;
    if !check.ok {
        let (ring, v) = check.counterexample.unwrap();
        return Err(Error::InvalidDescentDatum(format!(
            "descent isomorphism fails at {}",
            ring.render(&v)
        )));
    }
    Ok((result, iso))
}

/// Idempotent splitting: a twisted ring whose carrier is a product
/// and whose twister interchanges the factors is the recombination of a
/// mixed ring, which this recovers.
pub fn split(x: &TwistedRing) -> Result<MixedRing> {
    let (r1, r2) = match x.carrier.kind() {
        crate::fields::RingKind::Product(a, b) => (a.clone(), b.clone()),
        _ => {
            return Err(Error::RingMismatch(
                "splitting needs a product carrier".into(),
            ))
        }
    };
    // Extract φ₁: R₁ → R₂ and φ₂: R₂ → R₁ from the twister
    // (x, y) ↦ (φ₂(y), φ₁(x)) by probing coordinates through the product
    // structure of the twister map.
    let (first, second) = match x.twister.kind() {
        crate::maps::MapKind::ProductMap { first, second } => (first, second),
        _ => {
            return Err(Error::RingMismatch(
                "twister is not in product form".into(),
            ))
        }
    };
    if first.0 != Side::Right || second.0 != Side::Left {
        return Err(Error::RingMismatch(
            "twister does not interchange the factors".into(),
        ));
    }
    let m2 = (*first.1).clone(); // R₂ → R₁
    let m1 = (*second.1).clone(); // R₁ → R₂
    MixedRing::new(r1, r2, m1, m2)
}

/// Recombination, the inverse of `split`: a mixed ring `(R₁, R₂, φ₁, φ₂)` gives
/// the twisted ring `(R₁×R₂, (x, y) ↦ (φ₂(y), φ₁(x)))`.
pub fn recombine(x: &MixedRing) -> Result<TwistedRing> {
    let product = Ring::product(x.c1.clone(), x.c2.clone())?;
    let twister = RingMap::product_map(
        product.clone(),
        product.clone(),
        (Side::Right, x.m2.clone()),
        (Side::Left, x.m1.clone()),
    )?;
    TwistedRing::new(product, twister)
}

/// Enumerates the twisted-ring automorphisms of `T_p` fixing the image of
/// `F_√p` (the canonical map from the prime field), and returns how many
/// there are. The candidate unital ring endomorphisms of `F_p × F_p` are
/// the four maps built from component selections, since the two
/// idempotents generate the ring over the prime field.
pub fn count_automorphisms(p: u64) -> Result<usize> {
    let tp = t_p(p)?;
    let fp = Ring::finite_field(p, 1, None)?;
    let eta = RingMap::from_prime(fp.clone(), tp.carrier.clone())?;
    let (left, right) = match tp.carrier.kind() {
        crate::fields::RingKind::Product(a, b) => (a.clone(), b.clone()),
        _ => unreachable!("T_p has a product carrier"),
    };
    let id_l = RingMap::identity(left);
    let id_r = RingMap::identity(right);
    let candidates = [
        [(Side::Left, id_l.clone()), (Side::Right, id_r.clone())],
        [(Side::Right, id_r.clone()), (Side::Left, id_l.clone())],
        [(Side::Left, id_l.clone()), (Side::Left, id_l.clone())],
        [(Side::Right, id_r.clone()), (Side::Right, id_r.clone())],
    ];
    let mut count = 0;
    for [first, second] in candidates {
        let f = RingMap::product_map(tp.carrier.clone(), tp.carrier.clone(), first, second)?;
        if f.is_bijective() != Some(true) {
            continue;
        }
        if !check_twisted_morphism(&f, &tp, &tp)?.ok {
            continue;
        }
        // Fixing the image of F_√p: f∘η = η.
        let fixes = test_points(&fp, 0)
            .iter()
            .all(|v| f.apply(&eta.apply(v)) == eta.apply(v));
        if fixes {
            count += 1;
        }
    }
    Ok(count)
}

/// For each target, counts the twisted morphisms from `F_√p = (F_p, id)`:
/// the unique ring map from the prime field, checked to commute with the
/// twisters. Returns the per-target counts (each should be exactly 1).
pub fn verify_initial(p: u64, targets: &[TwistedRing]) -> Result<Vec<usize>> {
    let f_sqrt = TwistedRing::f_sqrt_p(p)?;
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        if t.carrier.characteristic() != p {
            return Err(Error::RingMismatch(
                "target has a different characteristic".into(),
            ));
        }
        let f = RingMap::from_prime(f_sqrt.carrier.clone(), t.carrier.clone())?;
        let ok = check_twisted_morphism(&f, &f_sqrt, t)?.ok;
        out.push(if ok { 1 } else { 0 });
    }
    Ok(out)
}
