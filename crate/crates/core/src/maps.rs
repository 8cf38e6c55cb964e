//! Ring homomorphisms between the implemented rings: identities and
//! inclusions, Frobenius powers, Tits endomorphisms, variable
//! substitutions, finite-field morphisms, product maps, and composites.
//!
//! Maps are small description objects applied pointwise; all constructors
//! validate source/target compatibility. Pointwise properties (being a
//! homomorphism, commuting squares) are checked exhaustively on finite
//! carriers and on generators plus samples otherwise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{RatVal, Ring, RingKind, RingRef, Value};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    pub source: RingRef,
    pub target: RingRef,
    kind: MapKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Identity on representations; also the inclusion of a marked
    /// subfield into its ambient field.
    Identity,
    /// `x ↦ x^(p^e)`.
    FrobPow(u32),
    /// The Tits endomorphism `x ↦ x^(p^((h+1)/2))` of `F_(p^h)`, `h` odd.
    Tits,
    /// `t ↦ u(t)` on a rational function field.
    VarSub(RatVal),
    /// The canonical map from the prime field, `n·1 ↦ n·1`.
    FromPrime,
    /// Finite-field morphism sending the generator to the packed value.
    FinGen(u64),
    /// Product-to-product map: each output component selects a source
    /// component and applies a map to it.
    ProductMap {
        first: (Side, Box<RingMap>),
        second: (Side, Box<RingMap>),
    },
    /// `Compose(f, g)` applies `f` first, then `g`.
    Compose(Box<RingMap>, Box<RingMap>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn ambient_eq(a: &Ring, b: &Ring) -> bool {
    match (a.kind(), b.kind()) {
        (
            RingKind::RationalFunction { p: pa, .. },
            RingKind::RationalFunction { p: pb, .. },
        ) => pa == pb,
        _ => a == b,
    }
}

impl RingMap {
    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn identity(ring: RingRef) -> RingMap {
        RingMap {
            source: ring.clone(),
            target: ring,
            kind: MapKind::Identity,
        }
    }

    /// The inclusion of a marked subfield into its ambient field (or any
    /// identity-on-representation map whose image provably lies in the
    /// target).
    pub fn inclusion(source: RingRef, target: RingRef) -> Result<RingMap> {
        if !ambient_eq(&source, &target) {
            return Err(Error::RingMismatch(format!(
                "no inclusion {source} -> {target}"
            )));
        }
        if target.is_pth_power_subfield() && !source.is_pth_power_subfield() {
            return Err(Error::RingMismatch(
                "the ambient field does not include into the subfield".into(),
            ));
        }
        Ok(RingMap {
            source,
            target,
            kind: MapKind::Identity,
        })
    }

    pub fn frobenius(ring: RingRef) -> RingMap {
        RingMap {
            source: ring.clone(),
            target: ring,
            kind: MapKind::FrobPow(1),
        }
    }

    /// `x ↦ x^(p^e)` from `source` into `target` (carriers must agree up
    /// to the subfield marker, and the image must land in the target).
    pub fn frobenius_power(source: RingRef, target: RingRef, e: u32) -> Result<RingMap> {
        if !ambient_eq(&source, &target) {
            return Err(Error::RingMismatch(format!(
                "frobenius power needs matching carriers, got {source} and {target}"
            )));
        }
        if target.is_pth_power_subfield() && !source.is_pth_power_subfield() && e == 0 {
            return Err(Error::RingMismatch(
                "identity does not map the ambient field into the subfield".into(),
            ));
        }
        Ok(RingMap {
            source,
            target,
            kind: MapKind::FrobPow(e),
        })
    }

    /// The Tits endomorphism of a finite field `F_(p^h)` with `h` odd;
    /// satisfies `σ∘σ = frobenius`. For the prime field this is the
    /// identity map.
    pub fn tits(ring: RingRef) -> Result<RingMap> {
        match ring.finite_data() {
            Some(fq) if fq.h % 2 == 1 => {
                let kind = if fq.h == 1 {
                    MapKind::Identity
                } else {
                    MapKind::Tits
                };
                Ok(RingMap {
                    source: ring.clone(),
                    target: ring,
                    kind,
                })
            }
            Some(fq) => Err(Error::NoTitsEndomorphism(format!(
                "F_{{{}^{}}} has even degree",
                fq.p, fq.h
            ))),
            None => Err(Error::NoTitsEndomorphism(format!(
                "{ring} is not a finite field"
            ))),
        }
    }

    /// `t ↦ u(t)` with coefficientwise Frobenius power `e` on `F_p(t)`.
    pub fn variable_substitution(ring: RingRef, u: Value, e: u32) -> Result<RingMap> {
        let rat = match (&u, ring.kind()) {
            (Value::Rat(r), RingKind::RationalFunction { pth_powers: false, .. }) => r,
            _ => return Err(Error::NotARationalFunction),
        };
        if rat.num.degree().unwrap_or(0) == 0 && rat.den.is_one() {
            return Err(Error::InvalidArgument(
                "substitution by a constant is not a field endomorphism".into(),
            ));
        }
        let sub = RingMap {
            source: ring.clone(),
            target: ring.clone(),
            kind: MapKind::VarSub((**rat).clone()),
        };
        if e == 0 {
            return Ok(sub);
        }
        // Coefficients live in the prime field, where any Frobenius power
        // is the identity; kept for interface completeness.
        Ok(sub)
    }

    pub fn from_prime(source: RingRef, target: RingRef) -> Result<RingMap> {
        match source.finite_data() {
            Some(fq) if fq.h == 1 && fq.p == target.characteristic() => Ok(RingMap {
                source,
                target,
                kind: MapKind::FromPrime,
            }),
            _ => Err(Error::RingMismatch(format!(
                "{source} is not the prime field of {target}"
            ))),
        }
    }

    /// Finite-field morphism determined by the image of the generator.
    pub fn finite_generator_image(source: RingRef, target: RingRef, image: u64) -> Result<RingMap> {
        let (sfq, tfq) = match (source.finite_data(), target.finite_data()) {
            (Some(a), Some(b)) if a.p == b.p => (a, b),
            _ => {
                return Err(Error::RingMismatch(
                    "generator-image maps need finite fields of equal characteristic".into(),
                ))
            }
        };
        // The image must be a root of the source modulus in the target.
        let tgt = target.clone();
        let img = Value::Fin(image);
        let mut acc = tgt.zero();
        for &c in sfq.modulus.coeffs().iter().rev() {
            acc = tgt.mul(&acc, &img);
            acc = tgt.add(&acc, &tgt.of_u64(c));
        }
        if !tgt.is_zero(&acc) {
            return Err(Error::RingMismatch(
                "image is not a root of the source modulus".into(),
            ));
        }
        let _ = tfq;
        Ok(RingMap {
            source,
            target,
            kind: MapKind::FinGen(image),
        })
    }

    /// All embeddings of one finite field into another, in deterministic
    /// order of the packed generator image. Empty when none exist.
    pub fn finite_embeddings(source: RingRef, target: RingRef) -> Vec<RingMap> {
        let q = match target.order() {
            Some(q) => q,
            None => return Vec::new(),
        };
        if source.finite_data().is_none()
            || source.characteristic() != target.characteristic()
        {
            return Vec::new();
        }
        (0..q)
            .filter_map(|v| {
                RingMap::finite_generator_image(source.clone(), target.clone(), v).ok()
            })
            .collect()
    }

    /// The canonical embedding (least generator image).
    pub fn canonical_embedding(source: RingRef, target: RingRef) -> Result<RingMap> {
        RingMap::finite_embeddings(source.clone(), target.clone())
            .into_iter()
            .next()
            .ok_or(Error::NoFieldMorphism(format!("{source} -> {target}")))
    }

    /// The Galois automorphisms `x ↦ x^(p^j)`, `j = 0..h`, of a finite
    /// field.
    pub fn galois_automorphisms(ring: RingRef) -> Result<Vec<RingMap>> {
        let h = ring
            .finite_data()
            .ok_or_else(|| Error::RingMismatch(format!("{ring} is not a finite field")))?
            .h;
        Ok((0..h as u32)
            .map(|j| RingMap {
                source: ring.clone(),
                target: ring.clone(),
                kind: MapKind::FrobPow(j),
            })
            .collect())
    }

    pub fn product_map(
        source: RingRef,
        target: RingRef,
        first: (Side, RingMap),
        second: (Side, RingMap),
    ) -> Result<RingMap> {
        let (s1, s2) = match source.kind() {
            RingKind::Product(a, b) => (a.clone(), b.clone()),
            _ => return Err(Error::RingMismatch("source is not a product".into())),
        };
        let (t1, t2) = match target.kind() {
            RingKind::Product(a, b) => (a.clone(), b.clone()),
            _ => return Err(Error::RingMismatch("target is not a product".into())),
        };
        let pick = |side: Side| match side {
            Side::Left => s1.clone(),
            Side::Right => s2.clone(),
        };
        if *first.1.source != *pick(first.0) || *first.1.target != *t1 {
            return Err(Error::RingMismatch("first component map mismatch".into()));
        }
        if *second.1.source != *pick(second.0) || *second.1.target != *t2 {
            return Err(Error::RingMismatch("second component map mismatch".into()));
        }
        Ok(RingMap {
            source,
            target,
            kind: MapKind::ProductMap {
                first: (first.0, Box::new(first.1)),
                second: (second.0, Box::new(second.1)),
            },
        })
    }

    /// The twister of `twist(R)`: `(x, y) ↦ (y^p, x)`.
    pub fn twist_twister(product: RingRef) -> Result<RingMap> {
        let (a, b) = match product.kind() {
            RingKind::Product(a, b) if a == b => (a.clone(), b.clone()),
            _ => {
                return Err(Error::RingMismatch(
                    "twist twister needs a square product R x R".into(),
                ))
            }
        };
        RingMap::product_map(
            product.clone(),
            product,
            (Side::Right, RingMap::frobenius(b)),
            (Side::Left, RingMap::identity(a)),
        )
    }

    /// Composition, applying `self` first and `next` second.
    pub fn then(&self, next: &RingMap) -> Result<RingMap> {
        if !ambient_eq(&self.target, &next.source) || {
            // A marked value set must be a subset of the next source.
            next.source.is_pth_power_subfield() && !self.target.is_pth_power_subfield()
        } {
            return Err(Error::RingMismatch(format!(
                "cannot compose: {} -> {} then {} -> {}",
                self.source, self.target, next.source, next.target
            )));
        }
        // Identity factors disappear.
        if matches!(self.kind, MapKind::Identity) {
            return Ok(RingMap {
                source: self.source.clone(),
                target: next.target.clone(),
                kind: next.kind.clone(),
            });
        }
        if matches!(next.kind, MapKind::Identity) {
            return Ok(RingMap {
                source: self.source.clone(),
                target: next.target.clone(),
                kind: self.kind.clone(),
            });
        }
        Ok(RingMap {
            source: self.source.clone(),
            target: next.target.clone(),
            kind: MapKind::Compose(Box::new(self.clone()), Box::new(next.clone())),
        })
    }

    pub fn is_endo(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, v: &Value) -> Value {
        match &self.kind {
            MapKind::Identity => v.clone(),
            MapKind::FrobPow(e) => {
                let mut out = v.clone();
                for _ in 0..*e {
                    out = self.source.frobenius(&out);
                }
                out
            }
            MapKind::Tits => {
                let fq = self.source.finite_data().expect("tits is on finite fields");
                let reps = (fq.h as u32).div_ceil(2);
                let mut out = v.clone();
                for _ in 0..reps {
                    out = self.source.frobenius(&out);
                }
                out
            }
            MapKind::VarSub(u) => {
                let rat = match v {
                    Value::Rat(r) => r,
                    _ => panic!("value does not belong to this ring"),
                };
                let tgt = &self.target;
                let uval = Value::Rat(Box::new(u.clone()));
                let eval_poly = |f: &Poly| -> Value {
                    let mut acc = tgt.zero();
                    for &c in f.coeffs().iter().rev() {
                        acc = tgt.mul(&acc, &uval);
                        acc = tgt.add(&acc, &tgt.of_u64(c));
                    }
                    acc
                };
                let num = eval_poly(&rat.num);
                let den = eval_poly(&rat.den);
                let den_inv = tgt
                    .inv(&den)
                    .expect("nonconstant substitution keeps the denominator nonzero");
                tgt.mul(&num, &den_inv)
            }
            MapKind::FromPrime => match v {
                Value::Fin(n) => self.target.of_u64(*n),
                _ => panic!("value does not belong to this ring"),
            },
            MapKind::FinGen(image) => {
                let fq = self.source.finite_data().expect("finite source");
                let coeffs = Poly::from_packed(
                    match v {
                        Value::Fin(x) => *x,
                        _ => panic!("value does not belong to this ring"),
                    },
                    fq.p,
                );
                let img = Value::Fin(*image);
                let tgt = &self.target;
                let mut acc = tgt.zero();
                for &c in coeffs.coeffs().iter().rev() {
                    acc = tgt.mul(&acc, &img);
                    acc = tgt.add(&acc, &tgt.of_u64(c));
                }
                acc
            }
            MapKind::ProductMap { first, second } => {
                let (x, y) = match v {
                    Value::Pair(p) => (&p.0, &p.1),
                    _ => panic!("value does not belong to this ring"),
                };
                let pick = |side: Side| match side {
                    Side::Left => x,
                    Side::Right => y,
                };
                Value::Pair(Box::new((
                    first.1.apply(pick(first.0)),
                    second.1.apply(pick(second.0)),
                )))
            }
            MapKind::Compose(f, g) => g.apply(&f.apply(v)),
        }
    }

    /// Deterministic test points of the source ring: the full carrier when
    /// finite, otherwise ring generators (constants and the variable)
    /// plus `samples` seeded random elements.
    pub fn test_points(ring: &RingRef, samples: usize) -> Vec<Value> {
        test_points(ring, samples)
    }

    /// Pointwise equality with another map on the shared source: exhaustive
    /// for finite carriers, generators plus `samples` random points
    /// otherwise.
    pub fn equal_pointwise(&self, other: &RingMap, samples: usize) -> bool {
        if !ambient_eq(&self.source, &other.source) {
            return false;
        }
        test_points(&self.source, samples)
            .iter()
            .all(|v| self.apply(v) == other.apply(v))
    }

    /// Checks the ring homomorphism axioms pointwise on pairs of test
    /// points. Returns a counterexample pair on failure.
    pub fn check_hom(&self, samples: usize) -> std::result::Result<(), (Value, Value)> {
        let pts = test_points(&self.source, samples);
        let src = &self.source;
        let tgt = &self.target;
        if self.apply(&src.one()) != tgt.one() {
            return Err((src.one(), src.one()));
        }
        for a in &pts {
            for b in &pts {
                let sum = self.apply(&src.add(a, b));
                if sum != tgt.add(&self.apply(a), &self.apply(b)) {
                    return Err((a.clone(), b.clone()));
                }
                let prod = self.apply(&src.mul(a, b));
                if prod != tgt.mul(&self.apply(a), &self.apply(b)) {
                    return Err((a.clone(), b.clone()));
                }
            }
        }
        Ok(())
    }

    /// Whether the map is bijective; decidable only on finite carriers.
    pub fn is_bijective(&self) -> Option<bool> {
        let elems = self.source.enumerate()?;
        let t_order = self.target.order()?;
        let mut images: Vec<Value> = elems.iter().map(|v| self.apply(v)).collect();
        images.sort();
        images.dedup();
        Some(images.len() as u64 == t_order)
    }

    /// A short human/machine-readable description of the map shape.
    pub fn describe(&self) -> String {
        match &self.kind {
            MapKind::Identity => "id".into(),
            MapKind::FrobPow(0) => "id".into(),
            MapKind::FrobPow(1) => "fr".into(),
            MapKind::FrobPow(e) => format!("fr^{e}"),
            MapKind::Tits => "tits".into(),
            MapKind::VarSub(u) => format!(
                "t->({})/({})",
                crate::fields::render_poly(&u.num, "t"),
                crate::fields::render_poly(&u.den, "t")
            ),
            MapKind::FromPrime => "from-prime".into(),
            MapKind::FinGen(v) => format!("g->{v}"),
            MapKind::ProductMap { first, second } => {
                let side = |s: &Side| match s {
                    Side::Left => "x",
                    Side::Right => "y",
                };
                format!(
                    "(x,y)->({}({}),{}({}))",
                    first.1.describe(),
                    side(&first.0),
                    second.1.describe(),
                    side(&second.0)
                )
            }
            MapKind::Compose(f, g) => format!("{} then {}", f.describe(), g.describe()),
        }
    }
}

pub(crate) fn test_points(ring: &RingRef, samples: usize) -> Vec<Value> {
    if let Some(all) = ring.enumerate() {
        return all;
    }
    let mut pts = Vec::new();
    let p = ring.characteristic();
    for n in 0..p.min(8) {
        pts.push(ring.of_u64(n));
    }
    if let Ok(t) = ring.variable() {
        pts.push(t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0b01);
    for _ in 0..samples {
        pts.push(ring.sample(&mut rng, 4));
    }
    pts.sort();
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Ring;

    #[test]
    fn tits_squares_to_frobenius_on_f8_and_f27() {
        for (p, h) in [(2u64, 3usize), (3, 3), (2, 1), (3, 1)] {
            let k = Ring::finite_field(p, h, None).unwrap();
            let sigma = RingMap::tits(k.clone()).unwrap();
            let fr = RingMap::frobenius(k.clone());
            let squared = sigma.then(&sigma).unwrap();
            assert!(squared.equal_pointwise(&fr, 0), "p={p}, h={h}");
        }
    }

    #[test]
    fn tits_rejected_on_even_degree_and_function_fields() {
        let f4 = Ring::finite_field(2, 2, None).unwrap();
        assert!(RingMap::tits(f4).is_err());
        let f2t = Ring::rational_function(2).unwrap();
        assert!(RingMap::tits(f2t).is_err());
    }

    #[test]
    fn tits_on_f8_is_fourth_power() {
        let k = Ring::finite_field(2, 3, None).unwrap();
        let sigma = RingMap::tits(k.clone()).unwrap();
        for v in k.enumerate().unwrap() {
            assert_eq!(sigma.apply(&v), k.pow(&v, 4));
        }
    }

    #[test]
    fn galois_group_of_f8_has_three_elements() {
        let k = Ring::finite_field(2, 3, None).unwrap();
        let autos = RingMap::galois_automorphisms(k).unwrap();
        assert_eq!(autos.len(), 3);
        for a in &autos {
            assert!(a.check_hom(0).is_ok());
            assert_eq!(a.is_bijective(), Some(true));
        }
    }

    #[test]
    fn embeddings_f2_into_f8() {
        let f2 = Ring::finite_field(2, 1, None).unwrap();
        let f8 = Ring::finite_field(2, 3, None).unwrap();
        let embs = RingMap::finite_embeddings(f2, f8);
        // The modulus of F_2 is x, whose only root is 0.
        assert_eq!(embs.len(), 1);
        assert!(embs[0].check_hom(0).is_ok());
    }

    #[test]
    fn no_morphism_f8_to_f2() {
        let f2 = Ring::finite_field(2, 1, None).unwrap();
        let f8 = Ring::finite_field(2, 3, None).unwrap();
        assert!(RingMap::finite_embeddings(f8, f2).is_empty());
    }

    #[test]
    fn frobenius_lands_in_subfield() {
        let amb = Ring::rational_function(2).unwrap();
        let sub = Ring::rational_function_subfield(2).unwrap();
        let fr = RingMap::frobenius_power(amb.clone(), sub.clone(), 1).unwrap();
        let t = amb.variable().unwrap();
        let img = fr.apply(&t);
        assert!(sub.contains(&img));
        // The identity does not land in the marked subfield.
        assert!(RingMap::frobenius_power(amb, sub, 0).is_err());
    }

    #[test]
    fn variable_substitution_is_a_hom() {
        let k = Ring::rational_function(3).unwrap();
        let u = k
            .from_rational(Poly::new(vec![0, 0, 0, 1], 3), Poly::one())
            .unwrap(); // t^3
        let sub = RingMap::variable_substitution(k.clone(), u, 0).unwrap();
        assert!(sub.check_hom(12).is_ok());
        let fr = RingMap::frobenius(k);
        assert!(sub.equal_pointwise(&fr, 40));
    }
}
