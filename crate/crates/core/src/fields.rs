//! Exact arithmetic for the base rings of characteristic `p`: prime fields,
//! finite extension fields, rational function fields, and binary products.
//!
//! Every element has a canonical representation, so two elements are equal
//! as ring elements iff their encodings are byte-identical:
//! * finite field elements are coefficient vectors of degree `< h`, packed
//!   little-endian in base `p` (trailing zeros trimmed),
//! * rational functions are stored in lowest terms with a monic denominator
//!   (zero is `0/1`),
//! * product elements are pairs of canonical components.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{inv_mod, is_prime, least_irreducible, Poly};

/// Shared handle to a ring descriptor. Cheap to clone; equality is
/// structural on the descriptor.
pub type RingRef = Arc<Ring>;

/// Largest finite field order for which full lookup tables are built.
const TABLE_MAX: u64 = 256;

#[derive(Debug)]
pub struct Ring {
    kind: RingKind,
}

#[derive(Debug)]
pub enum RingKind {
    Finite(FqData),
    /// `F_p(t)`; when `pth_powers` is set this is the subfield `F_p(t^p)`,
    /// whose elements are represented inside `F_p(t)` (they are exactly the
    /// elements with vanishing formal derivative).
    RationalFunction { p: u64, pth_powers: bool },
    Product(RingRef, RingRef),
}

#[derive(Debug)]
pub struct FqData {
    pub p: u64,
    pub h: usize,
    pub modulus: Poly,
    tables: Option<FqTables>,
}

#[derive(Debug)]
struct FqTables {
    q: u64,
    add: Vec<u64>,
    mul: Vec<u64>,
    inv: Vec<u64>,
    frob: Vec<u64>,
}

/// Borrowed table view of a small finite field for hot loops working on
/// packed `u64` element indices.
#[derive(Clone, Copy)]
pub struct FinOps<'a> {
    pub q: u64,
    add: &'a [u64],
    mul: &'a [u64],
}

impl FinOps<'_> {
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.q + b) as usize]
    }
}

/// A canonical ring element value. The owning ring is carried separately
/// (see [`Element`]); matrix-heavy code passes the ring as context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Fin(u64),
    Rat(Box<RatVal>),
    Pair(Box<(Value, Value)>),
}

/// A rational function in lowest terms; the denominator is monic and
/// coprime to the numerator, zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVal {
    pub num: Poly,
    pub den: Poly,
}

impl RatVal {
    pub fn normalized(num: Poly, den: Poly, p: u64) -> Result<RatVal> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatVal {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den, p);
        let num = num.div_rem(&g, p)?.0;
        let den = den.div_rem(&g, p)?.0;
        let c = inv_mod(den.leading_coeff(), p);
        Ok(RatVal {
            num: num.scale(c, p),
            den: den.scale(c, p),
        })
    }
}

impl Ring {
    // ---- constructors -------------------------------------------------

    /// The finite field `F_{p^h}`. If no modulus is supplied, the
    /// deterministically least irreducible monic polynomial of degree `h`
    /// is used, so encodings are reproducible across runs and platforms.
    pub fn finite_field(p: u64, h: usize, modulus: Option<Vec<u64>>) -> Result<RingRef> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        let modulus = match modulus {
            Some(coeffs) => {
                let f = Poly::new(coeffs, p);
                if f.degree() != Some(h) {
                    return Err(Error::DegreeMismatch {
                        got: f.degree().map_or(0, |d| d),
                        want: h,
                    });
                }
                if !f.is_monic() {
                    return Err(Error::NonMonicModulus);
                }
                if !f.is_irreducible(p) {
                    return Err(Error::ReducibleModulus);
                }
                f
            }
            None => least_irreducible(p, h),
        };
        let q = p.checked_pow(h as u32).filter(|&q| q < u64::MAX / 2);
        let tables = match q {
            Some(q) if q <= TABLE_MAX => Some(FqTables::build(p, h, &modulus, q)),
            _ => None,
        };
        Ok(Arc::new(Ring {
            kind: RingKind::Finite(FqData {
                p,
                h,
                modulus,
                tables,
            }),
        }))
    }

    /// The rational function field `F_p(t)`.
    pub fn rational_function(p: u64) -> Result<RingRef> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Arc::new(Ring {
            kind: RingKind::RationalFunction {
                p,
                pth_powers: false,
            },
        }))
    }

    /// The subfield `F_p(t^p)` of `F_p(t)`, represented inside `F_p(t)`.
    pub fn rational_function_subfield(p: u64) -> Result<RingRef> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Arc::new(Ring {
            kind: RingKind::RationalFunction {
                p,
                pth_powers: true,
            },
        }))
    }

    pub fn product(left: RingRef, right: RingRef) -> Result<RingRef> {
        if left.characteristic() != right.characteristic() {
            return Err(Error::InvalidArgument(
                "product components must share the characteristic".into(),
            ));
        }
        Ok(Arc::new(Ring {
            kind: RingKind::Product(left, right),
        }))
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            RingKind::Finite(fq) => fq.p,
            RingKind::RationalFunction { p, .. } => *p,
            RingKind::Product(a, _) => a.characteristic(),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, RingKind::Product(..))
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            RingKind::Finite(fq) => fq.p.checked_pow(fq.h as u32),
            RingKind::RationalFunction { .. } => None,
            RingKind::Product(a, b) => Some(a.order()? * b.order()?),
        }
    }

    pub fn finite_data(&self) -> Option<&FqData> {
        match &self.kind {
            RingKind::Finite(fq) => Some(fq),
            _ => None,
        }
    }

    /// Table view for packed-index arithmetic, available on small finite
    /// fields.
    pub fn fin_ops(&self) -> Option<FinOps<'_>> {
        match &self.kind {
            RingKind::Finite(fq) => fq.tables.as_ref().map(|t| FinOps {
                q: t.q,
                add: &t.add,
                mul: &t.mul,
            }),
            _ => None,
        }
    }

    /// For `F_p(t)` and `F_p(t^p)`: whether this handle denotes the marked
    /// `p`-th-power subfield.
    pub fn is_pth_power_subfield(&self) -> bool {
        matches!(
            self.kind,
            RingKind::RationalFunction {
                pth_powers: true,
                ..
            }
        )
    }

    /// Drops or adds the subfield marker on a rational function field.
    pub fn ambient_function_field(&self) -> Option<RingRef> {
        match &self.kind {
            RingKind::RationalFunction { p, .. } => Some(Arc::new(Ring {
                kind: RingKind::RationalFunction {
                    p: *p,
                    pth_powers: false,
                },
            })),
            _ => None,
        }
    }

    // ---- element construction -----------------------------------------

    pub fn zero(&self) -> Value {
        match &self.kind {
            RingKind::Finite(_) => Value::Fin(0),
            RingKind::RationalFunction { .. } => Value::Rat(Box::new(RatVal {
                num: Poly::zero(),
                den: Poly::one(),
            })),
            RingKind::Product(a, b) => Value::Pair(Box::new((a.zero(), b.zero()))),
        }
    }

    pub fn one(&self) -> Value {
        match &self.kind {
            RingKind::Finite(_) => Value::Fin(1),
            RingKind::RationalFunction { .. } => Value::Rat(Box::new(RatVal {
                num: Poly::one(),
                den: Poly::one(),
            })),
            RingKind::Product(a, b) => Value::Pair(Box::new((a.one(), b.one()))),
        }
    }

    /// `n · 1` in this ring.
    pub fn of_u64(&self, n: u64) -> Value {
        let p = self.characteristic();
        match &self.kind {
            RingKind::Finite(_) => Value::Fin(n % p),
            RingKind::RationalFunction { .. } => Value::Rat(Box::new(RatVal {
                num: Poly::constant(n % p, p),
                den: Poly::one(),
            })),
            RingKind::Product(a, b) => Value::Pair(Box::new((a.of_u64(n), b.of_u64(n)))),
        }
    }

    /// The variable `t` of a rational function field.
    pub fn variable(&self) -> Result<Value> {
        match &self.kind {
            RingKind::RationalFunction { pth_powers, .. } => {
                if *pth_powers {
                    return Err(Error::InvalidArgument(
                        "t itself is not an element of F_p(t^p)".into(),
                    ));
                }
                Ok(Value::Rat(Box::new(RatVal {
                    num: Poly::x(),
                    den: Poly::one(),
                })))
            }
            _ => Err(Error::NotARationalFunction),
        }
    }

    pub fn from_rational(&self, num: Poly, den: Poly) -> Result<Value> {
        match &self.kind {
            RingKind::RationalFunction { p, pth_powers } => {
                let r = RatVal::normalized(num, den, *p)?;
                if *pth_powers && !rat_derivative_is_zero(&r, *p) {
                    return Err(Error::RingMismatch(
                        "element is not in the p-th-power subfield".into(),
                    ));
                }
                Ok(Value::Rat(Box::new(r)))
            }
            _ => Err(Error::NotARationalFunction),
        }
    }

    pub fn pair(&self, left: Value, right: Value) -> Value {
        debug_assert!(matches!(self.kind, RingKind::Product(..)));
        Value::Pair(Box::new((left, right)))
    }

    // ---- arithmetic ----------------------------------------------------

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&self.kind, a, b) {
            (RingKind::Finite(fq), Value::Fin(x), Value::Fin(y)) => Value::Fin(fq.add(*x, *y)),
            (RingKind::RationalFunction { p, .. }, Value::Rat(x), Value::Rat(y)) => {
                let num = x
                    .num
                    .mul(&y.den, *p)
                    .add(&y.num.mul(&x.den, *p), *p);
                let den = x.den.mul(&y.den, *p);
                Value::Rat(Box::new(RatVal::normalized(num, den, *p).unwrap()))
            }
            (RingKind::Product(ra, rb), Value::Pair(x), Value::Pair(y)) => Value::Pair(Box::new((
                ra.add(&x.0, &y.0),
                rb.add(&x.1, &y.1),
            ))),
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (&self.kind, a) {
            (RingKind::Finite(fq), Value::Fin(x)) => Value::Fin(fq.neg(*x)),
            (RingKind::RationalFunction { p, .. }, Value::Rat(x)) => Value::Rat(Box::new(RatVal {
                num: x.num.neg(*p),
                den: x.den.clone(),
            })),
            (RingKind::Product(ra, rb), Value::Pair(x)) => {
                Value::Pair(Box::new((ra.neg(&x.0), rb.neg(&x.1))))
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&self.kind, a, b) {
            (RingKind::Finite(fq), Value::Fin(x), Value::Fin(y)) => Value::Fin(fq.mul(*x, *y)),
            (RingKind::RationalFunction { p, .. }, Value::Rat(x), Value::Rat(y)) => {
                let num = x.num.mul(&y.num, *p);
                let den = x.den.mul(&y.den, *p);
                Value::Rat(Box::new(RatVal::normalized(num, den, *p).unwrap()))
            }
            (RingKind::Product(ra, rb), Value::Pair(x), Value::Pair(y)) => Value::Pair(Box::new((
                ra.mul(&x.0, &y.0),
                rb.mul(&x.1, &y.1),
            ))),
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn is_zero(&self, a: &Value) -> bool {
        *a == self.zero()
    }

    pub fn is_unit(&self, a: &Value) -> bool {
        match (&self.kind, a) {
            (RingKind::Finite(_), Value::Fin(x)) => *x != 0,
            (RingKind::RationalFunction { .. }, Value::Rat(x)) => !x.num.is_zero(),
            (RingKind::Product(ra, rb), Value::Pair(x)) => {
                ra.is_unit(&x.0) && rb.is_unit(&x.1)
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn inv(&self, a: &Value) -> Result<Value> {
        match (&self.kind, a) {
            (RingKind::Finite(fq), Value::Fin(x)) => fq.inv(*x).map(Value::Fin),
            (RingKind::RationalFunction { p, .. }, Value::Rat(x)) => {
                if x.num.is_zero() {
                    return Err(Error::NotAUnit);
                }
                Ok(Value::Rat(Box::new(RatVal::normalized(
                    x.den.clone(),
                    x.num.clone(),
                    *p,
                )?)))
            }
            (RingKind::Product(ra, rb), Value::Pair(x)) => Ok(Value::Pair(Box::new((
                ra.inv(&x.0)?,
                rb.inv(&x.1)?,
            )))),
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn pow(&self, a: &Value, mut e: u64) -> Value {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Raises to an integer power, using the inverse for negative
    /// exponents; errors if the base is not a unit in that case.
    pub fn pow_i64(&self, a: &Value, e: i64) -> Result<Value> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, (-e) as u64))
        }
    }

    /// The Frobenius `x ↦ x^p`, a ring endomorphism.
    pub fn frobenius(&self, a: &Value) -> Value {
        match (&self.kind, a) {
            (RingKind::Finite(fq), Value::Fin(x)) => Value::Fin(fq.frob(*x)),
            (RingKind::RationalFunction { p, .. }, Value::Rat(x)) => {
                // (N/D)^p stays in lowest terms with a monic denominator.
                Value::Rat(Box::new(RatVal {
                    num: poly_pow(&x.num, *p, *p),
                    den: poly_pow(&x.den, *p, *p),
                }))
            }
            (RingKind::Product(ra, rb), Value::Pair(x)) => Value::Pair(Box::new((
                ra.frobenius(&x.0),
                rb.frobenius(&x.1),
            ))),
            _ => panic!("value does not belong to this ring"),
        }
    }

    // ---- enumeration, sampling, membership ------------------------------

    /// All elements, in a deterministic order, when the ring is finite.
    pub fn enumerate(&self) -> Option<Vec<Value>> {
        match &self.kind {
            RingKind::Finite(fq) => {
                let q = fq.p.checked_pow(fq.h as u32)?;
                Some((0..q).map(Value::Fin).collect())
            }
            RingKind::RationalFunction { .. } => None,
            RingKind::Product(a, b) => {
                let ea = a.enumerate()?;
                let eb = b.enumerate()?;
                let mut out = Vec::with_capacity(ea.len() * eb.len());
                for x in &ea {
                    for y in &eb {
                        out.push(Value::Pair(Box::new((x.clone(), y.clone()))));
                    }
                }
                Some(out)
            }
        }
    }

    /// Units of a finite ring, in enumeration order.
    pub fn enumerate_units(&self) -> Option<Vec<Value>> {
        Some(
            self.enumerate()?
                .into_iter()
                .filter(|v| self.is_unit(v))
                .collect(),
        )
    }

    /// A uniformly random element for finite rings; for rational function
    /// fields, numerator and denominator of degree at most `degree_bound`
    /// with a nonzero denominator.
    pub fn sample<R: Rng>(&self, rng: &mut R, degree_bound: usize) -> Value {
        match &self.kind {
            RingKind::Finite(fq) => {
                let q = fq.p.pow(fq.h as u32);
                Value::Fin(rng.gen_range(0..q))
            }
            RingKind::RationalFunction { p, pth_powers } => {
                let rand_poly = |rng: &mut R| -> Poly {
                    let deg = rng.gen_range(0..=degree_bound);
                    let coeffs = (0..=deg).map(|_| rng.gen_range(0..*p)).collect();
                    Poly::new(coeffs, *p)
                };
                let num = rand_poly(rng);
                let den = loop {
                    let d = rand_poly(rng);
                    if !d.is_zero() {
                        break d;
                    }
                };
                let mut r = RatVal::normalized(num, den, *p).unwrap();
                if *pth_powers {
                    // Sample g(s) and substitute s = t^p.
                    r = RatVal {
                        num: inflate(&r.num, *p as usize, *p),
                        den: inflate(&r.den, *p as usize, *p),
                    };
                }
                Value::Rat(Box::new(r))
            }
            RingKind::Product(a, b) => Value::Pair(Box::new((
                a.sample(rng, degree_bound),
                b.sample(rng, degree_bound),
            ))),
        }
    }

    /// A random unit.
    pub fn sample_unit<R: Rng>(&self, rng: &mut R, degree_bound: usize) -> Value {
        loop {
            let v = self.sample(rng, degree_bound);
            if self.is_unit(&v) {
                return v;
            }
        }
    }

    /// Whether a rational function lies in the subfield `F_p(t^p)`,
    /// decided by the formal-derivative criterion: `F_p(t)/F_p(t^p)` is
    /// purely inseparable of degree `p` and the kernel of `d/dt` is exactly
    /// `F_p(t^p)`.
    pub fn in_pth_power_subfield(&self, a: &Value) -> Result<bool> {
        match (&self.kind, a) {
            (RingKind::RationalFunction { p, .. }, Value::Rat(x)) => {
                Ok(rat_derivative_is_zero(x, *p))
            }
            _ => Err(Error::NotARationalFunction),
        }
    }

    /// Membership of a value of the ambient ring in `self`, where `self`
    /// may be a marked subfield.
    pub fn contains(&self, a: &Value) -> bool {
        match (&self.kind, a) {
            (RingKind::RationalFunction { p, pth_powers }, Value::Rat(x)) => {
                !*pth_powers || rat_derivative_is_zero(x, *p)
            }
            (RingKind::Finite(_), Value::Fin(_)) => true,
            (RingKind::Product(..), Value::Pair(_)) => true,
            _ => false,
        }
    }

    // ---- encoding -------------------------------------------------------

    /// Canonical byte encoding: a one-byte kind tag, then length-prefixed
    /// little-endian coefficient lists (`u32` length, `u64` coefficients,
    /// constant term first). Pairs encode left then right.
    pub fn encode(&self, a: &Value) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(a, &mut out);
        out
    }

    pub fn encode_into(&self, a: &Value, out: &mut Vec<u8>) {
        match (&self.kind, a) {
            (RingKind::Finite(fq), Value::Fin(x)) => {
                out.push(b'F');
                encode_poly(&Poly::from_packed(*x, fq.p), out);
            }
            (RingKind::RationalFunction { .. }, Value::Rat(x)) => {
                out.push(b'R');
                encode_poly(&x.num, out);
                encode_poly(&x.den, out);
            }
            (RingKind::Product(ra, rb), Value::Pair(x)) => {
                out.push(b'P');
                ra.encode_into(&x.0, out);
                rb.encode_into(&x.1, out);
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<Value> {
        let mut pos = 0;
        let v = self.decode_from(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::InvalidArgument("trailing bytes in encoding".into()));
        }
        Ok(v)
    }

    fn decode_from(&self, bytes: &[u8], pos: &mut usize) -> Result<Value> {
        let tag = *bytes
            .get(*pos)
            .ok_or_else(|| Error::InvalidArgument("truncated encoding".into()))?;
        *pos += 1;
        match (&self.kind, tag) {
            (RingKind::Finite(fq), b'F') => {
                let poly = decode_poly(bytes, pos, fq.p)?;
                if poly.degree().is_some_and(|d| d >= fq.h) {
                    return Err(Error::InvalidArgument("coefficient vector too long".into()));
                }
                Ok(Value::Fin(poly.packed(fq.p)))
            }
            (RingKind::RationalFunction { p, .. }, b'R') => {
                let num = decode_poly(bytes, pos, *p)?;
                let den = decode_poly(bytes, pos, *p)?;
                let r = RatVal::normalized(num.clone(), den.clone(), *p)?;
                if r.num != num || r.den != den {
                    return Err(Error::InvalidArgument(
                        "rational function encoding is not canonical".into(),
                    ));
                }
                Ok(Value::Rat(Box::new(r)))
            }
            (RingKind::Product(ra, rb), b'P') => {
                let left = ra.decode_from(bytes, pos)?;
                let right = rb.decode_from(bytes, pos)?;
                Ok(Value::Pair(Box::new((left, right))))
            }
            _ => Err(Error::InvalidArgument("unexpected encoding tag".into())),
        }
    }

    // ---- rendering -------------------------------------------------------

    pub fn render(&self, a: &Value) -> String {
        match (&self.kind, a) {
            (RingKind::Finite(fq), Value::Fin(x)) => {
                if fq.h == 1 {
                    format!("{x}")
                } else {
                    render_poly(&Poly::from_packed(*x, fq.p), "g")
                }
            }
            (RingKind::RationalFunction { .. }, Value::Rat(x)) => {
                if x.den.is_one() {
                    render_poly(&x.num, "t")
                } else {
                    format!("({})/({})", render_poly(&x.num, "t"), render_poly(&x.den, "t"))
                }
            }
            (RingKind::Product(ra, rb), Value::Pair(x)) => {
                format!("({}, {})", ra.render(&x.0), rb.render(&x.1))
            }
            _ => panic!("value does not belong to this ring"),
        }
    }

    pub fn describe(&self) -> RingDescription {
        match &self.kind {
            RingKind::Finite(fq) => RingDescription {
                kind: "finite".into(),
                p: fq.p,
                degree: Some(fq.h),
                modulus: Some(fq.modulus.coeffs().to_vec()),
                subfield: None,
                components: None,
            },
            RingKind::RationalFunction { p, pth_powers } => RingDescription {
                kind: "rational-function".into(),
                p: *p,
                degree: None,
                modulus: None,
                subfield: pth_powers.then(|| "p-th powers of the variable".into()),
                components: None,
            },
            RingKind::Product(a, b) => RingDescription {
                kind: "product".into(),
                p: a.characteristic(),
                degree: None,
                modulus: None,
                subfield: None,
                components: Some(vec![a.describe(), b.describe()]),
            },
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (RingKind::Finite(a), RingKind::Finite(b)) => {
                a.p == b.p && a.h == b.h && a.modulus == b.modulus
            }
            (
                RingKind::RationalFunction {
                    p: pa,
                    pth_powers: ma,
                },
                RingKind::RationalFunction {
                    p: pb,
                    pth_powers: mb,
                },
            ) => pa == pb && ma == mb,
            (RingKind::Product(a1, a2), RingKind::Product(b1, b2)) => a1 == b1 && a2 == b2,
            _ => false,
        }
    }
}
impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Finite(fq) => {
                if fq.h == 1 {
                    write!(f, "F{}", fq.p)
                } else {
                    write!(f, "F{}", fq.p.pow(fq.h as u32))
                }
            }
            RingKind::RationalFunction { p, pth_powers } => {
                if *pth_powers {
                    write!(f, "F{p}(t^{p})")
                } else {
                    write!(f, "F{p}(t)")
                }
            }
            RingKind::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

/// JSON-facing ring description.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RingDescription {
    pub kind: String,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subfield: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<RingDescription>>,
}

// ---- finite field internals ---------------------------------------------

impl FqData {
    fn q(&self) -> u64 {
        self.p.pow(self.h as u32)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if self.h == 1 {
            return (a + b) % self.p;
        }
        // Coefficientwise addition in base p.
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u64) -> u64 {
        if self.h == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.mul[(a * t.q + b) as usize];
        }
        if self.h == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let pa = Poly::from_packed(a, self.p);
        let pb = Poly::from_packed(b, self.p);
        pa.mul(&pb, self.p)
            .div_rem(&self.modulus, self.p)
            .unwrap()
            .1
            .packed(self.p)
    }

    fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::NotAUnit);
        }
        if let Some(t) = &self.tables {
            return Ok(t.inv[a as usize]);
        }
        if self.h == 1 {
            return Ok(inv_mod(a, self.p));
        }
        // a^(q-2)
        let mut e = self.q() - 2;
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    fn frob(&self, a: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.frob[a as usize];
        }
        let mut e = self.p;
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl FqTables {
    fn build(p: u64, _h: usize, modulus: &Poly, q: u64) -> FqTables {
        let mut add = vec![0u64; (q * q) as usize];
        let mut mul = vec![0u64; (q * q) as usize];
        for a in 0..q {
            let pa = Poly::from_packed(a, p);
            for b in a..q {
                let pb = Poly::from_packed(b, p);
                let prod = pa.mul(&pb, p).div_rem(modulus, p).unwrap().1.packed(p);
                mul[(a * q + b) as usize] = prod;
                mul[(b * q + a) as usize] = prod;
                let sum = pa.add(&pb, p).packed(p);
                add[(a * q + b) as usize] = sum;
                add[(b * q + a) as usize] = sum;
            }
        }
        let mut inv = vec![0u64; q as usize];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }
        let mut frob = vec![0u64; q as usize];
        for a in 0..q {
            let mut acc = 1u64;
            for _ in 0..p {
                acc = mul[(acc * q + a) as usize];
            }
            frob[a as usize] = acc;
        }
        FqTables { q, add, mul, inv, frob }
    }
}

// ---- helpers ---------------------------------------------------------------

fn poly_pow(f: &Poly, e: u64, p: u64) -> Poly {
    let mut acc = Poly::one();
    let mut base = f.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base, p);
        }
        base = base.mul(&base, p);
        e >>= 1;
    }
    acc
}

/// Substitutes `t^k` for `t`: spreads coefficients `k` apart.
fn inflate(f: &Poly, k: usize, p: u64) -> Poly {
    if f.is_zero() {
        return Poly::zero();
    }
    let mut coeffs = vec![0u64; (f.coeffs().len() - 1) * k + 1];
    for (i, &c) in f.coeffs().iter().enumerate() {
        coeffs[i * k] = c;
    }
    Poly::new(coeffs, p)
}

fn rat_derivative_is_zero(x: &RatVal, p: u64) -> bool {
    // (N/D)' = (N'D - ND') / D^2 vanishes iff N'D = ND'.
    let lhs = x.num.derivative(p).mul(&x.den, p);
    let rhs = x.num.mul(&x.den.derivative(p), p);
    lhs == rhs
}

fn encode_poly(f: &Poly, out: &mut Vec<u8>) {
    out.extend_from_slice(&(f.coeffs().len() as u32).to_le_bytes());
    for &c in f.coeffs() {
        out.extend_from_slice(&c.to_le_bytes());
    }
}

fn decode_poly(bytes: &[u8], pos: &mut usize, p: u64) -> Result<Poly> {
    let err = || Error::InvalidArgument("truncated encoding".into());
    let len_bytes: [u8; 4] = bytes
        .get(*pos..*pos + 4)
        .ok_or_else(err)?
        .try_into()
        .unwrap();
    *pos += 4;
    let n = u32::from_le_bytes(len_bytes) as usize;
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let c_bytes: [u8; 8] = bytes
            .get(*pos..*pos + 8)
            .ok_or_else(err)?
            .try_into()
            .unwrap();
        *pos += 8;
        coeffs.push(u64::from_le_bytes(c_bytes));
    }
    if coeffs.last() == Some(&0) || coeffs.iter().any(|&c| c >= p) {
        return Err(Error::InvalidArgument(
            "coefficient list is not canonical".into(),
        ));
    }
    Ok(Poly::new(coeffs, p))
}

pub(crate) fn render_poly(f: &Poly, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}{var}^{i}"),
        };
        terms.push(t);
    }
    terms.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rings_under_test() -> Vec<RingRef> {
        vec![
            Ring::finite_field(2, 1, None).unwrap(),
            Ring::finite_field(2, 3, None).unwrap(),
            Ring::finite_field(3, 3, None).unwrap(),
            Ring::rational_function(2).unwrap(),
            Ring::rational_function(3).unwrap(),
            Ring::product(
                Ring::finite_field(2, 1, None).unwrap(),
                Ring::finite_field(2, 1, None).unwrap(),
            )
            .unwrap(),
        ]
    }

    #[test]
    fn prime_field_has_modulus_x() {
        let f2 = Ring::finite_field(2, 1, None).unwrap();
        let fq = f2.finite_data().unwrap();
        assert_eq!(fq.modulus.coeffs(), &[0, 1]);
    }

    #[test]
    fn f8_gets_least_irreducible_cubic() {
        let f8 = Ring::finite_field(2, 3, None).unwrap();
        assert_eq!(f8.finite_data().unwrap().modulus.coeffs(), &[1, 1, 0, 1]);
    }

    #[test]
    fn modulus_degree_mismatch_is_rejected() {
        let err = Ring::finite_field(2, 3, Some(vec![1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { got: 2, want: 3 }));
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // x^3 + 1 = (x + 1)(x^2 + x + 1) over F_2.
        let err = Ring::finite_field(2, 3, Some(vec![1, 0, 0, 1])).unwrap_err();
        assert_eq!(err, Error::ReducibleModulus);
        assert!(matches!(
            Ring::finite_field(4, 1, None),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn frobenius_fixes_zero_one_and_all_of_f2() {
        for ring in rings_under_test() {
            assert_eq!(ring.frobenius(&ring.zero()), ring.zero());
            assert_eq!(ring.frobenius(&ring.one()), ring.one());
        }
        let f2 = Ring::finite_field(2, 1, None).unwrap();
        for v in f2.enumerate().unwrap() {
            assert_eq!(f2.frobenius(&v), v);
        }
    }

    #[test]
    fn frobenius_of_t_over_t_plus_one() {
        let k = Ring::rational_function(2).unwrap();
        let x = k
            .from_rational(Poly::x(), Poly::new(vec![1, 1], 2))
            .unwrap();
        let fx = k.frobenius(&x);
        let expect = k
            .from_rational(Poly::new(vec![0, 0, 1], 2), Poly::new(vec![1, 0, 1], 2))
            .unwrap();
        assert_eq!(fx, expect);
    }

    #[test]
    fn frobenius_is_a_homomorphism_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ring in rings_under_test() {
            for _ in 0..1000 {
                let a = ring.sample(&mut rng, 4);
                let b = ring.sample(&mut rng, 4);
                assert_eq!(
                    ring.frobenius(&ring.mul(&a, &b)),
                    ring.mul(&ring.frobenius(&a), &ring.frobenius(&b))
                );
                assert_eq!(
                    ring.frobenius(&ring.add(&a, &b)),
                    ring.add(&ring.frobenius(&a), &ring.frobenius(&b))
                );
            }
        }
    }

    #[test]
    fn field_axioms_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ring in rings_under_test() {
            for _ in 0..200 {
                let a = ring.sample(&mut rng, 3);
                let b = ring.sample(&mut rng, 3);
                let c = ring.sample(&mut rng, 3);
                assert_eq!(
                    ring.mul(&a, &ring.mul(&b, &c)),
                    ring.mul(&ring.mul(&a, &b), &c)
                );
                assert_eq!(
                    ring.mul(&a, &ring.add(&b, &c)),
                    ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
                );
                assert_eq!(ring.add(&a, &ring.neg(&a)), ring.zero());
                if ring.is_unit(&a) {
                    let inv = ring.inv(&a).unwrap();
                    assert_eq!(ring.mul(&a, &inv), ring.one());
                }
            }
        }
    }

    #[test]
    fn canonical_encoding_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in rings_under_test() {
            for _ in 0..1000 {
                let a = ring.sample(&mut rng, 4);
                let b = ring.sample(&mut rng, 4);
                assert_eq!(a == b, ring.encode(&a) == ring.encode(&b));
                assert_eq!(ring.decode(&ring.encode(&a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn subfield_membership_examples() {
        let k = Ring::rational_function(2).unwrap();
        let t = k.variable().unwrap();
        let t2 = k.mul(&t, &t);
        assert!(k.in_pth_power_subfield(&t2).unwrap());
        assert!(!k.in_pth_power_subfield(&t).unwrap());
        // (t^2 + 1)/t^4 = g(t^2) with g(s) = (s + 1)/s^2.
        let x = k
            .from_rational(Poly::new(vec![1, 0, 1], 2), Poly::new(vec![0, 0, 0, 0, 1], 2))
            .unwrap();
        assert!(k.in_pth_power_subfield(&x).unwrap());
        let f8 = Ring::finite_field(2, 3, None).unwrap();
        assert!(f8.in_pth_power_subfield(&Value::Fin(3)).is_err());
    }

    #[test]
    fn subfield_is_closed_under_field_operations() {
        let k = Ring::rational_function_subfield(3).unwrap();
        let amb = Ring::rational_function(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let a = k.sample(&mut rng, 2);
            let b = k.sample(&mut rng, 2);
            assert!(amb.in_pth_power_subfield(&amb.add(&a, &b)).unwrap());
            assert!(amb.in_pth_power_subfield(&amb.mul(&a, &b)).unwrap());
            if amb.is_unit(&a) {
                assert!(amb
                    .in_pth_power_subfield(&amb.inv(&a).unwrap())
                    .unwrap());
            }
        }
    }

    #[test]
    fn sampling_from_marked_subfield_stays_inside() {
        let sub = Ring::rational_function_subfield(2).unwrap();
        let amb = Ring::rational_function(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v = sub.sample(&mut rng, 4);
            assert!(amb.in_pth_power_subfield(&v).unwrap());
        }
    }
}

/// A ring element together with its owning ring.
#[derive(Clone, Debug)]
pub struct Element {
    pub ring: RingRef,
    pub value: Value,
}

impl Element {
    pub fn new(ring: RingRef, value: Value) -> Element {
        Element { ring, value }
    }

    pub fn frobenius(&self) -> Element {
        Element {
            ring: self.ring.clone(),
            value: self.ring.frobenius(&self.value),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        self.ring.encode(&self.value)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.value == other.value
    }
}
impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.render(&self.value))
    }
}
