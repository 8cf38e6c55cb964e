//! Dense univariate polynomials over a prime field `F_p`.
//!
//! Coefficients are stored little-endian (constant term first) as `u64`
//! residues in `[0, p)`, with trailing zeros trimmed so that equal
//! polynomials have identical representations. The zero polynomial is the
//! empty coefficient vector.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        Poly::new(vec![c], p)
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![0, 1],
        }
    }

    pub fn monomial(c: u64, deg: usize, p: u64) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c % p;
        Poly::new(coeffs, p)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with `deg 0 = None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn add(&self, other: &Poly, p: u64) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.coeff(i) + other.coeff(i)) % p;
        }
        Poly::new(out, p)
    }

    pub fn neg(&self, p: u64) -> Poly {
        let out = self.coeffs.iter().map(|&c| (p - c) % p).collect();
        Poly::new(out, p)
    }

    pub fn sub(&self, other: &Poly, p: u64) -> Poly {
        self.add(&other.neg(p), p)
    }

    pub fn mul(&self, other: &Poly, p: u64) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        Poly::new(out, p)
    }

    pub fn scale(&self, c: u64, p: u64) -> Poly {
        let out = self.coeffs.iter().map(|&a| mulmod(a, c, p)).collect();
        Poly::new(out, p)
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Poly, p: u64) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        let lc_inv = inv_mod(divisor.leading_coeff(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = mulmod(*rem.last().unwrap(), lc_inv, p);
            if factor != 0 {
                quot[k] = factor;
                for (j, &c) in divisor.coeffs.iter().enumerate() {
                    let sub = mulmod(factor, c, p);
                    rem[k + j] = (rem[k + j] + p - sub) % p;
                }
            }
            rem.pop();
        }
        Ok((Poly::new(quot, p), Poly::new(rem, p)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, p: u64) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b, p).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        a.scale(inv_mod(a.leading_coeff(), p), p)
    }

    /// Formal derivative with respect to the variable.
    pub fn derivative(&self, p: u64) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(i as u64 % p, c, p))
            .collect();
        Poly::new(out, p)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, p: u64) -> Poly {
        let mut base = self.div_rem(modulus, p).expect("nonzero modulus").1;
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p).div_rem(modulus, p).unwrap().1;
            }
            base = base.mul(&base, p).div_rem(modulus, p).unwrap().1;
            e >>= 1;
        }
        acc
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Poly, p: u64) -> Poly {
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner, p);
            acc = acc.add(&Poly::constant(c, p), p);
        }
        acc
    }

    pub fn eval(&self, x: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x, p) + c) % p;
        }
        acc
    }

    /// Rabin irreducibility test over `F_p`.
    pub fn is_irreducible(&self, p: u64) -> bool {
        let deg = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if deg == 1 {
            return true;
        }
        // x^(p^deg) ≡ x mod f, and for every prime divisor l of deg,
        // gcd(x^(p^(deg/l)) - x, f) must be 1.
        let x = Poly::x();
        let frob_iterate = |k: usize| -> Poly {
            let mut acc = x.div_rem(self, p).unwrap().1;
            for _ in 0..k {
                acc = acc.pow_mod(p, self, p);
            }
            acc
        };
        let full = frob_iterate(deg);
        if full != x.div_rem(self, p).unwrap().1 {
            return false;
        }
        let mut d = deg;
        let mut l = 2;
        let mut prime_divisors = Vec::new();
        while l * l <= d {
            if d % l == 0 {
                prime_divisors.push(l);
                while d % l == 0 {
                    d /= l;
                }
            }
            l += 1;
        }
        if d > 1 {
            prime_divisors.push(d);
        }
        for l in prime_divisors {
            let partial = frob_iterate(deg / l);
            let diff = partial.sub(&x, p);
            if !self.gcd(&diff, p).is_one() {
                return false;
            }
        }
        true
    }

    /// Packs the coefficient vector into an integer in base `p`
    /// (little-endian), used for deterministic enumeration orders.
    pub fn packed(&self, p: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * p + c;
        }
        acc
    }

    pub fn from_packed(mut v: u64, p: u64) -> Poly {
        let mut coeffs = Vec::new();
        while v > 0 {
            coeffs.push(v % p);
            v /= p;
        }
        Poly { coeffs }
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat inverse; p is prime and a != 0.
    debug_assert!(!a.is_multiple_of(p));
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// The lexicographically least monic irreducible polynomial of the given
/// degree, where "least" is the base-p packed value of the coefficient
/// vector. Deterministic across runs and platforms.
pub fn least_irreducible(p: u64, degree: usize) -> Poly {
    let start = p.pow(degree as u32);
    for v in start..2 * start {
        let f = Poly::from_packed(v, p);
        if f.is_monic() && f.is_irreducible(p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}
