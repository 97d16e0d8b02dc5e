//! Exactly-represented commutative base rings and their scalars.
//!
//! Supported rings: the rationals, the integers, prime fields `F_p` with odd
//! `p`, quadratic extensions `R[x]/(x^2 - c)`, and the split pair ring
//! `R x R` with the swap involution. Arithmetic is exact and equality is
//! canonical: rationals are kept reduced, residues least non-negative.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::integer::Integer as _;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Descriptor of an exactly-represented commutative ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ring {
    /// The field of rational numbers.
    Rationals,
    /// The ring of integers.
    Integers,
    /// The prime field `F_p`, `p` an odd prime.
    PrimeField(u64),
    /// The quadratic extension `base[x]/(x^2 - c)`; a field when the base is
    /// a field and `c` is not a square there.
    Extension(Arc<Extension>),
    /// The split pair ring `base x base`, componentwise arithmetic.
    Split(Arc<Ring>),
}

/// Payload of a quadratic extension ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub base: Ring,
    pub c: Scalar,
}

impl Ring {
    /// Builds `F_p`, rejecting `p = 2` and composite moduli.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if p == 2 {
            return Err(Error::InvalidInput("prime field modulus must be odd".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Ring::PrimeField(p))
    }

    /// Builds `base[x]/(x^2 - c)`. The caller is responsible for `c` being a
    /// non-square when a field is required.
    pub fn extension(base: Ring, c: Scalar) -> Result<Ring> {
        if c.ring() != &base {
            return Err(Error::RingMismatch(base.to_string(), c.ring().to_string()));
        }
        Ok(Ring::Extension(Arc::new(Extension { base, c })))
    }

    /// Builds the split pair ring `base x base`.
    pub fn split(base: Ring) -> Ring {
        Ring::Split(Arc::new(base))
    }

    pub fn is_field(&self) -> bool {
        match self {
            Ring::Rationals | Ring::PrimeField(_) => true,
            // Trusted per the construction invariant: extensions used as base
            // rings are built with a non-square c over a field.
            Ring::Extension(ext) => ext.base.is_field(),
            Ring::Integers | Ring::Split(_) => false,
        }
    }

    pub fn two_invertible(&self) -> bool {
        match self {
            Ring::Rationals => true,
            Ring::Integers => false,
            Ring::PrimeField(_) => true,
            Ring::Extension(ext) => ext.base.two_invertible(),
            Ring::Split(base) => base.two_invertible(),
        }
    }

    /// Number of elements, if finite.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Ring::Rationals | Ring::Integers => None,
            Ring::PrimeField(p) => Some(*p),
            Ring::Extension(ext) => ext.base.cardinality().map(|n| n.saturating_mul(n)),
            Ring::Split(base) => base.cardinality().map(|n| n.saturating_mul(n)),
        }
    }

    /// The `idx`-th ring element in a fixed enumeration order; only valid for
    /// finite rings with `idx < cardinality()`.
    pub fn element(&self, idx: u64) -> Scalar {
        match self {
            Ring::PrimeField(p) => {
                debug_assert!(idx < *p);
                Scalar { ring: self.clone(), repr: Repr::Mod(idx) }
            }
            Ring::Extension(ext) => {
                let n = ext.base.cardinality().expect("finite ring");
                let a = ext.base.element(idx / n);
                let b = ext.base.element(idx % n);
                Scalar { ring: self.clone(), repr: Repr::Pair(Box::new((a, b))) }
            }
            Ring::Split(base) => {
                let n = base.cardinality().expect("finite ring");
                let a = base.element(idx / n);
                let b = base.element(idx % n);
                Scalar { ring: self.clone(), repr: Repr::Pair(Box::new((a, b))) }
            }
            _ => panic!("element enumeration requires a finite ring"),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar { ring: self.clone(), repr: self.repr_from_int(0) }
    }

    pub fn one(&self) -> Scalar {
        Scalar { ring: self.clone(), repr: self.repr_from_int(1) }
    }

    pub fn from_i64(&self, value: i64) -> Scalar {
        Scalar { ring: self.clone(), repr: self.repr_from_int(value) }
    }

    pub fn from_bigint(&self, value: &BigInt) -> Scalar {
        match self {
            Ring::Rationals => Scalar {
                ring: self.clone(),
                repr: Repr::Rat(BigRational::from_integer(value.clone())),
            },
            Ring::Integers => Scalar { ring: self.clone(), repr: Repr::Int(value.clone()) },
            Ring::PrimeField(p) => {
                let m = value.mod_floor(&BigInt::from(*p));
                let digit: u64 = m.try_into().expect("reduced residue fits u64");
                Scalar { ring: self.clone(), repr: Repr::Mod(digit) }
            }
            Ring::Extension(ext) => Scalar {
                ring: self.clone(),
                repr: Repr::Pair(Box::new((ext.base.from_bigint(value), ext.base.zero()))),
            },
            Ring::Split(base) => Scalar {
                ring: self.clone(),
                repr: Repr::Pair(Box::new((base.from_bigint(value), base.from_bigint(value)))),
            },
        }
    }

    fn repr_from_int(&self, value: i64) -> Repr {
        match self {
            Ring::Rationals => Repr::Rat(BigRational::from_integer(BigInt::from(value))),
            Ring::Integers => Repr::Int(BigInt::from(value)),
            Ring::PrimeField(p) => Repr::Mod(value.rem_euclid(*p as i64) as u64),
            Ring::Extension(ext) => {
                Repr::Pair(Box::new((ext.base.from_i64(value), ext.base.zero())))
            }
            Ring::Split(base) => Repr::Pair(Box::new((base.from_i64(value), base.from_i64(value)))),
        }
    }

    /// Builds a rational `n/d` in this ring, if meaningful.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let d = self.from_i64(den);
        let inv = d.inv()?;
        Ok(self.from_i64(num).mul(&inv))
    }

    /// Builds a pair scalar `(a, b)` over an extension or split ring.
    pub fn pair(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        let base = match self {
            Ring::Extension(ext) => &ext.base,
            Ring::Split(base) => base.as_ref(),
            _ => return Err(Error::InvalidInput(format!("ring {self} has no pair elements"))),
        };
        if a.ring() != base || b.ring() != base {
            return Err(Error::RingMismatch(base.to_string(), a.ring().to_string()));
        }
        Ok(Scalar { ring: self.clone(), repr: Repr::Pair(Box::new((a, b))) })
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "Q"),
            Ring::Integers => write!(f, "Z"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
            Ring::Extension(ext) => write!(f, "ext({}, {})", ext.base, ext.c),
            Ring::Split(base) => write!(f, "split({base})"),
        }
    }
}

/// An exact element of a [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    ring: Ring,
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    Int(BigInt),
    Mod(u64),
    Pair(Box<(Scalar, Scalar)>),
}

impl Scalar {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Int(i) => i.is_zero(),
            Repr::Mod(m) => *m == 0,
            Repr::Pair(p) => p.0.is_zero() && p.1.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn assert_same_ring(&self, other: &Scalar) {
        assert!(
            self.ring == other.ring,
            "scalar ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same_ring(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Int(a), Repr::Int(b)) => Repr::Int(a + b),
            (Repr::Mod(a), Repr::Mod(b)) => {
                let p = self.modulus();
                Repr::Mod(add_mod(*a, *b, p))
            }
            (Repr::Pair(a), Repr::Pair(b)) => {
                Repr::Pair(Box::new((a.0.add(&b.0), a.1.add(&b.1))))
            }
            _ => unreachable!("repr inconsistent with ring"),
        };
        Scalar { ring: self.ring.clone(), repr }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Int(a) => Repr::Int(-a),
            Repr::Mod(a) => {
                let p = self.modulus();
                Repr::Mod(if *a == 0 { 0 } else { p - a })
            }
            Repr::Pair(p) => Repr::Pair(Box::new((p.0.neg(), p.1.neg()))),
        };
        Scalar { ring: self.ring.clone(), repr }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same_ring(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Int(a), Repr::Int(b)) => Repr::Int(a * b),
            (Repr::Mod(a), Repr::Mod(b)) => Repr::Mod(mul_mod(*a, *b, self.modulus())),
            (Repr::Pair(a), Repr::Pair(b)) => match &self.ring {
                // (a + bx)(c + dx) = (ac + bd*c0) + (ad + bc)x  with x^2 = c0
                Ring::Extension(ext) => {
                    let re = a.0.mul(&b.0).add(&a.1.mul(&b.1).mul(&ext.c));
                    let im = a.0.mul(&b.1).add(&a.1.mul(&b.0));
                    Repr::Pair(Box::new((re, im)))
                }
                Ring::Split(_) => Repr::Pair(Box::new((a.0.mul(&b.0), a.1.mul(&b.1)))),
                _ => unreachable!(),
            },
            _ => unreachable!("repr inconsistent with ring"),
        };
        Scalar { ring: self.ring.clone(), repr }
    }

    /// Multiplicative inverse; `NonInvertible` for non-units.
    pub fn inv(&self) -> Result<Scalar> {
        let repr = match &self.repr {
            Repr::Rat(a) => {
                if a.is_zero() {
                    return Err(Error::NonInvertible);
                }
                Repr::Rat(a.recip())
            }
            Repr::Int(a) => {
                if a == &BigInt::one() || a == &(-BigInt::one()) {
                    Repr::Int(a.clone())
                } else {
                    return Err(Error::NonInvertible);
                }
            }
            Repr::Mod(a) => Repr::Mod(inv_mod(*a, self.modulus())?),
            Repr::Pair(p) => match &self.ring {
                // (a + bx)^-1 = (a - bx) / (a^2 - c b^2)
                Ring::Extension(ext) => {
                    let norm = p.0.mul(&p.0).sub(&ext.c.mul(&p.1.mul(&p.1)));
                    let ninv = norm.inv()?;
                    Repr::Pair(Box::new((p.0.mul(&ninv), p.1.neg().mul(&ninv))))
                }
                Ring::Split(_) => Repr::Pair(Box::new((p.0.inv()?, p.1.inv()?))),
                _ => unreachable!(),
            },
        };
        Ok(Scalar { ring: self.ring.clone(), repr })
    }

    pub fn is_invertible(&self) -> bool {
        self.inv().is_ok()
    }

    /// Ring conjugation: identity on base rings, `x -> -x` on quadratic
    /// extensions, the swap on split pair rings.
    pub fn conjugate(&self) -> Scalar {
        match (&self.ring, &self.repr) {
            (Ring::Extension(_), Repr::Pair(p)) => Scalar {
                ring: self.ring.clone(),
                repr: Repr::Pair(Box::new((p.0.clone(), p.1.neg()))),
            },
            (Ring::Split(_), Repr::Pair(p)) => Scalar {
                ring: self.ring.clone(),
                repr: Repr::Pair(Box::new((p.1.clone(), p.0.clone()))),
            },
            _ => self.clone(),
        }
    }

    /// The two pair components of an extension or split scalar.
    pub fn pair_parts(&self) -> Option<(&Scalar, &Scalar)> {
        match &self.repr {
            Repr::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    /// For ordering heuristics over the rationals: the sign of the value.
    pub fn rational_sign(&self) -> Option<i8> {
        match &self.repr {
            Repr::Rat(r) => Some(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
            Repr::Int(i) => Some(if i.is_zero() {
                0
            } else if i.is_positive() {
                1
            } else {
                -1
            }),
            _ => None,
        }
    }

    /// Numerator and denominator of a rational or integer scalar.
    pub fn rational_parts(&self) -> Option<(BigInt, BigInt)> {
        match &self.repr {
            Repr::Rat(r) => Some((r.numer().clone(), r.denom().clone())),
            Repr::Int(i) => Some((i.clone(), BigInt::one())),
            _ => None,
        }
    }

    /// Reinterprets an integer scalar in the rationals; identity on
    /// rationals.
    pub fn into_rationals(&self) -> Option<Scalar> {
        match &self.repr {
            Repr::Rat(_) => Some(self.clone()),
            Repr::Int(i) => Some(Scalar {
                ring: Ring::Rationals,
                repr: Repr::Rat(BigRational::from_integer(i.clone())),
            }),
            _ => None,
        }
    }

    /// An integral rational as an integer scalar.
    pub fn into_integers(&self) -> Option<Scalar> {
        match &self.repr {
            Repr::Int(_) => Some(self.clone()),
            Repr::Rat(r) if r.denom().is_one() => {
                Some(Scalar { ring: Ring::Integers, repr: Repr::Int(r.numer().clone()) })
            }
            _ => None,
        }
    }

    /// Whether a rational scalar is a square, returning a square root.
    pub fn rational_sqrt(&self) -> Option<Scalar> {
        let r = match &self.repr {
            Repr::Rat(r) => r.clone(),
            Repr::Int(i) => BigRational::from_integer(i.clone()),
            _ => return None,
        };
        if r.is_negative() {
            return None;
        }
        let num = r.numer().sqrt();
        let den = r.denom().sqrt();
        if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
            let root = BigRational::new(num, den);
            let repr = match &self.repr {
                Repr::Rat(_) => Repr::Rat(root),
                Repr::Int(_) => Repr::Int(root.to_integer()),
                _ => unreachable!(),
            };
            Some(Scalar { ring: self.ring.clone(), repr })
        } else {
            None
        }
    }

    fn modulus(&self) -> u64 {
        match &self.ring {
            Ring::PrimeField(p) => *p,
            _ => unreachable!("modulus on non prime-field scalar"),
        }
    }

    // ---- checked variants: the boundary API with explicit errors ----

    fn check_ring(&self, other: &Scalar) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_ring(other)?;
        Ok(self.add(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check_ring(other)?;
        Ok(self.sub(other))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_ring(other)?;
        Ok(self.mul(other))
    }

    pub fn checked_eq(&self, other: &Scalar) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self == other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Int(i) => write!(f, "{i}"),
            Repr::Mod(m) => write!(f, "{m}"),
            Repr::Pair(p) => write!(f, "({}, {})", p.0, p.1),
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::NonInvertible);
    }
    // extended Euclid on signed 128-bit values
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NonInvertible);
    }
    Ok(t0.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Dispatch form of scalar arithmetic with full error reporting.
pub fn scalar_arith(op: ScalarOp, a: &Scalar, b: Option<&Scalar>) -> Result<ScalarValue> {
    fn binary<'a>(b: Option<&'a Scalar>) -> Result<&'a Scalar> {
        b.ok_or_else(|| Error::InvalidInput("missing operand".into()))
    }
    match op {
        ScalarOp::Add => Ok(ScalarValue::Scalar(a.checked_add(binary(b)?)?)),
        ScalarOp::Sub => Ok(ScalarValue::Scalar(a.checked_sub(binary(b)?)?)),
        ScalarOp::Mul => Ok(ScalarValue::Scalar(a.checked_mul(binary(b)?)?)),
        ScalarOp::Neg => Ok(ScalarValue::Scalar(a.neg())),
        ScalarOp::Inv => Ok(ScalarValue::Scalar(a.inv()?)),
        ScalarOp::Eq => Ok(ScalarValue::Bool(a.checked_eq(binary(b)?)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Scalar(Scalar),
    Bool(bool),
}
