//! The coefficient-field abstraction.
//!
//! `num_traits::Zero`/`One` cannot be implemented for residues whose modulus is only known at
//! run time, so the crate uses its own trait where constants are built from a field context.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Which family a coefficient field belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Rationals,
    PrimeField,
    RationalFunctionsOverPrimeField,
    /// A finite extension 𝔽p[a]/(m(a)), produced by locating non-rational points.
    FiniteExtension,
}

/// Serializable description of a coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub characteristic: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub transcendental_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extension_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<String>,
}

/// Rendering of a coefficient for the polynomial printer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffText {
    /// The coefficient should be printed with a leading minus sign and `text` is its absolute value.
    pub negative: bool,
    pub text: String,
    /// `text` can be followed by `*monomial` without parentheses.
    pub atomic: bool,
}

/// An exact commutative field with a run-time context (modulus, transcendental name, ...).
pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_bigint(ctx: &Self::Ctx, n: &BigInt) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn characteristic(ctx: &Self::Ctx) -> u64;
    fn descriptor(ctx: &Self::Ctx) -> FieldDescriptor;

    /// The unique `d` with `d^p = self`, if it exists. Characteristic 0 is an unsupported operation.
    fn pth_root(&self) -> Result<Option<Self>>;

    /// Coordinates of `self` over the subfield of q-th powers, where q is 1 or a power of the
    /// characteristic: returns `c_0, …, c_{k-1}` with `self = Σ_l b_l · c_l^q` for the fixed
    /// basis `b_l` of the field over its q-th powers (see [`Field::frobenius_basis`]).
    fn frobenius_coords(&self, q: u64) -> Vec<Self>;

    /// The basis `b_l` used by [`Field::frobenius_coords`].
    fn frobenius_basis(ctx: &Self::Ctx, q: u64) -> Vec<Self>;

    /// The element `name^exp` when `name` denotes a field generator (the transcendental of
    /// 𝔽p(t) or the generator of a finite extension).
    fn transcendental(_ctx: &Self::Ctx, _name: &str, _exp: u32) -> Option<Self> {
        None
    }

    /// Number of elements of a p-basis of the field over its prime field (1 for 𝔽p(t), 0 for
    /// perfect fields and ℚ, whose absolute derivations vanish).
    fn p_basis_size(_ctx: &Self::Ctx) -> usize {
        0
    }

    /// Hasse derivative of order `j` along the p-basis element (the transcendental t of 𝔽p(t)).
    fn coefficient_hasse(&self, j: u32) -> Self {
        if j == 0 {
            self.clone()
        } else {
            Self::zero(&self.ctx())
        }
    }

    /// All field elements when the field is finite.
    fn elements(_ctx: &Self::Ctx) -> Option<Vec<Self>> {
        None
    }

    /// Roots in the field of the nonzero univariate polynomial Σ coeffs[i]·x^i, without
    /// multiplicity; `None` when the field offers no way to find them.
    fn roots(ctx: &Self::Ctx, coeffs: &[Self]) -> Option<Vec<Self>> {
        let elems = Self::elements(ctx)?;
        Some(elems.into_iter().filter(|a| horner(ctx, coeffs, a).is_zero()).collect())
    }

    fn coeff_text(&self) -> CoeffText;
}

/// Evaluates Σ coeffs[i]·a^i.
pub fn horner<K: Field>(ctx: &K::Ctx, coeffs: &[K], a: &K) -> K {
    coeffs.iter().rev().fold(K::zero(ctx), |acc, c| acc.mul(a).add(c))
}

/// `n choose k` reduced into the field, using Lucas' theorem in positive characteristic.
pub fn binomial_in<K: Field>(ctx: &K::Ctx, n: u64, k: u64) -> K {
    if k > n {
        return K::zero(ctx);
    }
    let p = K::characteristic(ctx);
    if p == 0 {
        let mut acc = num_bigint::BigUint::from(1u32);
        let k = k.min(n - k);
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        return K::from_bigint(ctx, &BigInt::from(acc));
    }
    let (mut n, mut k) = (n, k);
    let mut acc: u64 = 1;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return K::zero(ctx);
        }
        acc = (acc as u128 * small_binomial_mod(ni, ki, p) as u128 % p as u128) as u64;
        n /= p;
        k /= p;
    }
    K::from_i64(ctx, acc as i64)
}

fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num * ((n - i) % p) as u128 % p as u128;
        den = den * ((i + 1) % p) as u128 % p as u128;
    }
    (num * mod_pow(den as u64, p - 2, p) as u128 % p as u128) as u64
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1 % m as u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Primality test for word-size moduli (trial division; moduli are small).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// True when `q` is 1 or a power of `p` (with p > 0).
pub fn is_power_of(q: u64, p: u64) -> bool {
    if q == 1 {
        return true;
    }
    if p < 2 {
        return false;
    }
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}
