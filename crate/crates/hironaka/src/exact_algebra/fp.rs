//! The prime field 𝔽p for word-size primes.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::field::{mod_pow, CoeffText, Field, FieldDescriptor, FieldKind};
use crate::error::Result;

/// A residue `v mod p` with `0 ≤ v < p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    p: u64,
    v: u64,
}

impl Fp {
    pub fn new(p: u64, v: i64) -> Self {
        let v = v.rem_euclid(p as i64) as u64;
        Fp { p, v }
    }
    pub fn value(&self) -> u64 {
        self.v
    }
    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.p
    }
    fn zero(p: &u64) -> Self {
        Fp { p: *p, v: 0 }
    }
    fn one(p: &u64) -> Self {
        Fp { p: *p, v: 1 % *p }
    }
    fn from_bigint(p: &u64, n: &BigInt) -> Self {
        let pb = BigInt::from(*p);
        let r = ((n % &pb) + &pb) % &pb;
        Fp { p: *p, v: r.to_u64().expect("residue fits in u64") }
    }
    fn from_i64(p: &u64, n: i64) -> Self {
        Fp { p: *p, v: (n as i128).rem_euclid(*p as i128) as u64 }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn add(&self, o: &Self) -> Self {
        Fp { p: self.p, v: ((self.v as u128 + o.v as u128) % self.p as u128) as u64 }
    }
    fn sub(&self, o: &Self) -> Self {
        Fp { p: self.p, v: ((self.v as u128 + (self.p - o.v) as u128) % self.p as u128) as u64 }
    }
    fn mul(&self, o: &Self) -> Self {
        Fp { p: self.p, v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64 }
    }
    fn neg(&self) -> Self {
        Fp { p: self.p, v: (self.p - self.v) % self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(Fp { p: self.p, v: mod_pow(self.v, self.p - 2, self.p) })
        }
    }
    fn characteristic(p: &u64) -> u64 {
        *p
    }
    fn descriptor(p: &u64) -> FieldDescriptor {
        FieldDescriptor {
            kind: FieldKind::PrimeField,
            characteristic: *p,
            transcendental_name: None,
            extension_degree: None,
            modulus: None,
        }
    }
    fn pth_root(&self) -> Result<Option<Self>> {
        Ok(Some(*self))
    }
    fn frobenius_coords(&self, _q: u64) -> Vec<Self> {
        vec![*self]
    }
    fn frobenius_basis(p: &u64, _q: u64) -> Vec<Self> {
        vec![Fp::one(p)]
    }
    fn elements(p: &u64) -> Option<Vec<Self>> {
        Some((0..*p).map(|v| Fp { p: *p, v }).collect())
    }
    fn coeff_text(&self) -> CoeffText {
        CoeffText { negative: false, text: self.v.to_string(), atomic: true }
    }
}
