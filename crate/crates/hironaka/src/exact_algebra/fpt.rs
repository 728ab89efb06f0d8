//! The rational function field 𝔽p(t) as reduced fractions with monic denominators.

use std::sync::Arc;

use num_bigint::BigInt;

use super::field::{binomial_in, CoeffText, Field, FieldDescriptor, FieldKind};
use super::fp::Fp;
use super::fpx::{self, Upoly};
use crate::error::Result;

/// Context of 𝔽p(t): the characteristic and the name of the transcendental.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FptCtx {
    pub p: u64,
    pub name: Arc<str>,
}

impl FptCtx {
    pub fn new(p: u64, name: &str) -> Self {
        FptCtx { p, name: Arc::from(name) }
    }
}

/// An element `num/den` of 𝔽p(t) with gcd(num, den) = 1 and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fpt {
    ctx: FptCtx,
    num: Upoly,
    den: Upoly,
}

impl Fpt {
    /// Builds `num/den` and reduces it; `den` must be nonzero.
    pub fn from_fraction(ctx: &FptCtx, num: Upoly, den: Upoly) -> Self {
        let p = ctx.p;
        let num = fpx::trim(num.into_iter().map(|c| c % p).collect());
        let den = fpx::trim(den.into_iter().map(|c| c % p).collect());
        assert!(!den.is_empty(), "zero denominator in 𝔽p(t)");
        if num.is_empty() {
            return Fpt { ctx: ctx.clone(), num, den: vec![1] };
        }
        let g = fpx::gcd(&num, &den, p);
        let (n, _) = fpx::divrem(&num, &g, p);
        let (d, _) = fpx::divrem(&den, &g, p);
        let lc = *d.last().expect("nonzero denominator");
        let li = fpx::inv_scalar(lc, p);
        Fpt { ctx: ctx.clone(), num: fpx::scale(&n, li, p), den: fpx::scale(&d, li, p) }
    }

    pub fn from_poly(ctx: &FptCtx, num: Upoly) -> Self {
        Self::from_fraction(ctx, num, vec![1])
    }

    /// The transcendental `t` itself.
    pub fn t(ctx: &FptCtx) -> Self {
        Self::from_poly(ctx, vec![0, 1])
    }

    pub fn numerator(&self) -> &[u64] {
        &self.num
    }
    pub fn denominator(&self) -> &[u64] {
        &self.den
    }
}

/// Hasse derivatives D^(0), …, D^(j) of a polynomial in t: the coefficients of s^i in a(t + s).
fn upoly_hasse(a: &[u64], j: usize, p: u64) -> Vec<Upoly> {
    (0..=j)
        .map(|i| {
            let terms: Upoly = (i..a.len()).map(|k| (a[k] as u128 * binomial_in::<Fp>(&p, k as u64, i as u64).value() as u128 % p as u128) as u64).collect();
            fpx::trim(terms)
        })
        .collect()
}

fn divisible_exponents(a: &[u64], q: usize) -> bool {
    a.iter().enumerate().all(|(i, &c)| c == 0 || i % q == 0)
}

fn compress(a: &[u64], q: usize) -> Upoly {
    fpx::trim(a.iter().step_by(q).copied().collect())
}

impl Field for Fpt {
    type Ctx = FptCtx;

    fn ctx(&self) -> FptCtx {
        self.ctx.clone()
    }
    fn zero(ctx: &FptCtx) -> Self {
        Fpt { ctx: ctx.clone(), num: Vec::new(), den: vec![1] }
    }
    fn one(ctx: &FptCtx) -> Self {
        Fpt { ctx: ctx.clone(), num: vec![1], den: vec![1] }
    }
    fn from_bigint(ctx: &FptCtx, n: &BigInt) -> Self {
        let pb = BigInt::from(ctx.p);
        let r = ((n % &pb) + &pb) % &pb;
        let v: u64 = r.try_into().expect("residue fits in u64");
        Self::from_poly(ctx, vec![v])
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.ctx.p;
        if self.den == o.den {
            return Self::from_fraction(&self.ctx, fpx::add(&self.num, &o.num, p), self.den.clone());
        }
        let n = fpx::add(&fpx::mul(&self.num, &o.den, p), &fpx::mul(&o.num, &self.den, p), p);
        Self::from_fraction(&self.ctx, n, fpx::mul(&self.den, &o.den, p))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.ctx.p;
        Self::from_fraction(&self.ctx, fpx::mul(&self.num, &o.num, p), fpx::mul(&self.den, &o.den, p))
    }
    fn neg(&self) -> Self {
        Fpt { ctx: self.ctx.clone(), num: fpx::neg(&self.num, self.ctx.p), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_empty() {
            None
        } else {
            Some(Self::from_fraction(&self.ctx, self.den.clone(), self.num.clone()))
        }
    }
    fn characteristic(ctx: &FptCtx) -> u64 {
        ctx.p
    }
    fn descriptor(ctx: &FptCtx) -> FieldDescriptor {
        FieldDescriptor {
            kind: FieldKind::RationalFunctionsOverPrimeField,
            characteristic: ctx.p,
            transcendental_name: Some(ctx.name.to_string()),
            extension_degree: None,
            modulus: None,
        }
    }
    fn pth_root(&self) -> Result<Option<Self>> {
        let p = self.ctx.p as usize;
        if divisible_exponents(&self.num, p) && divisible_exponents(&self.den, p) {
            Ok(Some(Self::from_fraction(&self.ctx, compress(&self.num, p), compress(&self.den, p))))
        } else {
            Ok(None)
        }
    }
    fn frobenius_coords(&self, q: u64) -> Vec<Self> {
        let p = self.ctx.p;
        let qs = q as usize;
        if q == 1 {
            return vec![self.clone()];
        }
        // self = N·D^(q-1) / D^q; split N·D^(q-1) by exponent residue mod q.
        let big = fpx::mul(&self.num, &fpx::pow(&self.den, q - 1, p), p);
        (0..qs)
            .map(|l| {
                let part: Upoly = big.iter().skip(l).step_by(qs).copied().collect();
                Self::from_fraction(&self.ctx, part, self.den.clone())
            })
            .collect()
    }
    fn frobenius_basis(ctx: &FptCtx, q: u64) -> Vec<Self> {
        (0..q as usize)
            .map(|l| {
                let mut m = vec![0u64; l + 1];
                m[l] = 1;
                Self::from_poly(ctx, m)
            })
            .collect()
    }
    fn p_basis_size(_ctx: &FptCtx) -> usize {
        1
    }
    fn coefficient_hasse(&self, j: u32) -> Self {
        // Power series division of num(t + s) by den(t + s) up to s^j.
        let (p, j) = (self.ctx.p, j as usize);
        let n = upoly_hasse(&self.num, j, p);
        let d: Vec<Self> = upoly_hasse(&self.den, j, p).into_iter().map(|c| Self::from_poly(&self.ctx, c)).collect();
        let d0 = d[0].inv().expect("nonzero denominator");
        let mut q: Vec<Self> = Vec::with_capacity(j + 1);
        for i in 0..=j {
            let mut acc = Self::from_poly(&self.ctx, n[i].clone());
            for l in 1..=i {
                acc = acc.sub(&d[l].mul(&q[i - l]));
            }
            q.push(acc.mul(&d0));
        }
        q.pop().expect("at least one coefficient")
    }
    fn transcendental(ctx: &FptCtx, name: &str, exp: u32) -> Option<Self> {
        if name == &*ctx.name {
            let mut m = vec![0u64; exp as usize + 1];
            m[exp as usize] = 1;
            Some(Self::from_poly(ctx, m))
        } else {
            None
        }
    }
    fn coeff_text(&self) -> CoeffText {
        let n = fpx::render(&self.num, &self.ctx.name);
        if self.den == [1] {
            let atomic = fpx::term_count(&self.num) <= 1;
            CoeffText { negative: false, text: n, atomic }
        } else {
            let d = fpx::render(&self.den, &self.ctx.name);
            CoeffText { negative: false, text: format!("({})/({})", n, d), atomic: true }
        }
    }
}
