//! Finite extensions 𝔽p[a]/(m(a)) of a prime field, used for non-rational points.

use std::sync::Arc;

use num_bigint::BigInt;

use super::field::{CoeffText, Field, FieldDescriptor, FieldKind};
use super::fpx::{self, Upoly};
use crate::error::{Error, Result};

/// Context of a finite extension: characteristic, monic irreducible modulus and generator name.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GfCtxData {
    pub p: u64,
    pub modulus: Upoly,
    pub name: String,
}

pub type GfCtx = Arc<GfCtxData>;

/// Builds the context, rejecting reducible or constant moduli.
pub fn gf_context(p: u64, modulus: Upoly, name: &str) -> Result<GfCtx> {
    let m = fpx::monic(&fpx::trim(modulus.into_iter().map(|c| c % p).collect()), p);
    if !fpx::is_irreducible(&m, p) {
        return Err(Error::Input(format!(
            "modulus {} is not irreducible of degree ≥ 1 over F_{}",
            fpx::render(&m, name),
            p
        )));
    }
    Ok(Arc::new(GfCtxData { p, modulus: m, name: name.to_string() }))
}

/// An element of 𝔽p[a]/(m), stored as a reduced polynomial in `a`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gf {
    ctx: GfCtx,
    c: Upoly,
}

impl Gf {
    pub fn from_poly(ctx: &GfCtx, c: Upoly) -> Self {
        let c = fpx::trim(c.into_iter().map(|x| x % ctx.p).collect());
        let (_, r) = fpx::divrem(&c, &ctx.modulus, ctx.p);
        Gf { ctx: ctx.clone(), c: r }
    }
    pub fn generator(ctx: &GfCtx) -> Self {
        Self::from_poly(ctx, vec![0, 1])
    }
    pub fn degree(ctx: &GfCtx) -> usize {
        ctx.modulus.len() - 1
    }
    /// Embeds a prime-field residue.
    pub fn from_prime(ctx: &GfCtx, v: u64) -> Self {
        Self::from_poly(ctx, vec![v])
    }
    fn frobenius(&self) -> Self {
        self.pow(self.ctx.p)
    }
}

impl Field for Gf {
    type Ctx = GfCtx;

    fn ctx(&self) -> GfCtx {
        self.ctx.clone()
    }
    fn zero(ctx: &GfCtx) -> Self {
        Gf { ctx: ctx.clone(), c: Vec::new() }
    }
    fn one(ctx: &GfCtx) -> Self {
        Gf { ctx: ctx.clone(), c: vec![1] }
    }
    fn from_bigint(ctx: &GfCtx, n: &BigInt) -> Self {
        let pb = BigInt::from(ctx.p);
        let r = ((n % &pb) + &pb) % &pb;
        let v: u64 = r.try_into().expect("residue fits in u64");
        Self::from_poly(ctx, vec![v])
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        Gf { ctx: self.ctx.clone(), c: fpx::add(&self.c, &o.c, self.ctx.p) }
    }
    fn sub(&self, o: &Self) -> Self {
        Gf { ctx: self.ctx.clone(), c: fpx::sub(&self.c, &o.c, self.ctx.p) }
    }
    fn mul(&self, o: &Self) -> Self {
        let prod = fpx::mul(&self.c, &o.c, self.ctx.p);
        let (_, r) = fpx::divrem(&prod, &self.ctx.modulus, self.ctx.p);
        Gf { ctx: self.ctx.clone(), c: r }
    }
    fn neg(&self) -> Self {
        Gf { ctx: self.ctx.clone(), c: fpx::neg(&self.c, self.ctx.p) }
    }
    fn inv(&self) -> Option<Self> {
        if self.c.is_empty() {
            return None;
        }
        let (g, s, _) = fpx::xgcd(&self.c, &self.ctx.modulus, self.ctx.p);
        debug_assert_eq!(g, vec![1]);
        Some(Self::from_poly(&self.ctx, s))
    }
    fn characteristic(ctx: &GfCtx) -> u64 {
        ctx.p
    }
    fn descriptor(ctx: &GfCtx) -> FieldDescriptor {
        FieldDescriptor {
            kind: FieldKind::FiniteExtension,
            characteristic: ctx.p,
            transcendental_name: Some(ctx.name.clone()),
            extension_degree: Some(ctx.modulus.len() - 1),
            modulus: Some(fpx::render(&ctx.modulus, &ctx.name)),
        }
    }
    fn pth_root(&self) -> Result<Option<Self>> {
        let d = Gf::degree(&self.ctx);
        let mut r = self.clone();
        for _ in 0..d.saturating_sub(1) {
            r = r.frobenius();
        }
        Ok(Some(r))
    }
    fn frobenius_coords(&self, q: u64) -> Vec<Self> {
        let d = Gf::degree(&self.ctx) as u64;
        let mut s = 0u64;
        let mut x = q;
        while x > 1 {
            x /= self.ctx.p;
            s += 1;
        }
        let k = (d - s % d) % d;
        let mut r = self.clone();
        for _ in 0..k {
            r = r.frobenius();
        }
        vec![r]
    }
    fn frobenius_basis(ctx: &GfCtx, _q: u64) -> Vec<Self> {
        vec![Gf::one(ctx)]
    }
    fn transcendental(ctx: &GfCtx, name: &str, exp: u32) -> Option<Self> {
        if name == ctx.name {
            Some(Gf::generator(ctx).pow(exp as u64))
        } else {
            None
        }
    }
    fn elements(ctx: &GfCtx) -> Option<Vec<Self>> {
        let d = Gf::degree(ctx);
        let count = (ctx.p as u128).pow(d as u32);
        if count > 1 << 16 {
            return None;
        }
        Some(
            (0..count)
                .map(|mut idx| {
                    let mut c = vec![0u64; d];
                    for slot in c.iter_mut() {
                        *slot = (idx % ctx.p as u128) as u64;
                        idx /= ctx.p as u128;
                    }
                    Gf::from_poly(ctx, c)
                })
                .collect(),
        )
    }
    fn coeff_text(&self) -> CoeffText {
        CoeffText {
            negative: false,
            text: fpx::render(&self.c, &self.ctx.name),
            atomic: fpx::term_count(&self.c) <= 1,
        }
    }
}
