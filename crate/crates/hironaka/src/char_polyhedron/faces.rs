//! Face invariants α, β, γ, s of a two-dimensional F-subset, the straightened slope σ, and the
//! δ-initial forms In_δ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{blocks, polyhedron_of, prepare, PrepStatus};
use crate::error::{Error, Result};
use crate::exact_algebra::{binomial_in, Field, Polynomial, QInf};
use crate::local_frame::Frame;

use super::hull::FPolyhedron;

/// (α, β, γ, s) for one side of a two-dimensional F-subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceNumbers {
    pub alpha: QInf,
    pub beta: QInf,
    pub gamma: QInf,
    pub s: QInf,
}

pub fn face_numbers(delta: &FPolyhedron, side: u8) -> Result<FaceNumbers> {
    if delta.dim != 2 {
        return Err(Error::Domain(format!("face numbers need e = 2, got e = {}", delta.dim)));
    }
    let d = match side {
        1 => delta.clone(),
        2 => delta.swapped()?,
        _ => return Err(Error::Input(format!("side must be 1 or 2, got {}", side))),
    };
    if d.is_empty() {
        return Ok(FaceNumbers { alpha: QInf::Inf, beta: QInf::Inf, gamma: QInf::Inf, s: QInf::Inf });
    }
    let v = &d.vertices;
    let dmin = v.iter().map(|w| w.coord_sum()).min().expect("nonempty");
    let gamma = v.iter().filter(|w| w.coord_sum() == dmin).map(|w| w.0[1].clone()).max().expect("nonempty");
    let s = if v.len() <= 1 {
        QInf::Inf
    } else {
        QInf::Fin((&v[1].0[0] - &v[0].0[0]) / (&v[0].0[1] - &v[1].0[1]))
    };
    Ok(FaceNumbers {
        alpha: QInf::Fin(v[0].0[0].clone()),
        beta: QInf::Fin(v[0].0[1].clone()),
        gamma: QInf::Fin(gamma),
        s,
    })
}

/// Result of the σ computation.
#[derive(Debug, Clone)]
pub struct SigmaResult<K: Field> {
    pub value: QInf,
    /// True when the straightening budget ran out or preparation was not certified minimal, so
    /// `value` is only a lower bound.
    pub lower_bound: bool,
    /// Applied substitutions of the free u-variable, rendered as (variable, replacement).
    pub substitutions: Vec<(String, String)>,
    /// Generators and frame in the final (straightened and prepared) coordinates.
    pub gens: Vec<Polynomial<K>>,
    pub frame: Frame<K>,
    pub polyhedron: FPolyhedron,
}

pub const DEFAULT_SIGMA_BUDGET: usize = 32;

fn max1(q: QInf) -> QInf {
    std::cmp::max(q, QInf::int(1))
}

/// Candidate constants c making the face polynomial a·(T + c)^d.
fn face_constants<K: Field>(ctx: &K::Ctx, coeffs: &[(u32, K)]) -> Vec<K> {
    // coeffs: (T-degree, coefficient), any order.
    let mut cs = coeffs.to_vec();
    cs.sort_by_key(|(d, _)| *d);
    let Some((d, a)) = cs.last().cloned() else { return Vec::new() };
    if cs.len() < 2 || d == 0 {
        return Vec::new();
    }
    let p = K::characteristic(ctx);
    let (mut pe, mut n) = (1u32, d);
    if p > 0 {
        while (n as u64).is_multiple_of(p) {
            n /= p as u32;
            pe *= p as u32;
        }
    }
    let target = cs.iter().find(|(k, _)| *k == d - pe).map(|(_, c)| c.clone()).unwrap_or_else(|| K::zero(ctx));
    let denom = a.mul(&K::from_i64(ctx, n as i64));
    let Some(mut c) = target.div(&denom) else { return Vec::new() };
    let mut e = pe;
    while e > 1 {
        match c.pth_root() {
            Ok(Some(r)) => c = r,
            _ => return Vec::new(),
        }
        e /= p as u32;
    }
    let expected: Vec<(u32, K)> = (0..=d)
        .filter_map(|k| {
            let b = binomial_in::<K>(ctx, d as u64, k as u64).mul(&c.pow((d - k) as u64)).mul(&a);
            (!b.is_zero()).then_some((k, b))
        })
        .collect();
    let actual: Vec<(u32, K)> = cs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if expected == actual && !c.is_zero() {
        vec![c]
    } else {
        Vec::new()
    }
}

/// σ for the given side: 1 when β < 1, otherwise sup{1, s} after straightening the first edge by
/// substitutions u_b ← u_b − c·u_a^m of the free u-variable. `budget` bounds the straightening
/// steps and `prepare_budget` every preparation run.
pub fn sigma<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, side: u8, budget: usize, prepare_budget: usize) -> Result<SigmaResult<K>> {
    if frame.u.len() != 2 {
        return Err(Error::Domain("σ needs a two-dimensional u-block".into()));
    }
    let prep = prepare(gens, frame, prepare_budget)?;
    let mut lower_bound = prep.status == PrepStatus::BudgetExhausted;
    let (mut gens, mut frame) = (prep.gens, prep.frame);
    let mut delta = prep.polyhedron;
    let mut subs = Vec::new();
    let fnum = face_numbers(&delta, side)?;
    if fnum.beta < QInf::int(1) {
        return Ok(SigmaResult { value: QInf::int(1), lower_bound, substitutions: subs, gens, frame, polyhedron: delta });
    }
    let vars = gens[0].vars().clone();
    let ctx = gens[0].ctx().clone();
    let b = blocks(&frame, &vars)?;
    let (ia, ib) = if side == 1 { (b.u[0], b.u[1]) } else { (b.u[1], b.u[0]) };
    let mut steps = 0usize;
    loop {
        let fnum = face_numbers(&delta, side)?;
        let m = match &fnum.s {
            QInf::Fin(s) if s.is_integer() && *s >= <BigRational as One>::one() => s.to_integer().to_u32(),
            _ => None,
        };
        let Some(m) = m else { break };
        let (alpha, beta) = (fnum.alpha.finite().cloned().expect("finite"), fnum.beta.finite().cloned().expect("finite"));
        let level = &alpha + &beta * BigRational::from_integer(BigInt::from(m));
        // Face polynomials P_{i,B}(T) with u_a = 1 and T = u_b.
        let mut candidates: Vec<K> = Vec::new();
        for g in &gens {
            let nu = g.order().expect("nonzero generator");
            let mut by_b: std::collections::BTreeMap<Vec<u32>, Vec<(u32, K)>> = Default::default();
            for (e, c) in g.terms() {
                let bb: u32 = b.y.iter().map(|&j| e[j]).sum();
                if bb >= nu {
                    continue;
                }
                let lhs = BigRational::from_integer(BigInt::from(e[ia] + m * e[ib]));
                if lhs == &level * BigRational::from_integer(BigInt::from(nu - bb)) {
                    let key: Vec<u32> = b.y.iter().map(|&j| e[j]).collect();
                    by_b.entry(key).or_default().push((e[ib], c.clone()));
                }
            }
            for coeffs in by_b.values() {
                for c in face_constants(&ctx, coeffs) {
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
        }
        let mut improved = false;
        for c in candidates {
            if steps >= budget {
                lower_bound = true;
                break;
            }
            let mut mono = vec![0u32; vars.len()];
            mono[ia] = m;
            let expr = Polynomial::var_at(&ctx, &vars, ib).sub(&Polynomial::monomial(&ctx, &vars, mono, c.clone()));
            let tg: Vec<Polynomial<K>> = gens.iter().map(|g| g.substitute_idx(ib, &expr)).collect();
            let mut tf = frame.clone();
            for bc in tf.boundary.iter_mut() {
                bc.generator = bc.generator.substitute_idx(ib, &expr);
            }
            steps += 1;
            let p = prepare(&tg, &tf, prepare_budget)?;
            let new_s = face_numbers(&p.polyhedron, side)?.s;
            if new_s > fnum.s && delta.contains_polyhedron(&p.polyhedron) {
                lower_bound |= p.status == PrepStatus::BudgetExhausted;
                subs.push((vars[ib].clone(), expr.to_string()));
                gens = p.gens;
                frame = p.frame;
                delta = p.polyhedron;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    let value = max1(face_numbers(&delta, side)?.s);
    Ok(SigmaResult { value, lower_bound, substitutions: subs, gens, frame, polyhedron: delta })
}

/// In_δ: per generator, the terms of minimal |B| + |A|/δ.
pub fn in_delta<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, delta: &QInf) -> Result<Vec<Polynomial<K>>> {
    let d = match delta {
        QInf::Fin(d) if d > &<BigRational as Zero>::zero() => d.clone(),
        QInf::Fin(_) => return Err(Error::Domain("δ must be positive".into())),
        QInf::Inf => return Err(Error::Domain("In_δ is undefined for δ = ∞".into())),
    };
    let mut out = Vec::new();
    for g in gens {
        let b = blocks(frame, g.vars())?;
        let val = |e: &[u32]| -> BigRational {
            let bb: u32 = b.y.iter().map(|&j| e[j]).sum();
            let aa: u32 = b.u.iter().map(|&j| e[j]).sum();
            BigRational::from_integer(BigInt::from(bb)) + BigRational::from_integer(BigInt::from(aa)) / &d
        };
        let min = g.terms().map(|(e, _)| val(e)).min().ok_or_else(|| Error::Domain("zero generator".into()))?;
        out.push(Polynomial::from_terms(
            g.ctx(),
            g.vars(),
            g.terms().filter(|(e, _)| val(e) == min).map(|(e, c)| (e.clone(), c.clone())),
        ));
    }
    Ok(out)
}

/// Convenience: face numbers of Δ(f;u;y) without preparation.
pub fn face_numbers_of<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, side: u8) -> Result<FaceNumbers> {
    face_numbers(&polyhedron_of(gens, frame)?, side)
}
