//! Points above the origin of a blown-up chart that still need work: singular points of every
//! order up to the parent multiplicity and points where X is not n.c. with the boundary.

use std::collections::BTreeSet;

use crate::blowup_engine::{Center, ChartState};
use crate::error::{Error, Result};
use crate::exact_algebra::linalg::rref;
use crate::exact_algebra::{Exp, Field, Polynomial};

/// Coefficients (ascending) of a polynomial involving only the variable `v`.
fn univariate_coeffs<K: Field>(p: &Polynomial<K>, v: usize) -> Vec<K> {
    let d = p.degree_in(v).unwrap_or(0) as usize;
    let mut c = vec![K::zero(p.ctx()); d + 1];
    for (e, a) in p.terms() {
        c[e[v] as usize] = a.clone();
    }
    c
}

/// Divides Σ c_i x^i by (x − a) when a is a root.
fn deflate<K: Field>(ctx: &K::Ctx, c: &[K], a: &K) -> Option<Vec<K>> {
    let n = c.len();
    if n < 2 {
        return None;
    }
    let mut q = vec![K::zero(ctx); n - 1];
    let mut carry = K::zero(ctx);
    for i in (1..n).rev() {
        carry = c[i].add(&carry.mul(a));
        q[i - 1] = carry.clone();
    }
    let rem = c[0].add(&carry.mul(a));
    rem.is_zero().then_some(q)
}

/// All roots of the univariate polynomial; a scope error when some root lies outside the field
/// or the field cannot enumerate roots.
fn all_roots<K: Field>(ctx: &K::Ctx, coeffs: &[K]) -> Result<Vec<K>> {
    let mut c: Vec<K> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut roots = Vec::new();
    let k = c.iter().take_while(|x| x.is_zero()).count();
    if k > 0 {
        roots.push(K::zero(ctx));
        c.drain(..k);
    }
    if c.len() <= 1 {
        return Ok(roots);
    }
    let found = K::roots(ctx, &c).ok_or_else(|| Error::Scope("cannot enumerate roots of a point condition over this field".into()))?;
    for a in found {
        while let Some(q) = deflate(ctx, &c, &a) {
            c = q;
        }
        if !roots.contains(&a) {
            roots.push(a);
        }
    }
    if c.len() > 1 {
        return Err(Error::Scope("a point above the center is not rational over the base field".into()));
    }
    Ok(roots)
}

fn trim<K: Field>(mut c: Vec<K>) -> Vec<K> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Monic gcd of two univariate coefficient vectors (ascending); the empty vector is zero.
fn univariate_gcd<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let lead = b.last().expect("nonzero").clone();
        while a.len() >= b.len() {
            let q = a.last().expect("nonzero").div(&lead).expect("nonzero leading coefficient");
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] = a[i + shift].sub(&q.mul(c));
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(lead) = a.last().cloned() {
        let inv = lead.inv().expect("nonzero leading coefficient");
        a = a.iter().map(|c| c.mul(&inv)).collect();
    }
    a
}

/// Univariate elements in `v` of the linear span of `polys` (eliminating every monomial that
/// involves another variable).
fn eliminate_to<K: Field>(polys: &[Polynomial<K>], v: usize) -> Vec<Polynomial<K>> {
    let Some(p0) = polys.first() else { return Vec::new() };
    let (ctx, vars) = (p0.ctx().clone(), p0.vars().clone());
    let pure = |e: &Exp| e.iter().enumerate().all(|(i, &k)| i == v || k == 0);
    let mut mons: Vec<Exp> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect::<BTreeSet<_>>().into_iter().collect();
    mons.sort_by_key(|e| (pure(e), std::cmp::Reverse(e.iter().sum::<u32>())));
    let mut rows: Vec<Vec<K>> = polys.iter().map(|p| mons.iter().map(|m| p.coeff(m)).collect()).collect();
    rref(&mut rows, mons.len());
    rows.iter()
        .filter(|row| mons.iter().zip(row.iter()).all(|(m, c)| c.is_zero() || pure(m)))
        .map(|row| Polynomial::from_terms(&ctx, &vars, mons.iter().zip(row).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c.clone()))))
        .filter(|p| !p.is_zero())
        .collect()
}

/// Rational solutions of the system near which `free` variables vary; positive-dimensional
/// solution families are represented by their point with the remaining free variables zero.
fn solve_system<K: Field>(polys: Vec<Polynomial<K>>, free: &BTreeSet<usize>, assign: &mut Vec<K>, out: &mut Vec<Vec<K>>) -> Result<()> {
    let r: Vec<Polynomial<K>> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if r.iter().any(|p| p.is_constant()) {
        return Ok(());
    }
    if r.is_empty() {
        out.push(assign.clone());
        return Ok(());
    }
    let ctx = r[0].ctx().clone();
    let mut best: Option<(usize, Vec<K>)> = None;
    for &v in free {
        let mut g: Option<Vec<K>> = None;
        for p in eliminate_to(&r, v) {
            let c = univariate_coeffs(&p, v);
            g = Some(match g {
                None => c,
                Some(h) => univariate_gcd(&h, &c),
            });
        }
        let Some(g) = g else { continue };
        if g.len() <= 1 {
            return Ok(());
        }
        if best.as_ref().is_none_or(|(_, b)| g.len() < b.len()) {
            best = Some((v, g));
        }
    }
    let Some((v, g)) = best else {
        return Err(Error::Scope(format!(
            "points above the center are not determined by univariate conditions: {}",
            r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        )));
    };
    let roots = all_roots(&ctx, &g)?;
    let mut rest = free.clone();
    rest.remove(&v);
    for a in roots {
        assign[v] = a.clone();
        let next: Vec<Polynomial<K>> = r.iter().map(|q| q.evaluate_var(v, &a)).collect();
        solve_system(next, &rest, assign, out)?;
    }
    assign[v] = K::zero(&ctx);
    Ok(())
}

/// Parses a boundary generator of the form α·v + β (α ≠ 0) as (v, −β/α).
fn affine_coordinate<K: Field>(g: &Polynomial<K>) -> Option<(usize, K)> {
    if g.total_degree() != Some(1) {
        return None;
    }
    let mut var = None;
    let mut alpha = None;
    for (e, c) in g.terms() {
        if e.iter().sum::<u32>() == 1 {
            if var.is_some() {
                return None;
            }
            var = e.iter().position(|&k| k == 1);
            alpha = Some(c.clone());
        }
    }
    let (v, a) = (var?, alpha?);
    Some((v, g.constant_term().neg().div(&a)?))
}

/// Tracked points of `chart` above the origin of `parent`: the chart origin when it lies on X,
/// and every point of the fibre that is singular (of any order up to the parent order) or where X
/// is not n.c. with the boundary. Points that also lie in an earlier chart of the same center are
/// left to that chart.
pub fn points_above<K: Field>(parent: &ChartState<K>, chart: &ChartState<K>, center: &Center) -> Result<Vec<Vec<K>>> {
    if chart.gens.len() != 1 {
        return Err(Error::Scope("point tracking supports hypersurfaces (one generator) only".into()));
    }
    let lineage = chart.lineage.as_ref().ok_or_else(|| Error::Input("the chart is not a blow-up".into()))?;
    let vars = chart.vars().clone();
    let n = vars.len();
    let ctx = chart.ctx().clone();
    let c = vars.iter().position(|v| *v == lineage.chart_var).expect("chart variable");
    let t = center.indices(&vars);
    let f = &chart.gens[0];
    let nu_parent = parent.nu_star()?.max_order();

    let mut systems: Vec<Vec<Polynomial<K>>> = Vec::new();
    for k in 2..=nu_parent.max(2) {
        systems.push(f.absolute_derivatives(k - 1));
    }
    let mut affine: Vec<(usize, K)> = Vec::new();
    for b in &chart.frame.boundary {
        let (v, a) = affine_coordinate(&b.generator).ok_or_else(|| Error::Scope(format!("boundary component V({}) is not a coordinate hyperplane", b.generator)))?;
        if v != c {
            affine.push((v, a));
        }
    }
    for mask in 0u32..(1 << affine.len()) {
        let chosen: Vec<&(usize, K)> = affine.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x).collect();
        let in_j: BTreeSet<usize> = chosen.iter().map(|(v, _)| *v).chain([c]).collect();
        let mut eqs = vec![f.clone()];
        for (v, a) in &chosen {
            eqs.push(Polynomial::var_at(&ctx, &vars, *v).sub(&Polynomial::constant(&ctx, &vars, a.clone())));
        }
        for w in 0..n {
            if !in_j.contains(&w) {
                let mut e = vec![0u32; n];
                e[w] = 1;
                eqs.push(f.hasse_derivative(&e));
            }
        }
        eqs.push(f.coefficient_hasse(1));
        systems.push(eqs);
    }

    let fixed: Vec<usize> = std::iter::once(c).chain((0..n).filter(|i| !t.contains(i))).collect();
    let free: BTreeSet<usize> = (0..n).filter(|i| !fixed.contains(i)).collect();
    let mut found: Vec<Vec<K>> = Vec::new();
    if f.constant_term().is_zero() {
        found.push(vec![K::zero(&ctx); n]);
    }
    for sys in systems {
        let restricted: Vec<Polynomial<K>> = sys.iter().map(|p| p.restrict_zero(&fixed)).collect();
        let mut assign = vec![K::zero(&ctx); n];
        solve_system(restricted, &free, &mut assign, &mut found)?;
    }
    let pos = center.vars.iter().position(|v| *v == lineage.chart_var).expect("chart variable in center");
    let earlier: Vec<usize> = center.vars[..pos].iter().map(|v| vars.iter().position(|w| w == v).expect("variable")).collect();
    let mut out: Vec<Vec<K>> = Vec::new();
    for p in found {
        if earlier.iter().any(|&i| !p[i].is_zero()) || out.contains(&p) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}
