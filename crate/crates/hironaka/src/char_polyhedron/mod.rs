//! Projected polyhedra Δ(f;u;y), vertex initial forms, solvability and normalization, the
//! vertex-preparation loop, and the face invariants δ, α, β, γ, s, σ.

pub mod faces;
pub mod hull;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::linalg::{rref, solve};
use crate::exact_algebra::{multi_indices, multi_indices_exact, Exp, Field, Polynomial};
use crate::local_frame::Frame;

pub use faces::{face_numbers, face_numbers_of, in_delta, sigma, FaceNumbers, SigmaResult, DEFAULT_SIGMA_BUDGET};
pub use hull::{brute_force_vertices, FPolyhedron, Point};

/// Index data of a frame relative to the ambient variable list.
#[derive(Debug, Clone)]
pub(crate) struct Blocks {
    pub u: Vec<usize>,
    pub y: Vec<usize>,
}

pub(crate) fn blocks<K: Field>(frame: &Frame<K>, vars: &[String]) -> Result<Blocks> {
    frame.validate(vars)?;
    Ok(Blocks { u: frame.u_idx(vars), y: frame.y_idx(vars) })
}

fn sum_at(e: &[u32], idx: &[usize]) -> u32 {
    idx.iter().map(|&i| e[i]).sum()
}

/// The points A/(ν − |B|) of one generator.
pub fn generator_points<K: Field>(g: &Polynomial<K>, frame: &Frame<K>) -> Result<Vec<Vec<BigRational>>> {
    let b = blocks(frame, g.vars())?;
    let nu = g.order().ok_or_else(|| Error::Domain("zero generator".into()))?;
    if g.terms().all(|(e, _)| sum_at(e, &b.u) > 0) {
        return Err(Error::Domain(format!("generator {} lies in the ideal of the u-block", g)));
    }
    let mut out = Vec::new();
    for (e, _) in g.terms() {
        let bb = sum_at(e, &b.y);
        if bb < nu {
            let den = BigInt::from(nu - bb);
            out.push(b.u.iter().map(|&i| BigRational::new(BigInt::from(e[i]), den.clone())).collect());
        }
    }
    Ok(out)
}

/// Δ(f; u; y) for a list of generators.
pub fn polyhedron_of<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>) -> Result<FPolyhedron> {
    let mut pts = Vec::new();
    for g in gens {
        pts.extend(generator_points(g, frame)?);
    }
    Ok(FPolyhedron::from_points(frame.u.len(), pts))
}

/// Per-generator initial forms at a vertex: F_i(Y) plus the terms whose point is the vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexInitial<K: Field> {
    pub vertex: Point,
    pub forms: Vec<Polynomial<K>>,
    /// F_i: the terms with A = 0 and |B| = ν_i.
    pub leading: Vec<Polynomial<K>>,
    pub orders: Vec<u32>,
    pub u: Vec<usize>,
    pub y: Vec<usize>,
}

fn term_point(e: &[u32], b: &Blocks, nu: u32) -> Option<Vec<BigRational>> {
    let bb = sum_at(e, &b.y);
    if bb >= nu {
        return None;
    }
    let den = BigInt::from(nu - bb);
    Some(b.u.iter().map(|&i| BigRational::new(BigInt::from(e[i]), den.clone())).collect())
}

pub fn vertex_initial<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, v: &Point) -> Result<VertexInitial<K>> {
    let delta = polyhedron_of(gens, frame)?;
    if !delta.has_vertex(&v.0) {
        return Err(Error::Domain(format!("{} is not a vertex of {}", v, delta)));
    }
    vertex_initial_unchecked(gens, frame, v)
}

fn vertex_initial_unchecked<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, v: &Point) -> Result<VertexInitial<K>> {
    let g0 = gens.first().ok_or_else(|| Error::Input("no generators".into()))?;
    let b = blocks(frame, g0.vars())?;
    let mut forms = Vec::new();
    let mut leading = Vec::new();
    let mut orders = Vec::new();
    for g in gens {
        let nu = g.order().ok_or_else(|| Error::Domain("zero generator".into()))?;
        let mut form = Polynomial::zero(g.ctx(), g.vars());
        let mut lead = Polynomial::zero(g.ctx(), g.vars());
        for (e, c) in g.terms() {
            let a = sum_at(e, &b.u);
            let bb = sum_at(e, &b.y);
            if a == 0 && bb == nu {
                form.add_term(e.clone(), c.clone());
                lead.add_term(e.clone(), c.clone());
            } else if let Some(p) = term_point(e, &b, nu) {
                if p == v.0 {
                    form.add_term(e.clone(), c.clone());
                }
            }
        }
        forms.push(form);
        leading.push(lead);
        orders.push(nu);
    }
    Ok(VertexInitial { vertex: v.clone(), forms, leading, orders, u: b.u, y: b.y })
}

/// Outcome of the solvability test at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solvability<K: Field> {
    Solvable(Vec<K>),
    NotIntegral,
    NotSolvable,
    /// The coefficient equations leave a positive-dimensional solution space over an infinite
    /// field and no candidate could be certified.
    Undetermined,
}

impl<K: Field> Solvability<K> {
    pub fn witness(&self) -> Option<&Vec<K>> {
        match self {
            Solvability::Solvable(l) => Some(l),
            _ => None,
        }
    }
}

/// Integer exponents of an integral vertex.
pub fn integral_exponents(v: &Point) -> Option<Vec<u32>> {
    v.0.iter().map(|q| if q.is_integer() { q.to_integer().to_u32() } else { None }).collect()
}

/// Searches λ with in_v(f_i) = F_i(Y + λU^v) for all i.
pub fn is_solvable<K: Field>(vi: &VertexInitial<K>) -> Solvability<K> {
    if integral_exponents(&vi.vertex).is_none() {
        return Solvability::NotIntegral;
    }
    let Some(g0) = vi.forms.first() else { return Solvability::NotSolvable };
    let ctx = g0.ctx().clone();
    let n = g0.nvars();
    let r = vi.y.len();
    let one = K::one(&ctx);
    // Dehomogenize: set every u-variable to 1.
    let deh: Vec<Polynomial<K>> = vi
        .forms
        .iter()
        .map(|f| vi.u.iter().fold(f.clone(), |acc, &i| acc.evaluate_var(i, &one)))
        .collect();
    let p = K::characteristic(&ctx);
    let maxd = vi.orders.iter().copied().max().unwrap_or(0);
    let mut levels = vec![1u32];
    if p > 0 {
        let mut q = p;
        while q <= maxd as u64 {
            levels.push(q as u32);
            q *= p;
        }
    }
    // Linear equations Σ_j a_j λ_j = b collected from additive combinations of derivatives.
    let mut eq_rows: Vec<Vec<K>> = Vec::new();
    let mut eq_rhs: Vec<K> = Vec::new();
    let lift = |a: &Exp| -> Exp {
        let mut full = vec![0u32; n];
        for (k, &j) in vi.y.iter().enumerate() {
            full[j] = a[k];
        }
        full
    };
    for &q in &levels {
        let mut mons: Vec<Exp> = multi_indices_exact(r, q);
        let is_add = |m: &Exp| m.iter().filter(|&&k| k > 0).count() == 1;
        mons.sort_by_key(|m| is_add(m));
        let split = mons.iter().position(is_add).unwrap_or(mons.len());
        let mut rows: Vec<Vec<K>> = Vec::new();
        for (i, f) in vi.leading.iter().enumerate() {
            let nu = vi.orders[i];
            if nu < q {
                continue;
            }
            for a in multi_indices_exact(r, nu - q) {
                let full = lift(&a);
                let d = f.hasse_derivative(&full);
                let rhs = deh[i].hasse_derivative(&full).constant_term();
                let mut row: Vec<K> = mons.iter().map(|m| d.coeff(&lift(m))).collect();
                row.push(rhs);
                rows.push(row);
            }
        }
        let pivots = rref(&mut rows, mons.len() + 1);
        for (row, &pc) in rows.iter().zip(&pivots) {
            if pc == mons.len() {
                return Solvability::NotSolvable;
            }
            if pc >= split {
                let mut coeffs = vec![K::zero(&ctx); r];
                for (c, m) in row.iter().zip(&mons).skip(split) {
                    let j = m.iter().position(|&k| k > 0).expect("additive monomial");
                    coeffs[j] = c.clone();
                }
                let rhs = row[mons.len()].clone();
                let cc: Vec<Vec<K>> = coeffs.iter().map(|c| c.frobenius_coords(q as u64)).collect();
                let bc = rhs.frobenius_coords(q as u64);
                for l in 0..bc.len() {
                    eq_rows.push(cc.iter().map(|c| c[l].clone()).collect());
                    eq_rhs.push(bc[l].clone());
                }
            }
        }
    }
    let Some((x0, kernel)) = solve(&ctx, &eq_rows, &eq_rhs, r) else {
        return Solvability::NotSolvable;
    };
    let check = |lam: &[K]| -> bool {
        vi.leading.iter().zip(&deh).all(|(f, g)| {
            let mut h = f.clone();
            for (k, &j) in vi.y.iter().enumerate() {
                if lam[k].is_zero() {
                    continue;
                }
                let shifted = Polynomial::var_at(&ctx, f.vars(), j).add(&Polynomial::constant(&ctx, f.vars(), lam[k].clone()));
                h = h.substitute_idx(j, &shifted);
            }
            h == *g
        })
    };
    if kernel.is_empty() {
        return if check(&x0) { Solvability::Solvable(x0) } else { Solvability::NotSolvable };
    }
    match K::elements(&ctx) {
        Some(elems) if (elems.len() as f64).powi(kernel.len() as i32) <= 65536.0 => {
            let total = elems.len().pow(kernel.len() as u32);
            for idx in 0..total {
                let mut lam = x0.clone();
                let mut t = idx;
                for kv in &kernel {
                    let c = &elems[t % elems.len()];
                    t /= elems.len();
                    for (l, kc) in lam.iter_mut().zip(kv) {
                        *l = l.add(&c.mul(kc));
                    }
                }
                if check(&lam) {
                    return Solvability::Solvable(lam);
                }
            }
            Solvability::NotSolvable
        }
        _ => Solvability::Undetermined,
    }
}

/// Leading exponent (lexicographically largest y-exponent) of a form in the y-variables.
fn leading_y_exponent<K: Field>(f: &Polynomial<K>, y: &[usize]) -> Option<(Vec<u32>, K)> {
    f.terms().map(|(e, c)| (y.iter().map(|&j| e[j]).collect::<Vec<u32>>(), c.clone())).max_by(|a, b| a.0.cmp(&b.0))
}

/// Normalizes the system at a vertex: terms of in_v(f_i) whose y-exponent lies in the leading
/// exponent set of earlier initial forms are removed by subtracting multiples of earlier f_j.
pub fn normalize_at_vertex<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, v: &Point) -> Result<Vec<Polynomial<K>>> {
    if gens.len() <= 1 {
        return Ok(gens.to_vec());
    }
    let b = blocks(frame, gens[0].vars())?;
    let mut out = gens.to_vec();
    for i in 1..out.len() {
        let mut guard = 0;
        'again: loop {
            guard += 1;
            if guard > 256 {
                return Err(Error::Scope("normalization did not stabilize within 256 reductions".into()));
            }
            let vi = vertex_initial_unchecked(&out, frame, v)?;
            let les: Vec<Option<(Vec<u32>, K)>> = (0..i).map(|j| leading_y_exponent(&vi.leading[j], &b.y)).collect();
            for (e, c) in vi.forms[i].terms() {
                let ye: Vec<u32> = b.y.iter().map(|&j| e[j]).collect();
                for (j, le) in les.iter().enumerate() {
                    let Some((le, lc)) = le else { continue };
                    if ye.iter().zip(le).all(|(a, b)| a >= b) {
                        let mut mono = e.clone();
                        for (k, &yj) in b.y.iter().enumerate() {
                            mono[yj] -= le[k];
                        }
                        let factor = c.div(lc).expect("nonzero leading coefficient");
                        let sub = out[j].mul_monomial(&mono, &factor);
                        out[i] = out[i].sub(&sub);
                        continue 'again;
                    }
                }
            }
            break;
        }
    }
    Ok(out)
}

/// Termination status of vertex preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepStatus {
    Minimal,
    BudgetExhausted,
    Empty,
}

/// One solved vertex with the applied translation.
#[derive(Debug, Clone, Serialize)]
pub struct SolvedVertex {
    pub vertex: Point,
    /// λ_j rendered in the coefficient field.
    pub lambda: Vec<String>,
    /// Applied substitutions y_j ← y_j − λ_j u^v (the new y_j equals old y_j + λ_j u^v).
    pub substitutions: Vec<(String, String)>,
}

/// Annotation for a vertex that runs off along an axis.
#[derive(Debug, Clone, Serialize)]
pub struct EscapeNote {
    pub message: String,
    pub axis: usize,
    /// The non-escaping vertices: a certified lower bound for the characteristic polyhedron.
    pub stable: FPolyhedron,
}

#[derive(Debug, Clone)]
pub struct PreparationResult<K: Field> {
    pub gens: Vec<Polynomial<K>>,
    pub frame: Frame<K>,
    pub polyhedron: FPolyhedron,
    pub log: Vec<SolvedVertex>,
    pub status: PrepStatus,
    pub escape: Option<EscapeNote>,
    /// Vertices whose solvability could not be decided.
    pub undetermined: Vec<Point>,
    /// Substitutions (variable, replacement) applied in order, for transporting other data.
    pub substitutions: Vec<(String, Polynomial<K>)>,
}

pub const DEFAULT_PREPARE_BUDGET: usize = 64;

/// Preparation stops as budget-exhausted before a translation would push a generator past this
/// total degree.
pub const MAX_PREPARED_DEGREE: u32 = 1 << 16;

/// The translation y_j ← y_j − λ_j u^v as substitutions.
pub fn translation_substitutions<K: Field>(
    ctx: &K::Ctx,
    vars: &Arc<Vec<String>>,
    u: &[usize],
    y: &[usize],
    v: &[u32],
    lambda: &[K],
) -> Vec<(usize, Polynomial<K>)> {
    let mut mono = vec![0u32; vars.len()];
    for (k, &i) in u.iter().enumerate() {
        mono[i] = v[k];
    }
    y.iter()
        .zip(lambda)
        .filter(|(_, l)| !l.is_zero())
        .map(|(&j, l)| {
            let yj = Polynomial::var_at(ctx, vars, j);
            (j, yj.sub(&Polynomial::monomial(ctx, vars, mono.clone(), l.clone())))
        })
        .collect()
}

/// Vertex preparation: repeatedly normalize and solve the lexicographically smallest uncertified
/// vertex, translating y, until every vertex is prepared or the budget of solving steps is spent.
pub fn prepare<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>, budget: usize) -> Result<PreparationResult<K>> {
    let g0 = gens.first().ok_or_else(|| Error::Input("no generators".into()))?;
    let (ctx, vars) = (g0.ctx().clone(), g0.vars().clone());
    let b = blocks(frame, &vars)?;
    let mut gens = gens.to_vec();
    let mut frame = frame.clone();
    let mut log: Vec<SolvedVertex> = Vec::new();
    let mut certified: BTreeSet<Point> = BTreeSet::new();
    let mut undetermined: BTreeSet<Point> = BTreeSet::new();
    let mut substitutions = Vec::new();
    let mut escape: Option<EscapeNote> = None;
    let mut history: Vec<(Point, FPolyhedron)> = Vec::new();
    loop {
        let delta = polyhedron_of(&gens, &frame)?;
        if delta.is_empty() {
            return Ok(PreparationResult {
                gens,
                frame,
                polyhedron: delta,
                log,
                status: PrepStatus::Empty,
                escape,
                undetermined: undetermined.into_iter().collect(),
                substitutions,
            });
        }
        let Some(v) = delta.vertices.iter().filter(|v| !certified.contains(*v)).min().cloned() else {
            return Ok(PreparationResult {
                gens,
                frame,
                polyhedron: delta,
                log,
                status: PrepStatus::Minimal,
                escape,
                undetermined: undetermined.into_iter().collect(),
                substitutions,
            });
        };
        let normalized = normalize_at_vertex(&gens, &frame, &v)?;
        if normalized != gens {
            gens = normalized;
            continue;
        }
        let vi = vertex_initial_unchecked(&gens, &frame, &v)?;
        match is_solvable(&vi) {
            Solvability::Solvable(lambda) => {
                let exps = integral_exponents(&v).expect("solvable vertices are integral");
                let shift = exps.iter().map(|&k| k as u64).sum::<u64>().max(1);
                let degree = gens
                    .iter()
                    .flat_map(|g| g.terms())
                    .map(|(e, _)| b.u.iter().map(|&i| e[i] as u64).sum::<u64>() + b.y.iter().map(|&j| e[j] as u64).sum::<u64>() * shift)
                    .max()
                    .unwrap_or(0);
                if log.len() >= budget || degree > MAX_PREPARED_DEGREE as u64 {
                    return Ok(PreparationResult {
                        gens,
                        frame,
                        polyhedron: delta,
                        log,
                        status: PrepStatus::BudgetExhausted,
                        escape,
                        undetermined: undetermined.into_iter().collect(),
                        substitutions,
                    });
                }
                let subs = translation_substitutions(&ctx, &vars, &b.u, &b.y, &exps, &lambda);
                let mut rendered = Vec::new();
                for (j, expr) in &subs {
                    for g in gens.iter_mut() {
                        *g = g.substitute_idx(*j, expr);
                    }
                    for bc in frame.boundary.iter_mut() {
                        bc.generator = bc.generator.substitute_idx(*j, expr);
                    }
                    rendered.push((vars[*j].clone(), expr.to_string()));
                    substitutions.push((vars[*j].clone(), expr.clone()));
                }
                log.push(SolvedVertex {
                    vertex: v.clone(),
                    lambda: lambda.iter().map(|l| Polynomial::constant(&ctx, &Arc::new(Vec::new()), l.clone()).to_string()).collect(),
                    substitutions: rendered,
                });
                certified.clear();
                let rest = FPolyhedron::from_points(
                    delta.dim,
                    delta.vertices.iter().filter(|w| **w != v).map(|w| w.0.clone()),
                );
                history.push((v.clone(), rest));
                if escape.is_none() {
                    escape = detect_escape(&history);
                }
            }
            Solvability::Undetermined => {
                undetermined.insert(v.clone());
                certified.insert(v);
            }
            _ => {
                certified.insert(v);
            }
        }
    }
}

/// Three consecutive solves on one axis with growing coordinate and unchanged other vertices.
fn detect_escape(history: &[(Point, FPolyhedron)]) -> Option<EscapeNote> {
    if history.len() < 3 {
        return None;
    }
    let last = &history[history.len() - 3..];
    let axis_of = |p: &Point| -> Option<usize> {
        let nz: Vec<usize> = (0..p.0.len()).filter(|&i| !Zero::is_zero(&p.0[i])).collect();
        if nz.len() == 1 {
            Some(nz[0])
        } else {
            None
        }
    };
    let axis = axis_of(&last[0].0)?;
    for w in last.windows(2) {
        if axis_of(&w[1].0) != Some(axis) || w[1].0 .0[axis] <= w[0].0 .0[axis] || w[1].1 != w[0].1 {
            return None;
        }
    }
    Some(EscapeNote {
        message: "axis vertex escapes to infinity".to_string(),
        axis,
        stable: last[2].1.clone(),
    })
}

/// All multi-indices of length n with |A| ≤ d (re-exported for callers building derivative sets).
pub fn derivative_indices(n: usize, d: u32) -> Vec<Exp> {
    multi_indices(n, d)
}
