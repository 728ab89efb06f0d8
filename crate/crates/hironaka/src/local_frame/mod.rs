//! Chart-local coordinate frames (u; y), boundary components with old/new statuses, initial
//! forms, the ν* invariant, ridge and directrix, and the ideal J^O.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::linalg::{nullspace, rref};
use crate::exact_algebra::{is_power_of, multi_indices_exact, Exp, Field, Polynomial};

/// Old/new status of a boundary component relative to the current Hilbert–Samuel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Old,
    New,
}

/// A regular boundary divisor V(generator) with its history data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComponent<K: Field> {
    pub generator: Polynomial<K>,
    pub status: Status,
    pub birth: u32,
}

impl<K: Field> BoundaryComponent<K> {
    pub fn new(generator: Polynomial<K>, status: Status, birth: u32) -> Self {
        BoundaryComponent { generator, status, birth }
    }

    pub fn through_origin(&self) -> bool {
        self.generator.constant_term().is_zero()
    }

    /// The variable index when the generator is a scalar multiple of a single coordinate.
    pub fn coordinate(&self) -> Option<usize> {
        let mut it = self.generator.terms();
        let (e, _) = it.next()?;
        if it.next().is_some() || e.iter().sum::<u32>() != 1 {
            return None;
        }
        e.iter().position(|&k| k == 1)
    }
}

/// A frame: the ambient variables split into a u-block and a y-block, plus the boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame<K: Field> {
    pub u: Vec<String>,
    pub y: Vec<String>,
    pub boundary: Vec<BoundaryComponent<K>>,
}

impl<K: Field> Frame<K> {
    /// Checks that u and y partition the ambient variables.
    pub fn validate(&self, vars: &[String]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in self.u.iter().chain(&self.y) {
            if !vars.contains(v) {
                return Err(Error::Input(format!("frame variable {} is not an ambient variable", v)));
            }
            if !seen.insert(v.clone()) {
                return Err(Error::Input(format!("variable {} appears twice in the frame", v)));
            }
        }
        if seen.len() != vars.len() {
            return Err(Error::Input("frame blocks must cover all ambient variables".into()));
        }
        for b in &self.boundary {
            if b.through_origin() && b.generator.order() != Some(1) {
                return Err(Error::Input(format!("boundary generator {} is not regular at the origin", b.generator)));
            }
        }
        Ok(())
    }

    pub fn u_idx(&self, vars: &[String]) -> Vec<usize> {
        self.u.iter().map(|n| vars.iter().position(|v| v == n).expect("frame variable")).collect()
    }

    pub fn y_idx(&self, vars: &[String]) -> Vec<usize> {
        self.y.iter().map(|n| vars.iter().position(|v| v == n).expect("frame variable")).collect()
    }

    /// 𝓑(x): components through the origin.
    pub fn at_origin(&self) -> Vec<&BoundaryComponent<K>> {
        self.boundary.iter().filter(|b| b.through_origin()).collect()
    }

    /// O(x): old components through the origin.
    pub fn old_at_origin(&self) -> Vec<&BoundaryComponent<K>> {
        self.boundary.iter().filter(|b| b.through_origin() && b.status == Status::Old).collect()
    }

    /// N(x): new components through the origin.
    pub fn new_at_origin(&self) -> Vec<&BoundaryComponent<K>> {
        self.boundary.iter().filter(|b| b.through_origin() && b.status == Status::New).collect()
    }
}

/// The ν* invariant: a nondecreasing list of orders, conceptually padded with ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NuStar(pub Vec<u32>);

impl NuStar {
    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    /// Lexicographic comparison with ∞ padding (a proper prefix is larger).
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        other.0.len().cmp(&self.0.len())
    }

    /// Componentwise comparison with ∞ padding; `None` when incomparable.
    pub fn product_cmp(&self, other: &Self) -> Option<Ordering> {
        let n = self.0.len().max(other.0.len());
        let get = |v: &Vec<u32>, i: usize| v.get(i).copied().map(u64::from).unwrap_or(u64::MAX);
        let (mut le, mut ge) = (true, true);
        for i in 0..n {
            let (a, b) = (get(&self.0, i), get(&other.0, i));
            le &= a <= b;
            ge &= a >= b;
        }
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn max_order(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl PartialOrd for NuStar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NuStar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

/// Initial form of `f` with respect to the named variables (all variables when empty).
pub fn initial_form<K: Field>(f: &Polynomial<K>, at: &[&str]) -> Result<Polynomial<K>> {
    f.initial_form(at)
}

/// Sorted orders at the origin of the generators.
pub fn nu_star<K: Field>(gens: &[Polynomial<K>]) -> Result<NuStar> {
    if gens.is_empty() {
        return Err(Error::Input("ν* of an empty generator list".into()));
    }
    let mut v = Vec::with_capacity(gens.len());
    for g in gens {
        match g.order() {
            None => return Err(Error::Input("zero generator".into())),
            Some(d) => v.push(d),
        }
    }
    v.sort_unstable();
    Ok(NuStar(v))
}

/// Initial forms at the origin of all generators.
pub fn initial_forms<K: Field>(gens: &[Polynomial<K>]) -> Result<Vec<Polynomial<K>>> {
    gens.iter().map(|g| g.initial_form(&[])).collect()
}

/// Necessary standard-basis conditions: orders nondecreasing along the list and no initial form
/// lying in the span of monomial multiples of earlier initial forms of the same degree.
pub fn standard_basis_check<K: Field>(gens: &[Polynomial<K>]) -> Result<()> {
    let ins = initial_forms(gens)?;
    let ords: Vec<u32> = ins.iter().map(|f| f.order().expect("nonzero")).collect();
    if ords.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Input(format!("generator orders {:?} are not nondecreasing", ords)));
    }
    for i in 1..ins.len() {
        let d = ords[i];
        let n = ins[i].nvars();
        let mut spanning: Vec<Polynomial<K>> = Vec::new();
        for j in 0..i {
            for m in multi_indices_exact(n, d - ords[j]) {
                spanning.push(ins[j].mul_monomial(&m, &K::one(ins[j].ctx())));
            }
        }
        let mons: Vec<Exp> = multi_indices_exact(n, d);
        let vec_of = |p: &Polynomial<K>| mons.iter().map(|m| p.coeff(m)).collect::<Vec<K>>();
        let mut rows: Vec<Vec<K>> = spanning.iter().map(vec_of).collect();
        let r0 = rref(&mut rows.clone(), mons.len()).len();
        rows.push(vec_of(&ins[i]));
        let r1 = rref(&mut rows, mons.len()).len();
        if r0 == r1 {
            return Err(Error::Input(format!(
                "initial form of generator {} is redundant; the list is not a standard basis",
                i + 1
            )));
        }
    }
    Ok(())
}

/// The product φ of the old boundary generators through the origin.
pub fn old_boundary_product<K: Field>(frame: &Frame<K>, ctx: &K::Ctx, vars: &Arc<Vec<String>>) -> Polynomial<K> {
    frame
        .old_at_origin()
        .iter()
        .fold(Polynomial::one(ctx, vars), |acc, b| acc.mul(&b.generator))
}

/// J^O = J · I_{O(x)}: every generator multiplied by φ.
pub fn compose_with_old_boundary<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>) -> Vec<Polynomial<K>> {
    match gens.first() {
        None => Vec::new(),
        Some(g0) => {
            let phi = old_boundary_product(frame, g0.ctx(), g0.vars());
            gens.iter().map(|g| g.mul(&phi)).collect()
        }
    }
}

/// Directrix data: `r` independent linear forms (coefficient rows over the ambient variables,
/// in reduced row echelon form) and e = n − r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directrix<K: Field> {
    pub n: usize,
    pub r: usize,
    pub e: usize,
    pub forms: Vec<Vec<K>>,
    pub pivots: Vec<usize>,
    /// The translation test F(X + T·w) = F(X) passed for a basis of the complement.
    pub certified: bool,
}

impl<K: Field> Directrix<K> {
    pub fn form_polys(&self, ctx: &K::Ctx, vars: &Arc<Vec<String>>) -> Vec<Polynomial<K>> {
        self.forms.iter().map(|row| linear_form(ctx, vars, row)).collect()
    }
}

pub fn linear_form<K: Field>(ctx: &K::Ctx, vars: &Arc<Vec<String>>, row: &[K]) -> Polynomial<K> {
    let mut p = Polynomial::zero(ctx, vars);
    for (i, c) in row.iter().enumerate() {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        p.add_term(e, c.clone());
    }
    p
}

fn check_homogeneous<K: Field>(forms: &[Polynomial<K>]) -> Result<()> {
    for f in forms {
        let all: Vec<usize> = (0..f.nvars()).collect();
        if !f.is_homogeneous_in(&all) {
            return Err(Error::Input(format!("{} is not homogeneous", f)));
        }
    }
    Ok(())
}

/// Levels q at which additive forms are searched: 1, p, p², … up to the maximal degree.
fn levels<K: Field>(ctx: &K::Ctx, max_deg: u32) -> Vec<u32> {
    let p = K::characteristic(ctx);
    let mut out = vec![1u32];
    if p > 0 {
        let mut q = p;
        while q <= max_deg as u64 {
            out.push(q as u32);
            q *= p;
        }
    }
    out
}

/// Generators of the translation-stabilizer ideal of the cone: D_B F_i for |B| < deg F_i.
fn stabilizer_generators<K: Field>(forms: &[Polynomial<K>]) -> Vec<Polynomial<K>> {
    let mut out = Vec::new();
    for f in forms {
        let Some(d) = f.order() else { continue };
        for k in 0..d {
            for b in multi_indices_exact(f.nvars(), k) {
                let g = f.hasse_derivative(&b);
                if !g.is_zero() {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Additive elements of degree q in the stabilizer ideal, as coefficient rows on (X_j^q)_j.
fn additive_at_level<K: Field>(gens: &[Polynomial<K>], n: usize, q: u32) -> Vec<Vec<K>> {
    let Some(first) = gens.first() else { return Vec::new() };
    let ctx = first.ctx().clone();
    let mut mons: Vec<Exp> = multi_indices_exact(n, q);
    let is_add = |m: &Exp| m.iter().filter(|&&k| k > 0).count() == 1;
    mons.sort_by_key(|m| is_add(m));
    let split = mons.iter().position(is_add).unwrap_or(mons.len());
    let mut rows = Vec::new();
    for g in gens {
        let dg = g.order().expect("nonzero");
        if dg > q {
            continue;
        }
        for m in multi_indices_exact(n, q - dg) {
            let h = g.mul_monomial(&m, &K::one(&ctx));
            rows.push(mons.iter().map(|mm| h.coeff(mm)).collect::<Vec<K>>());
        }
    }
    let pivots = rref(&mut rows, mons.len());
    let mut out = Vec::new();
    for (row, &pc) in rows.iter().zip(&pivots) {
        if pc >= split {
            let mut v = vec![K::zero(&ctx); n];
            for (c, m) in row.iter().zip(&mons).skip(split) {
                let j = m.iter().position(|&k| k > 0).expect("additive monomial");
                v[j] = c.clone();
            }
            out.push(v);
        }
    }
    out
}

fn additive_poly<K: Field>(ctx: &K::Ctx, vars: &Arc<Vec<String>>, coeffs: &[K], q: u32) -> Polynomial<K> {
    let mut p = Polynomial::zero(ctx, vars);
    for (j, c) in coeffs.iter().enumerate() {
        let mut e = vec![0; vars.len()];
        e[j] = q;
        p.add_term(e, c.clone());
    }
    p
}

/// Additive generators of the ridge ideal, grouped by level and reduced against Frobenius
/// images of lower levels.
pub fn compute_ridge<K: Field>(initials: &[Polynomial<K>]) -> Result<Vec<Polynomial<K>>> {
    check_homogeneous(initials)?;
    let Some(first) = initials.first() else { return Ok(Vec::new()) };
    let ctx = first.ctx().clone();
    let vars = first.vars().clone();
    let n = vars.len();
    let stab = stabilizer_generators(initials);
    let maxd = initials.iter().filter_map(|f| f.order()).max().unwrap_or(0);
    let mut kept: Vec<(u32, Vec<K>)> = Vec::new();
    let mut out = Vec::new();
    for q in levels::<K>(&ctx, maxd) {
        let found = additive_at_level(&stab, n, q);
        // Frobenius images of lower-level generators already account for part of this level.
        let mut base: Vec<Vec<K>> = kept
            .iter()
            .map(|(q0, v)| v.iter().map(|c| c.pow((q / q0) as u64)).collect())
            .collect();
        let mut rank = rref(&mut base.clone(), n).len();
        for v in found {
            base.push(v.clone());
            let r = rref(&mut base.clone(), n).len();
            if r > rank {
                rank = r;
                out.push(additive_poly(&ctx, &vars, &v, q));
                kept.push((q, v));
            } else {
                base.pop();
            }
        }
    }
    Ok(out)
}

/// Directrix of the cone defined by homogeneous forms: the linear forms ℓ with
/// σ = Σ_l b_l ℓ_l^q for every additive ridge generator σ, reduced, plus a translation certificate.
pub fn compute_directrix<K: Field>(initials: &[Polynomial<K>]) -> Result<Directrix<K>> {
    check_homogeneous(initials)?;
    let Some(first) = initials.first() else {
        return Err(Error::Input("directrix of an empty list".into()));
    };
    let ctx = first.ctx().clone();
    let vars = first.vars().clone();
    let n = vars.len();
    let stab = stabilizer_generators(initials);
    let maxd = initials.iter().filter_map(|f| f.order()).max().unwrap_or(0);
    let mut rows: Vec<Vec<K>> = Vec::new();
    for q in levels::<K>(&ctx, maxd) {
        for v in additive_at_level(&stab, n, q) {
            let coords: Vec<Vec<K>> = v.iter().map(|c| c.frobenius_coords(q as u64)).collect();
            let k = K::frobenius_basis(&ctx, q as u64).len();
            for l in 0..k {
                rows.push(coords.iter().map(|cs| cs[l].clone()).collect());
            }
        }
    }
    Ok(finish_directrix(&ctx, &vars, rows, initials))
}

fn finish_directrix<K: Field>(
    ctx: &K::Ctx,
    vars: &Arc<Vec<String>>,
    mut rows: Vec<Vec<K>>,
    initials: &[Polynomial<K>],
) -> Directrix<K> {
    let n = vars.len();
    let pivots = rref(&mut rows, n);
    let r = pivots.len();
    let certified = translation_certificate(ctx, vars, &rows, initials);
    Directrix { n, r, e: n - r, forms: rows, pivots, certified }
}

/// Checks F(X + T·w) = F(X) for a basis w of the common kernel of the forms.
pub fn translation_certificate<K: Field>(
    ctx: &K::Ctx,
    vars: &Arc<Vec<String>>,
    forms: &[Vec<K>],
    initials: &[Polynomial<K>],
) -> bool {
    let n = vars.len();
    let kernel = nullspace(ctx, forms, n);
    kernel.iter().all(|w| initials.iter().all(|f| invariant_under(f, w)))
}

/// True when F(X + T·w) = F(X) identically in X and T.
pub fn invariant_under<K: Field>(f: &Polynomial<K>, w: &[K]) -> bool {
    let ctx = f.ctx().clone();
    let mut ext: Vec<String> = f.vars().as_ref().clone();
    let tname = format!("__T{}", ext.len());
    ext.push(tname);
    let ext = Arc::new(ext);
    let g = f.with_vars(&ext).expect("superset of variables");
    let t = Polynomial::var_at(&ctx, &ext, ext.len() - 1);
    let mut h = g.clone();
    for (j, c) in w.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let xj = Polynomial::var_at(&ctx, &ext, j);
        h = h.substitute_idx(j, &xj.add(&t.scale(c)));
    }
    h == g
}

/// True when F(X + w) = F(X) for a point w (used by exhaustive oracles).
pub fn invariant_under_point<K: Field>(f: &Polynomial<K>, w: &[K]) -> bool {
    let mut h = f.clone();
    for (j, c) in w.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let xj = Polynomial::var_at(f.ctx(), f.vars(), j);
        h = h.substitute_idx(j, &xj.add(&Polynomial::constant(f.ctx(), f.vars(), c.clone())));
    }
    h == *f
}

/// Directrix of J^O: the directrix forms of J together with the initial forms of the old
/// boundary generators, re-reduced.
pub fn directrix_of_jo<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>) -> Result<Directrix<K>> {
    let ins = initial_forms(gens)?;
    let d = compute_directrix(&ins)?;
    let g0 = &gens[0];
    let (ctx, vars) = (g0.ctx().clone(), g0.vars().clone());
    let mut rows = d.forms.clone();
    for b in frame.old_at_origin() {
        let lin = b.generator.homogeneous_part_idx(&(0..vars.len()).collect::<Vec<_>>(), 1);
        let mut row = vec![K::zero(&ctx); vars.len()];
        for (e, c) in lin.terms() {
            let j = e.iter().position(|&k| k == 1).expect("linear term");
            row[j] = c.clone();
        }
        rows.push(row);
    }
    let jo = compose_with_old_boundary(gens, frame);
    let ins_o = initial_forms(&jo)?;
    Ok(finish_directrix(&ctx, &vars, rows, &ins_o))
}

/// A frame adapted to a directrix: after a linear change of coordinates (keeping variable names)
/// the directrix forms are the y-variables.
#[derive(Debug, Clone)]
pub struct AdaptedFrame<K: Field> {
    pub gens: Vec<Polynomial<K>>,
    pub frame: Frame<K>,
    /// Substitutions x_c ← expr applied, in order.
    pub substitutions: Vec<(String, Polynomial<K>)>,
}

/// Turns the directrix forms into coordinates. Pivots are chosen on variables in `y_pref` first,
/// then on variables that are not boundary coordinates, so boundary generators stay coordinates
/// whenever possible; variables in `u_first` are placed first in the u-block (in the given order).
pub fn adapt_frame<K: Field>(
    gens: &[Polynomial<K>],
    boundary: &[BoundaryComponent<K>],
    forms: &[Vec<K>],
    y_pref: &[usize],
    u_first: &[usize],
) -> Result<AdaptedFrame<K>> {
    let g0 = gens.first().ok_or_else(|| Error::Input("no generators".into()))?;
    let (ctx, vars) = (g0.ctx().clone(), g0.vars().clone());
    let n = vars.len();
    let boundary_vars: BTreeSet<usize> = boundary.iter().filter_map(|b| b.coordinate()).collect();
    let mut order: Vec<usize> = y_pref.iter().copied().filter(|i| !u_first.contains(i)).collect();
    for i in 0..n {
        if !boundary_vars.contains(&i) && !order.contains(&i) && !u_first.contains(&i) {
            order.push(i);
        }
    }
    for i in 0..n {
        if !order.contains(&i) && !u_first.contains(&i) {
            order.push(i);
        }
    }
    order.extend(u_first.iter().rev().copied());
    let mut permuted: Vec<Vec<K>> = forms.iter().map(|row| order.iter().map(|&i| row[i].clone()).collect()).collect();
    let piv = rref(&mut permuted, n);
    let pivot_vars: Vec<usize> = piv.iter().map(|&c| order[c]).collect();
    let mut substitutions = Vec::new();
    let mut new_gens = gens.to_vec();
    let mut new_boundary = boundary.to_vec();
    for (row, &pv) in permuted.iter().zip(&pivot_vars) {
        // form = x_pv + Σ a_j x_j; the new coordinate named x_pv is the form itself.
        let mut expr = Polynomial::var_at(&ctx, &vars, pv);
        let mut trivial = true;
        for (c, &j) in row.iter().zip(&order) {
            if j != pv && !c.is_zero() {
                trivial = false;
                expr = expr.sub(&Polynomial::var_at(&ctx, &vars, j).scale(c));
            }
        }
        if trivial {
            continue;
        }
        for g in new_gens.iter_mut() {
            *g = g.substitute_idx(pv, &expr);
        }
        for b in new_boundary.iter_mut() {
            b.generator = b.generator.substitute_idx(pv, &expr);
        }
        substitutions.push((vars[pv].clone(), expr));
    }
    let mut u: Vec<String> = u_first.iter().filter(|i| !pivot_vars.contains(i)).map(|&i| vars[i].clone()).collect();
    for i in 0..n {
        if !pivot_vars.contains(&i) && !u_first.contains(&i) {
            u.push(vars[i].clone());
        }
    }
    let mut ys: Vec<usize> = pivot_vars.clone();
    ys.sort_unstable();
    let y = ys.iter().map(|&i| vars[i].clone()).collect();
    Ok(AdaptedFrame { gens: new_gens, frame: Frame { u, y, boundary: new_boundary }, substitutions })
}

/// Checks that a linear form row is a coordinate form (single nonzero entry).
pub fn is_coordinate_form<K: Field>(row: &[K]) -> bool {
    row.iter().filter(|c| !c.is_zero()).count() == 1
}

/// True when q is 1 or a power of the characteristic.
pub fn is_level<K: Field>(ctx: &K::Ctx, q: u64) -> bool {
    let p = K::characteristic(ctx);
    if p == 0 {
        q == 1
    } else {
        is_power_of(q, p)
    }
}

#[cfg(test)]
mod tests;
