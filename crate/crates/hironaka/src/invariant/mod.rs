//! The resolution invariant ι = (ι₀, ι_c, ι_poly): case classification of a point, the three
//! parts of the invariant and their lexicographic comparison.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::blowup_engine::{permissible_check, Center, ChartState};
use crate::char_polyhedron::{face_numbers, prepare, sigma, PrepStatus, DEFAULT_PREPARE_BUDGET, DEFAULT_SIGMA_BUDGET};
use crate::error::{Error, Result};
use crate::exact_algebra::{Field, Polynomial, QInf};
use crate::local_frame::{
    adapt_frame, compose_with_old_boundary, compute_directrix, directrix_of_jo, initial_forms, nu_star, standard_basis_check, Frame,
    NuStar, Status,
};

/// ι₀ = (H proxy ν*, |O|, e, e^O).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Iota0 {
    pub hs: NuStar,
    pub old: usize,
    pub e: usize,
    pub eo: usize,
}

/// ι_c; `hs = None` is the sentinel below every ν*, used by the fixed tuples of Cases I, II, IV, V.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IotaC {
    pub hs: Option<NuStar>,
    pub old: usize,
    pub e: usize,
    pub eo: usize,
    pub delta: QInf,
    pub delta_o: QInf,
}

impl IotaC {
    pub fn zeros() -> Self {
        IotaC { hs: None, old: 0, e: 0, eo: 0, delta: QInf::zero(), delta_o: QInf::zero() }
    }
    pub fn permissible() -> Self {
        IotaC { delta_o: QInf::int(1), ..IotaC::zeros() }
    }
}

/// ι_poly = (β, γ, σ, α) for e^O = 2, (0, 0, 0, δ^O) for e^O = 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IotaPoly(pub [QInf; 4]);

impl IotaPoly {
    pub fn zeros() -> Self {
        IotaPoly([QInf::zero(), QInf::zero(), QInf::zero(), QInf::zero()])
    }
    pub fn infinite() -> Self {
        IotaPoly([QInf::Inf, QInf::Inf, QInf::Inf, QInf::Inf])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
}

/// The full invariant at a chart origin together with the data needed to audit it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IotaInvariant {
    pub iota0: Iota0,
    pub iotac: IotaC,
    pub iotapoly: IotaPoly,
    pub case: CaseTag,
    /// Condition (5.1): no component of the stratum through the origin is a strict transform of
    /// the stratum present when the current log Hilbert–Samuel value appeared.
    pub condition51: bool,
    /// Maximal generator order N of J^O at the origin; finite δ, α, β, γ of ι_poly lie in (1/N!)ℤ.
    pub grid: u32,
    /// Maximal generator order of I_C composed with its old boundary in Case III (grid of the ι_c δ-entries).
    pub grid_c: Option<u32>,
    /// The side(s) used for ι_poly when e^O = 2.
    pub sides: Vec<u8>,
    /// Some entry is only a certified bound (preparation or straightening budget ran out).
    pub lower_bound: bool,
    pub notes: Vec<String>,
}

/// Result of [`compare_iota`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IotaOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl From<Ordering> for IotaOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => IotaOrdering::Less,
            Ordering::Equal => IotaOrdering::Equal,
            Ordering::Greater => IotaOrdering::Greater,
        }
    }
}

/// Budgets and overrides for the invariant computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaOptions {
    pub prepare_budget: usize,
    pub sigma_budget: usize,
    /// Forces the side used for ι_poly when e^O = 2.
    pub side: Option<u8>,
}

impl Default for IotaOptions {
    fn default() -> Self {
        IotaOptions { prepare_budget: DEFAULT_PREPARE_BUDGET, sigma_budget: DEFAULT_SIGMA_BUDGET, side: None }
    }
}

pub const FINISHED_NOTE: &str = "resolution process is finished";

/// ι₀ at the chart origin.
pub fn iota0<K: Field>(gens: &[Polynomial<K>], frame: &Frame<K>) -> Result<Iota0> {
    standard_basis_check(gens)?;
    let hs = nu_star(gens)?;
    let e = compute_directrix(&initial_forms(gens)?)?.e;
    let eo = directrix_of_jo(gens, frame)?.e;
    Ok(Iota0 { hs, old: frame.old_at_origin().len(), e, eo })
}

/// Case of the origin given the components of C through it (coordinate variable sets).
pub fn classify_case<K: Field>(chart: &ChartState<K>, c: &[Vec<String>]) -> Result<CaseTag> {
    let n = chart.vars().len();
    let hs = chart.nu_star()?;
    if hs.max_order() == 1 && chart.frame.old_at_origin().is_empty() {
        return Ok(CaseTag::V);
    }
    match c {
        [] => Ok(CaseTag::IV),
        [one] if one.len() == n => Ok(CaseTag::I),
        [one] if one.len() + 1 == n => {
            let center = Center::new(chart.vars(), one)?;
            if permissible_check(chart, &center)?.ok {
                Ok(CaseTag::II)
            } else {
                Ok(CaseTag::III)
            }
        }
        [one] if one.len() + 2 == n => Ok(CaseTag::V),
        [_] => Err(Error::Scope(format!("a stratum component of dimension {} is outside the surface setting", n - c[0].len()))),
        _ => Ok(CaseTag::III),
    }
}

/// Generators of the intersection of the coordinate primes ⟨vars⟩: the squarefree monomials on
/// the minimal sets of variables meeting every component, sorted by degree.
pub fn coordinate_intersection<K: Field>(chart: &ChartState<K>, c: &[Vec<String>]) -> Result<Vec<Polynomial<K>>> {
    let vars = chart.vars().clone();
    let n = vars.len();
    if n > 16 {
        return Err(Error::Scope("too many variables for a monomial intersection".into()));
    }
    let sets: Vec<BTreeSet<usize>> = c
        .iter()
        .map(|comp| comp.iter().map(|v| vars.iter().position(|w| w == v).ok_or_else(|| Error::Input(format!("unknown variable {}", v)))).collect())
        .collect::<Result<_>>()?;
    let mut hitting: Vec<u32> = (1u32..(1 << n)).filter(|m| sets.iter().all(|s| s.iter().any(|&i| m & (1 << i) != 0))).collect();
    hitting.sort_by_key(|m| (m.count_ones(), *m));
    let mut minimal: Vec<u32> = Vec::new();
    for m in hitting {
        if minimal.iter().all(|&k| k & m != k) {
            minimal.push(m);
        }
    }
    let one = K::one(chart.ctx());
    Ok(minimal
        .into_iter()
        .map(|m| Polynomial::monomial(chart.ctx(), &vars, (0..n).map(|i| (m >> i) & 1).collect(), one.clone()))
        .collect())
}

/// δ of the prepared polyhedron in the frame adapted to the given directrix forms; ∞ when e = 0.
fn adapted_delta<K: Field>(
    gens: &[Polynomial<K>],
    frame: &Frame<K>,
    forms: &[Vec<K>],
    e: usize,
    u_first: &[usize],
    budget: usize,
) -> Result<(QInf, bool, crate::char_polyhedron::PreparationResult<K>)> {
    let adapted = adapt_frame(gens, &frame.boundary, forms, &[], u_first)?;
    let prep = prepare(&adapted.gens, &adapted.frame, budget)?;
    let delta = if e == 0 { QInf::Inf } else { prep.polyhedron.delta() };
    let lb = prep.status == PrepStatus::BudgetExhausted;
    Ok((delta, lb, prep))
}

/// ι_c for the given case; in Case III `c` lists the components of C through the origin.
pub fn iota_c<K: Field>(chart: &ChartState<K>, case: CaseTag, c: &[Vec<String>], opts: &IotaOptions) -> Result<(IotaC, Option<u32>, bool)> {
    match case {
        CaseTag::IV | CaseTag::V => return Ok((IotaC::zeros(), None, false)),
        CaseTag::I | CaseTag::II => return Ok((IotaC::permissible(), None, false)),
        CaseTag::III => {}
    }
    let ic = coordinate_intersection(chart, c)?;
    let hs = nu_star(&ic)?;
    let vars = chart.vars().clone();
    let contains_c = |g: &Polynomial<K>| {
        c.iter().all(|comp| {
            let idx: Vec<usize> = comp.iter().map(|v| vars.iter().position(|w| w == v).expect("variable")).collect();
            g.restrict_zero(&idx).is_zero()
        })
    };
    let mut frame_c = chart.frame.clone();
    frame_c.boundary.retain(|b| !(b.status == Status::Old && b.through_origin() && !contains_c(&b.generator)));
    let old = frame_c.old_at_origin().len();
    let grid = hs.max_order() + old as u32;
    let dir = compute_directrix(&initial_forms(&ic)?)?;
    let dir_o = directrix_of_jo(&ic, &frame_c)?;
    let (delta, lb1, _) = adapted_delta(&ic, &frame_c, &dir.forms, dir.e, &[], opts.prepare_budget)?;
    let jo = compose_with_old_boundary(&ic, &frame_c);
    let (delta_o, lb2, _) = adapted_delta(&jo, &frame_c, &dir_o.forms, dir_o.e, &[], opts.prepare_budget)?;
    Ok((IotaC { hs: Some(hs), old, e: dir.e, eo: dir_o.e, delta, delta_o }, Some(grid), lb1 || lb2))
}

/// ι_poly together with the sides used and a lower-bound flag.
pub fn iota_poly<K: Field>(chart: &ChartState<K>, condition51: bool, opts: &IotaOptions) -> Result<(IotaPoly, Vec<u8>, bool)> {
    let gens = &chart.gens;
    let frame = &chart.frame;
    let dir_o = directrix_of_jo(gens, frame)?;
    let jo = compose_with_old_boundary(gens, frame);
    match dir_o.e {
        0 => Ok((IotaPoly::zeros(), vec![], false)),
        1 => {
            let (d, lb, _) = adapted_delta(&jo, frame, &dir_o.forms, 1, &[], opts.prepare_budget)?;
            Ok((IotaPoly([QInf::zero(), QInf::zero(), QInf::zero(), d]), vec![], lb))
        }
        2 => {
            let vars = chart.vars().clone();
            let new: Vec<usize> = frame.new_at_origin().iter().filter_map(|b| b.coordinate()).collect();
            if frame.new_at_origin().len() != new.len() {
                return Err(Error::Scope("a new boundary component through the origin is not a coordinate hyperplane".into()));
            }
            if !condition51 || new.is_empty() {
                return Ok((IotaPoly::infinite(), vec![], false));
            }
            if new.len() > 2 {
                return Err(Error::Scope("more than two new boundary components through the origin".into()));
            }
            let adapted = adapt_frame(&jo, &frame.boundary, &dir_o.forms, &[], &new)?;
            if adapted.frame.u.len() != 2 {
                return Err(Error::Scope("ι_poly needs a two-dimensional u-block".into()));
            }
            if new.iter().any(|&i| !adapted.frame.u.contains(&vars[i])) {
                return Err(Error::Scope("a new boundary coordinate is not a u-coordinate of the adapted frame".into()));
            }
            let sides: Vec<u8> = match opts.side {
                Some(s) => vec![s],
                None if new.len() == 2 => vec![1, 2],
                None => vec![1],
            };
            let prep = prepare(&adapted.gens, &adapted.frame, opts.prepare_budget)?;
            let mut lb = prep.status == PrepStatus::BudgetExhausted;
            let mut best: Option<IotaPoly> = None;
            for &side in &sides {
                let f = face_numbers(&prep.polyhedron, side)?;
                let s = sigma(&prep.gens, &prep.frame, side, opts.sigma_budget, opts.prepare_budget)?;
                lb |= s.lower_bound;
                let t = IotaPoly([f.beta, f.gamma, s.value, f.alpha]);
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
            Ok((best.expect("at least one side"), sides, lb))
        }
        e => Err(Error::Scope(format!("e^O = {} is outside the surface setting", e))),
    }
}

/// The full invariant at the chart origin. `c` lists the components of C (the strict transform of
/// the stratum present when the current log Hilbert–Samuel value appeared) through the origin.
pub fn compute_iota<K: Field>(chart: &ChartState<K>, c: &[Vec<String>], opts: &IotaOptions) -> Result<IotaInvariant> {
    let i0 = iota0(&chart.gens, &chart.frame)?;
    let case = classify_case(chart, c)?;
    let grid = i0.hs.max_order() + i0.old as u32;
    let condition51 = c.is_empty();
    let mut notes = Vec::new();
    if case == CaseTag::V {
        notes.push(FINISHED_NOTE.to_string());
        return Ok(IotaInvariant {
            iota0: i0,
            iotac: IotaC::zeros(),
            iotapoly: IotaPoly::zeros(),
            case,
            condition51,
            grid,
            grid_c: None,
            sides: vec![],
            lower_bound: false,
            notes,
        });
    }
    let (iotac, grid_c, lb1) = iota_c(chart, case, c, opts)?;
    let (iotapoly, sides, lb2) = iota_poly(chart, condition51, opts)?;
    if lb1 || lb2 {
        notes.push("a budget ran out; affected entries are certified bounds".to_string());
    }
    Ok(IotaInvariant { iota0: i0, iotac, iotapoly, case, condition51, grid, grid_c, sides, lower_bound: lb1 || lb2, notes })
}

fn hs_cmp(a: &NuStar, b: &NuStar) -> IotaOrdering {
    match a.product_cmp(b) {
        Some(o) => o.into(),
        None => IotaOrdering::Incomparable,
    }
}

fn opt_hs_cmp(a: &Option<NuStar>, b: &Option<NuStar>) -> IotaOrdering {
    match (a, b) {
        (None, None) => IotaOrdering::Equal,
        (None, Some(_)) => IotaOrdering::Less,
        (Some(_), None) => IotaOrdering::Greater,
        (Some(x), Some(y)) => hs_cmp(x, y),
    }
}

/// Lexicographic comparison of (ι₀, ι_c, ι_poly), with the product order on the H-slots.
pub fn compare_iota(a: &IotaInvariant, b: &IotaInvariant) -> IotaOrdering {
    let steps: Vec<IotaOrdering> = vec![
        hs_cmp(&a.iota0.hs, &b.iota0.hs),
        a.iota0.old.cmp(&b.iota0.old).into(),
        a.iota0.e.cmp(&b.iota0.e).into(),
        a.iota0.eo.cmp(&b.iota0.eo).into(),
        opt_hs_cmp(&a.iotac.hs, &b.iotac.hs),
        a.iotac.old.cmp(&b.iotac.old).into(),
        a.iotac.e.cmp(&b.iotac.e).into(),
        a.iotac.eo.cmp(&b.iotac.eo).into(),
        a.iotac.delta.cmp(&b.iotac.delta).into(),
        a.iotac.delta_o.cmp(&b.iotac.delta_o).into(),
        a.iotapoly.cmp(&b.iotapoly).into(),
    ];
    steps.into_iter().find(|o| *o != IotaOrdering::Equal).unwrap_or(IotaOrdering::Equal)
}

#[cfg(test)]
mod tests;
