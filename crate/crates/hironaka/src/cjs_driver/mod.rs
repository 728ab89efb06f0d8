//! The resolution loop on a tree of affine charts: maximal strata with labels, center selection
//! by smallest label, blow-ups, tracking of the points above each center, the invariant at every
//! tracked point, the monotonicity check and trace export.

pub mod export;
pub mod points;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::blowup_engine::{blow_up_chart, classify_point, locate_point, permissible_check, Center, CenterKind, ChartState, Classification, Component};
use crate::error::{Error, Result};
use crate::exact_algebra::linalg::{rank, rref};
use crate::exact_algebra::{Exp, Field, Polynomial};
use crate::invariant::{compare_iota, compute_iota, IotaInvariant, IotaOptions, IotaOrdering};
use crate::local_frame::NuStar;

pub use export::{to_dot, ChartDoc, ChildDoc, EventDoc, TraceDoc};
pub use points::points_above;

/// How stratum components lying in a new exceptional divisor receive labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// Components dominating a labelled center inherit its label.
    #[default]
    Inherit,
    /// Every component in the exceptional divisor gets the current step as label.
    NoInherit,
}

/// Which stratum components at the root count as the original stratum C.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OriginalSpec {
    #[default]
    All,
    None,
    List(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolveOptions {
    /// Maximal number of blow-ups along one lineage.
    pub max_steps: u32,
    /// Maximal total number of blow-up events.
    pub max_events: usize,
    pub labelling: LabelMode,
    pub original: OriginalSpec,
    pub iota: IotaOptions,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { max_steps: 64, max_events: 4096, labelling: LabelMode::Inherit, original: OriginalSpec::All, iota: IotaOptions::default() }
    }
}

/// The maximal locus of the log Hilbert–Samuel function near the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stratum {
    /// X itself: the origin is regular and no old component passes through it.
    WholeX,
    /// Coordinate subspaces V(vars) through the origin, sorted.
    Components(Vec<Vec<String>>),
}

/// Systems whose zero sets cover the stratum. For ν > 1 there is one system: absolute Hasse
/// derivatives of order below ν and the old boundary generators through the origin. For ν = 1 the
/// stratum is the locus where X is not n.c. with the boundary, cut by the old generators: for
/// every set J of boundary hyperplanes through the origin, f, the coordinates of J, the partials
/// of f in the remaining variables and along the p-basis, and the old generators.
pub fn stratum_systems<K: Field>(chart: &ChartState<K>) -> Result<Vec<Vec<Polynomial<K>>>> {
    let base = stratum_equations(chart)?;
    let f = &chart.gens[0];
    if f.order() != Some(1) {
        return Ok(vec![base]);
    }
    let n = f.nvars();
    let mut coords = Vec::new();
    for b in chart.frame.boundary.iter().filter(|b| b.through_origin()) {
        let j = b.coordinate().ok_or_else(|| Error::Scope(format!("boundary component V({}) is not a coordinate hyperplane", b.generator)))?;
        if !coords.contains(&j) {
            coords.push(j);
        }
    }
    let mut systems = Vec::new();
    for mask in 0u32..(1 << coords.len()) {
        let j: Vec<usize> = coords.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect();
        let mut eqs = base.clone();
        eqs.extend(j.iter().map(|&v| Polynomial::var_at(f.ctx(), f.vars(), v)));
        for w in (0..n).filter(|w| !j.contains(w)) {
            let mut e = vec![0u32; n];
            e[w] = 1;
            eqs.push(f.hasse_derivative(&e));
        }
        eqs.push(f.coefficient_hasse(1));
        systems.push(eqs);
    }
    Ok(systems)
}

/// The polynomials cutting out the stratum of ν: absolute Hasse derivatives (in the variables and
/// along the p-basis of the field) of order below ν and the old boundary generators through the
/// origin.
pub fn stratum_equations<K: Field>(chart: &ChartState<K>) -> Result<Vec<Polynomial<K>>> {
    if chart.gens.len() != 1 {
        return Err(Error::Scope("stratum extraction supports hypersurfaces (one generator) only".into()));
    }
    let f = &chart.gens[0];
    let nu = f.order().ok_or_else(|| Error::Input("zero generator".into()))?;
    let mut s = f.absolute_derivatives(nu.saturating_sub(1));
    s.extend(chart.frame.old_at_origin().iter().map(|b| b.generator.clone()));
    Ok(s)
}

fn is_locally_monomial<K: Field>(p: &Polynomial<K>) -> Option<Exp> {
    let content = p.monomial_content();
    let unit = p.divide_monomial(&content)?;
    (!unit.constant_term().is_zero()).then_some(content)
}

/// Elements of the linear span of `polys` with distinct lowest monomials (reduced echelon form
/// with columns ordered by ascending degree).
fn echelon<K: Field>(polys: &[Polynomial<K>]) -> Vec<Polynomial<K>> {
    let Some(p0) = polys.first() else { return Vec::new() };
    let (ctx, vars) = (p0.ctx().clone(), p0.vars().clone());
    let mut mons: Vec<Exp> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect::<BTreeSet<_>>().into_iter().collect();
    mons.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    let mut rows: Vec<Vec<K>> = polys.iter().map(|p| mons.iter().map(|m| p.coeff(m)).collect()).collect();
    rref(&mut rows, mons.len());
    rows.iter()
        .map(|row| Polynomial::from_terms(&ctx, &vars, mons.iter().zip(row).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c.clone()))))
        .collect()
}

/// Finds a locally monomial element (a monomial times a unit) of small support among `polys`,
/// their linear span, or the span of their products with one variable.
fn monomial_element<K: Field>(polys: &[Polynomial<K>], free: &[usize]) -> Option<Exp> {
    let best = |cands: &[Polynomial<K>]| -> Option<Exp> {
        cands
            .iter()
            .filter_map(is_locally_monomial)
            .filter(|c| c.iter().any(|&k| k > 0))
            .min_by_key(|c| (c.iter().filter(|&&k| k > 0).count(), c.clone()))
    };
    if let Some(c) = best(polys) {
        return Some(c);
    }
    if let Some(c) = best(&echelon(polys)) {
        return Some(c);
    }
    let mut ext: Vec<Polynomial<K>> = polys.to_vec();
    for p in polys {
        for &v in free {
            let mut e = vec![0u32; p.nvars()];
            e[v] = 1;
            ext.push(p.mul_monomial(&e, &K::one(p.ctx())));
        }
    }
    best(&echelon(&ext))
}

fn stratum_rec<K: Field>(s: &[Polynomial<K>], fixed: &BTreeSet<usize>, n: usize, out: &mut Vec<BTreeSet<usize>>) -> Result<()> {
    let idx: Vec<usize> = fixed.iter().copied().collect();
    let r: Vec<Polynomial<K>> = s.iter().map(|p| p.restrict_zero(&idx)).filter(|p| !p.is_zero()).collect();
    if r.is_empty() {
        out.push(fixed.clone());
        return Ok(());
    }
    if r.iter().any(|p| !p.constant_term().is_zero()) {
        return Ok(());
    }
    let free: Vec<usize> = (0..n).filter(|i| !fixed.contains(i)).collect();
    if free.len() <= 1 {
        out.push((0..n).collect());
        return Ok(());
    }
    let content = monomial_element(&r, &free).ok_or_else(|| {
        Error::Scope(format!(
            "the stratum is not a union of coordinate subspaces near the origin (equations {}); supply the components manually",
            r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        ))
    })?;
    for (v, &k) in content.iter().enumerate() {
        if k > 0 {
            let mut next = fixed.clone();
            next.insert(v);
            stratum_rec(s, &next, n, out)?;
        }
    }
    Ok(())
}

/// Components of the maximal log Hilbert–Samuel stratum through the origin.
pub fn max_stratum<K: Field>(chart: &ChartState<K>) -> Result<Stratum> {
    if !chart.origin_on_x() {
        return Err(Error::Input("the origin does not lie on X".into()));
    }
    let nu = chart.nu_star()?;
    if nu.max_order() == 1 && chart.frame.old_at_origin().is_empty() {
        return Ok(Stratum::WholeX);
    }
    let n = chart.vars().len();
    let mut sets = Vec::new();
    for s in stratum_systems(chart)? {
        stratum_rec(&s, &BTreeSet::new(), n, &mut sets)?;
    }
    sets.sort();
    sets.dedup();
    let minimal: Vec<&BTreeSet<usize>> = sets.iter().filter(|a| !sets.iter().any(|b| b != *a && b.is_subset(a))).collect();
    let vars = chart.vars();
    let mut comps: Vec<Vec<String>> = minimal.iter().map(|set| set.iter().map(|&i| vars[i].clone()).collect()).collect();
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    Ok(Stratum::Components(comps))
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && a.iter().all(|v| b.contains(v))
}

/// Labels and original flags of the stratum components of a chart, derived from its lineage.
pub fn assign_labels<K: Field>(chart: &ChartState<K>, comps: &[Vec<String>], mode: LabelMode, root_original: &OriginalSpec) -> Result<Vec<Component>> {
    let Some(l) = &chart.lineage else {
        return Ok(comps
            .iter()
            .map(|c| Component {
                vars: c.clone(),
                label: 0,
                original: match root_original {
                    OriginalSpec::All => true,
                    OriginalSpec::None => false,
                    OriginalSpec::List(list) => list.iter().any(|o| same_set(o, c)),
                },
            })
            .collect());
    };
    let hs = chart.hs_o()?;
    if hs_o_less(&hs, &l.parent_hs) {
        return Ok(comps.iter().map(|c| Component { vars: c.clone(), label: 0, original: true }).collect());
    }
    let center_label = l.parent_components.iter().find(|p| same_set(&p.vars, &l.center.vars)).map(|p| p.label);
    let mut out = Vec::new();
    for c in comps {
        let in_e = c.contains(&l.chart_var);
        let comp = if !in_e {
            match l.parent_components.iter().find(|p| same_set(&p.vars, c)) {
                Some(p) => Component { vars: c.clone(), label: p.label, original: p.original },
                None => Component { vars: c.clone(), label: chart.step, original: false },
            }
        } else {
            let inherited = match (mode, l.center.kind) {
                (LabelMode::NoInherit, _) => None,
                (LabelMode::Inherit, CenterKind::ClosedPoint) => center_label,
                (LabelMode::Inherit, _) if same_set(c, &l.center.vars) => center_label,
                _ => None,
            };
            Component { vars: c.clone(), label: inherited.unwrap_or(chart.step), original: false }
        };
        out.push(comp);
    }
    Ok(out)
}

/// (ν*, |O|) strictly below the parent value.
pub fn hs_o_less(a: &(NuStar, usize), b: &(NuStar, usize)) -> bool {
    (&a.0, a.1) < (&b.0, b.1)
}

/// The center: the unique permissible component of smallest label, otherwise the origin.
pub fn select_center<K: Field>(chart: &ChartState<K>, comps: &[Component]) -> Result<Center> {
    let vars = chart.vars();
    let origin = Center::new(vars, vars)?;
    let Some(min) = comps.iter().map(|c| c.label).min() else { return Ok(origin) };
    let smallest: Vec<&Component> = comps.iter().filter(|c| c.label == min).collect();
    if let [one] = smallest.as_slice() {
        let center = Center::new(vars, &one.vars)?;
        if center.kind != CenterKind::CoordinateSubspace && permissible_check(chart, &center)?.ok {
            return Ok(center);
        }
    }
    Ok(origin)
}

/// The origin is regular and X has normal crossings with the boundary components through it.
pub fn is_resolved_point<K: Field>(chart: &ChartState<K>) -> Result<bool> {
    if chart.gens.len() != 1 || chart.nu_star()?.max_order() != 1 {
        return Ok(false);
    }
    let n = chart.vars().len();
    let row = |g: &Polynomial<K>| -> Vec<K> {
        let lin = g.homogeneous_part_idx(&(0..n).collect::<Vec<_>>(), 1);
        let mut r = vec![K::zero(chart.ctx()); n];
        for (e, c) in lin.terms() {
            r[e.iter().position(|&k| k == 1).expect("linear")] = c.clone();
        }
        r
    };
    let mut rows = vec![row(&chart.gens[0])];
    rows.extend(chart.frame.at_origin().iter().map(|b| row(&b.generator)));
    Ok(rank(&rows, n) == rows.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Resolved,
    StepLimit,
    ScopeError,
}

/// A chart of the trace with its stratum, invariant and outcome.
#[derive(Debug, Clone)]
pub struct TraceChart<K: Field> {
    pub state: ChartState<K>,
    pub iota: Option<IotaInvariant>,
    pub terminal: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildRecord {
    pub chart: usize,
    pub chart_var: String,
    pub classification: Classification,
    pub comparison: Option<IotaOrdering>,
}

/// One blow-up of a tracked point and the points above it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub index: usize,
    pub parent: usize,
    pub step: u32,
    pub center: Center,
    pub children: Vec<ChildRecord>,
}

#[derive(Debug, Clone)]
pub struct ResolutionTrace<K: Field> {
    pub charts: Vec<TraceChart<K>>,
    pub events: Vec<TraceEvent>,
    pub status: TraceStatus,
    pub message: Option<String>,
}

/// Stratum components with labels, the invariant and the terminal decision for one chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartReport {
    pub components: Vec<Component>,
    pub iota: IotaInvariant,
    pub resolved: bool,
    pub terminal: bool,
    pub note: Option<String>,
}

/// Computes stratum, labels and invariant of a chart and decides whether it is terminal.
pub fn analyze<K: Field>(chart: &ChartState<K>, opts: &ResolveOptions) -> Result<ChartReport> {
    let stratum = max_stratum(chart)?;
    let comps = match &stratum {
        Stratum::WholeX => Vec::new(),
        Stratum::Components(c) => c.clone(),
    };
    let components = assign_labels(chart, &comps, opts.labelling, &opts.original)?;
    let c: Vec<Vec<String>> = components.iter().filter(|k| k.original).map(|k| k.vars.clone()).collect();
    let mut labelled = chart.clone();
    labelled.components = components.clone();
    let iota = compute_iota(&labelled, &c, &opts.iota)?;
    let resolved = is_resolved_point(chart)?;
    let note = (stratum == Stratum::WholeX && !resolved).then(|| "regular point without old components whose new boundary is not n.c. with X".to_string());
    Ok(ChartReport { components, iota, resolved, terminal: stratum == Stratum::WholeX || resolved, note })
}

fn analyze_chart<K: Field>(tc: &mut TraceChart<K>, opts: &ResolveOptions) -> Result<()> {
    let report = analyze(&tc.state, opts)?;
    tc.state.components = report.components;
    tc.terminal = report.terminal;
    tc.note = report.note;
    tc.iota = Some(report.iota);
    Ok(())
}

/// Runs the resolution loop from `root`. Scope errors end the run with the partial trace.
pub fn resolve<K: Field>(root: ChartState<K>, opts: &ResolveOptions) -> Result<ResolutionTrace<K>> {
    if !root.origin_on_x() {
        return Err(Error::Input("the origin does not lie on X".into()));
    }
    let mut trace = ResolutionTrace { charts: vec![TraceChart { state: root, iota: None, terminal: false, note: None }], events: Vec::new(), status: TraceStatus::Resolved, message: None };
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let fail = |trace: &mut ResolutionTrace<K>, e: Error| -> Result<()> {
        match e {
            Error::Scope(m) | Error::Unsupported(m) => {
                trace.status = TraceStatus::ScopeError;
                trace.message = Some(m);
                Ok(())
            }
            other => Err(other),
        }
    };
    if let Err(e) = analyze_chart(&mut trace.charts[0], opts) {
        fail(&mut trace, e)?;
        return Ok(trace);
    }
    while let Some(id) = queue.pop_front() {
        if trace.charts[id].terminal {
            continue;
        }
        if trace.charts[id].state.step >= opts.max_steps || trace.events.len() >= opts.max_events {
            trace.status = TraceStatus::StepLimit;
            trace.message = Some(format!("chart {} is not resolved after {} blow-ups", id, trace.charts[id].state.step));
            return Ok(trace);
        }
        match blow_up_point(&mut trace, id, opts) {
            Ok(children) => queue.extend(children),
            Err(e) => {
                fail(&mut trace, e)?;
                return Ok(trace);
            }
        }
    }
    Ok(trace)
}

fn blow_up_point<K: Field>(trace: &mut ResolutionTrace<K>, id: usize, opts: &ResolveOptions) -> Result<Vec<usize>> {
    let parent = trace.charts[id].state.clone();
    let parent_iota = trace.charts[id].iota.clone();
    let center = select_center(&parent, &parent.components)?;
    let report = permissible_check(&parent, &center)?;
    if !report.ok {
        return Err(Error::Scope(format!("selected center {} is not permissible: {}", center, report.violations.join("; "))));
    }
    let mut children = Vec::new();
    let mut records = Vec::new();
    for chart_var in &center.vars {
        let chart = blow_up_chart(&parent, &center, chart_var)?;
        for point in points_above(&parent, &chart, &center)? {
            let assign: Vec<(String, K)> = chart.vars().iter().cloned().zip(point).filter(|(_, v)| !v.is_zero()).collect();
            let located = if assign.is_empty() { chart.clone() } else { locate_point(&chart, &assign)? };
            let cid = trace.charts.len();
            let mut state = located;
            state.id = cid;
            let classification = classify_point(&parent, &state)?;
            let mut tc = TraceChart { state, iota: None, terminal: false, note: None };
            analyze_chart(&mut tc, opts)?;
            let comparison = match (&tc.iota, &parent_iota) {
                (Some(c), Some(p)) => Some(compare_iota(c, p)),
                _ => None,
            };
            trace.charts.push(tc);
            records.push(ChildRecord { chart: cid, chart_var: chart_var.clone(), classification, comparison });
            children.push(cid);
        }
    }
    trace.events.push(TraceEvent { index: trace.events.len(), parent: id, step: parent.step + 1, center, children: records });
    Ok(children)
}

/// Outcome of the monotonicity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub ok: bool,
    pub checked: usize,
    /// Pairs whose parent point is regular; these are required not to increase.
    pub regular_parent: usize,
    pub failure: Option<MonotoneFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneFailure {
    pub event: usize,
    pub parent: usize,
    pub child: usize,
    pub comparison: IotaOrdering,
    pub parent_iota: Option<IotaInvariant>,
    pub child_iota: Option<IotaInvariant>,
}

/// Recomputes compare_iota(child, parent) for every recorded pair. Pairs above a singular point
/// must compare `Less`. Above a regular point (ν = 1, where only the n.c. condition with the
/// boundary is being repaired) ι reduces to H^O and the pair must compare `Less` or `Equal`.
pub fn check_monotone(doc: &TraceDoc) -> MonotoneReport {
    let mut checked = 0;
    let mut regular_parent = 0;
    for ev in &doc.events {
        let parent_iota = doc.charts.get(ev.parent).and_then(|c| c.iota.clone());
        for ch in &ev.children {
            let child_iota = doc.charts.get(ch.chart).and_then(|c| c.iota.clone());
            let cmp = match (&child_iota, &parent_iota) {
                (Some(c), Some(p)) => compare_iota(c, p),
                _ => IotaOrdering::Incomparable,
            };
            checked += 1;
            let regular = parent_iota.as_ref().is_some_and(|p| p.iota0.hs.max_order() <= 1);
            regular_parent += usize::from(regular);
            let accepted = cmp == IotaOrdering::Less || (regular && cmp == IotaOrdering::Equal);
            if !accepted {
                return MonotoneReport {
                    ok: false,
                    checked,
                    regular_parent,
                    failure: Some(MonotoneFailure { event: ev.index, parent: ev.parent, child: ch.chart, comparison: cmp, parent_iota, child_iota }),
                };
            }
        }
    }
    MonotoneReport { ok: true, checked, regular_parent, failure: None }
}

#[cfg(test)]
mod tests;
