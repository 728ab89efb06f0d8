//! Affine-chart blow-ups at coordinate points and curves: strict transforms, boundary and
//! history transformation, permissibility checks, point location and point classification.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::char_polyhedron::FPolyhedron;
use crate::error::{Error, Result};
use crate::exact_algebra::fpx::Upoly;
use crate::exact_algebra::{gf_context, Field, Fp, Gf, Polynomial};
use crate::local_frame::{compute_directrix, directrix_of_jo, initial_forms, nu_star, BoundaryComponent, Frame, NuStar, Status};

/// Shape of a coordinate center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterKind {
    ClosedPoint,
    CoordinateCurve,
    /// Any other coordinate subspace; such centers can be checked but are never selected.
    CoordinateSubspace,
}

/// A coordinate center V(vars) through the chart origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Center {
    pub vars: Vec<String>,
    pub kind: CenterKind,
}

impl Center {
    /// Builds a center from variable names, deciding its kind from the ambient dimension.
    pub fn new(ambient: &[String], vars: &[String]) -> Result<Self> {
        let mut sorted: Vec<String> = Vec::new();
        for v in ambient {
            if vars.contains(v) {
                sorted.push(v.clone());
            }
        }
        if let Some(bad) = vars.iter().find(|v| !ambient.contains(v)) {
            return Err(Error::Input(format!("center variable {} is not a chart coordinate", bad)));
        }
        if sorted.len() != vars.len() {
            return Err(Error::Input("center variables must be distinct".into()));
        }
        if sorted.is_empty() {
            return Err(Error::Input("a center needs at least one coordinate".into()));
        }
        let kind = if sorted.len() == ambient.len() {
            CenterKind::ClosedPoint
        } else if sorted.len() + 1 == ambient.len() {
            CenterKind::CoordinateCurve
        } else {
            CenterKind::CoordinateSubspace
        };
        Ok(Center { vars: sorted, kind })
    }

    pub fn indices(&self, ambient: &[String]) -> Vec<usize> {
        self.vars.iter().map(|v| ambient.iter().position(|w| w == v).expect("center variable")).collect()
    }
}

impl std::fmt::Display for Center {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "V({})", self.vars.join(","))
    }
}

/// An irreducible component of the maximal stratum through the origin: the coordinate subspace
/// V(vars), its label, and whether it is the strict transform of the stratum present when the
/// current log Hilbert–Samuel value first appeared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub vars: Vec<String>,
    pub label: u32,
    pub original: bool,
}

impl Component {
    pub fn dim(&self, ambient: usize) -> usize {
        ambient - self.vars.len()
    }
}

/// How a chart was produced from its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lineage {
    pub parent: usize,
    pub center: Center,
    pub chart_var: String,
    /// Stratum components of the parent (with labels) at the time of the blow-up.
    pub parent_components: Vec<Component>,
    /// (ν*, |O|) of the parent origin.
    pub parent_hs: (NuStar, usize),
    /// Coordinate translations applied after the blow-up, rendered as (variable, replacement).
    pub translations: Vec<(String, String)>,
    /// Boundary statuses of the chart right after the blow-up, before the history rule.
    pub transform_status: Vec<Status>,
}

/// One affine chart of the blow-up tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartState<K: Field> {
    pub id: usize,
    pub gens: Vec<Polynomial<K>>,
    pub frame: Frame<K>,
    pub components: Vec<Component>,
    pub step: u32,
    pub lineage: Option<Lineage>,
    /// Degree of the residue field of the origin over the base field.
    pub residue_degree: usize,
}

impl<K: Field> ChartState<K> {
    pub fn root(gens: Vec<Polynomial<K>>, frame: Frame<K>) -> Result<Self> {
        let g0 = gens.first().ok_or_else(|| Error::Input("a chart needs at least one generator".into()))?;
        if gens.iter().any(|g| g.vars() != g0.vars()) {
            return Err(Error::Input("generators must share the ambient variable list".into()));
        }
        frame.validate(g0.vars())?;
        Ok(ChartState { id: 0, gens, frame, components: Vec::new(), step: 0, lineage: None, residue_degree: 1 })
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        self.gens[0].vars()
    }

    pub fn ctx(&self) -> &K::Ctx {
        self.gens[0].ctx()
    }

    /// True when every generator vanishes at the origin.
    pub fn origin_on_x(&self) -> bool {
        self.gens.iter().all(|g| g.constant_term().is_zero())
    }

    pub fn nu_star(&self) -> Result<NuStar> {
        nu_star(&self.gens)
    }

    pub fn old_count(&self) -> usize {
        self.frame.old_at_origin().len()
    }

    /// (ν*, |O|): the log Hilbert–Samuel proxy at the origin.
    pub fn hs_o(&self) -> Result<(NuStar, usize)> {
        Ok((self.nu_star()?, self.old_count()))
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

/// Outcome of a permissibility test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermissibilityReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks equal order along the center, that the center does not contain a component of X, and
/// normal crossings of the center with the boundary.
pub fn permissible_check<K: Field>(chart: &ChartState<K>, center: &Center) -> Result<PermissibilityReport> {
    let vars = chart.vars().clone();
    let t = center.indices(&vars);
    let mut violations = Vec::new();
    if !chart.origin_on_x() {
        violations.push("the origin does not lie on X".to_string());
    }
    for (i, g) in chart.gens.iter().enumerate() {
        let o_m = g.order();
        let o_t = g.ord_at_idx(&t);
        if o_m != o_t {
            violations.push(format!(
                "generator {} has order {} along {} but {} at the origin",
                i + 1,
                o_t.map_or("inf".into(), |v| v.to_string()),
                center,
                o_m.map_or("inf".into(), |v| v.to_string())
            ));
        }
    }
    if t.len() <= chart.gens.len() {
        violations.push(format!("{} contains a component of X", center));
    }
    // Coordinate centers have normal crossings with coordinate hyperplanes.
    for b in chart.frame.at_origin() {
        if b.coordinate().is_none() {
            violations.push(format!("cannot verify n.c. of {} with the boundary component V({})", center, b.generator));
        }
    }
    Ok(PermissibilityReport { ok: violations.is_empty(), violations })
}

/// Blows up `center` and returns the chart where `chart_var` generates the exceptional divisor.
pub fn blow_up_chart<K: Field>(chart: &ChartState<K>, center: &Center, chart_var: &str) -> Result<ChartState<K>> {
    let report = permissible_check(chart, center)?;
    if !report.ok {
        return Err(Error::Domain(format!("center {} is not permissible: {}", center, report.violations.join("; "))));
    }
    let vars = chart.vars().clone();
    let c = vars
        .iter()
        .position(|v| v == chart_var)
        .ok_or_else(|| Error::Input(format!("unknown chart variable {}", chart_var)))?;
    let t = center.indices(&vars);
    if !t.contains(&c) {
        return Err(Error::Input(format!("chart variable {} is not a center variable", chart_var)));
    }
    let others: Vec<usize> = t.iter().copied().filter(|&i| i != c).collect();
    let strict = |g: &Polynomial<K>| -> Result<Polynomial<K>> {
        let k = g.ord_at_idx(&t).ok_or_else(|| Error::Degenerate("zero polynomial".into()))?;
        let sub = g.monomial_blowup(&others, c);
        let q = sub
            .divide_by_var_power(c, k)
            .ok_or_else(|| Error::Degenerate(format!("{}^{} does not divide the total transform of {}", chart_var, k, g)))?;
        Ok(q)
    };
    let mut gens = Vec::with_capacity(chart.gens.len());
    for g in &chart.gens {
        let q = strict(g)?;
        if q.is_zero() {
            return Err(Error::Degenerate("strict transform is zero".into()));
        }
        gens.push(q);
    }
    let step = chart.step + 1;
    let mut boundary = Vec::new();
    for b in &chart.frame.boundary {
        let q = strict(&b.generator)?;
        if q.is_constant() {
            continue;
        }
        boundary.push(BoundaryComponent::new(q, b.status, b.birth));
    }
    boundary.push(BoundaryComponent::new(Polynomial::var_at(chart.ctx(), &vars, c), Status::New, step));
    let mut child = ChartState {
        id: 0,
        gens,
        frame: Frame { u: chart.frame.u.clone(), y: chart.frame.y.clone(), boundary },
        components: Vec::new(),
        step,
        lineage: Some(Lineage {
            parent: chart.id,
            center: center.clone(),
            chart_var: chart_var.to_string(),
            parent_components: chart.components.clone(),
            parent_hs: chart.hs_o()?,
            translations: Vec::new(),
            transform_status: Vec::new(),
        }),
        residue_degree: chart.residue_degree,
    };
    if let Some(l) = child.lineage.as_mut() {
        l.transform_status = child.frame.boundary.iter().map(|b| b.status).collect();
    }
    apply_history_rule(&mut child, &chart.nu_star()?)?;
    Ok(child)
}

/// When ν* drops at the origin, every boundary component becomes old. Statuses are first reset to
/// the values they had right after the blow-up, so relocating the origin re-evaluates the rule.
fn apply_history_rule<K: Field>(child: &mut ChartState<K>, parent_nu: &NuStar) -> Result<()> {
    if let Some(l) = &child.lineage {
        if l.transform_status.len() == child.frame.boundary.len() {
            for (b, s) in child.frame.boundary.iter_mut().zip(&l.transform_status) {
                b.status = *s;
            }
        }
    }
    if child.origin_on_x() && child.nu_star()? < *parent_nu {
        for b in child.frame.boundary.iter_mut() {
            b.status = Status::Old;
        }
    }
    Ok(())
}

/// Removes boundary components that miss the chart origin; they are units in the local ring.
fn drop_boundary_off_origin<K: Field>(chart: &mut ChartState<K>) {
    let keep: Vec<bool> = chart.frame.boundary.iter().map(|b| b.generator.constant_term().is_zero()).collect();
    if let Some(l) = chart.lineage.as_mut() {
        if l.transform_status.len() == keep.len() {
            l.transform_status = l.transform_status.iter().zip(&keep).filter(|(_, k)| **k).map(|(s, _)| *s).collect();
        }
    }
    let mut it = keep.iter();
    chart.frame.boundary.retain(|_| *it.next().expect("aligned"));
}

/// Moves the rational point with the given coordinates to the origin: each assigned variable v is
/// replaced by v + value. Boundary components that miss the new origin are dropped.
pub fn locate_point<K: Field>(chart: &ChartState<K>, assign: &[(String, K)]) -> Result<ChartState<K>> {
    let vars = chart.vars().clone();
    let ctx = chart.ctx().clone();
    let mut point = vec![K::zero(&ctx); vars.len()];
    for (name, value) in assign {
        let j = vars.iter().position(|v| v == name).ok_or_else(|| Error::Input(format!("unknown variable {}", name)))?;
        point[j] = value.clone();
    }
    if let Some(l) = &chart.lineage {
        let c = vars.iter().position(|v| *v == l.chart_var).expect("chart variable");
        if !point[c].is_zero() {
            return Err(Error::Input("the point does not lie on the exceptional divisor".into()));
        }
    }
    if chart.gens.iter().any(|g| !g.evaluate(&point).is_zero()) {
        return Err(Error::Input("the point does not lie on X".into()));
    }
    let mut out = chart.clone();
    let mut rendered = Vec::new();
    for (j, value) in point.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let expr = Polynomial::var_at(&ctx, &vars, j).add(&Polynomial::constant(&ctx, &vars, value.clone()));
        for g in out.gens.iter_mut() {
            *g = g.substitute_idx(j, &expr);
        }
        for b in out.frame.boundary.iter_mut() {
            b.generator = b.generator.substitute_idx(j, &expr);
        }
        rendered.push((vars[j].clone(), expr.to_string()));
    }
    if let Some(l) = out.lineage.as_mut() {
        l.translations.extend(rendered);
    }
    drop_boundary_off_origin(&mut out);
    if let Some(l) = &chart.lineage {
        let parent_nu = l.parent_hs.0.clone();
        apply_history_rule(&mut out, &parent_nu)?;
    }
    Ok(out)
}

/// Moves a closed point with irreducible condition minpoly(var) = 0 of degree d > 1 to the origin
/// of a chart over 𝔽p[a]/(minpoly): var is replaced by var + a.
pub fn locate_point_extension(chart: &ChartState<Fp>, var: &str, minpoly: &Polynomial<Fp>, gen_name: &str) -> Result<ChartState<Gf>> {
    let p = *chart.ctx();
    let vars = chart.vars().clone();
    let j = vars.iter().position(|v| v == var).ok_or_else(|| Error::Input(format!("unknown variable {}", var)))?;
    let mi = minpoly.vars().iter().position(|v| v == var).ok_or_else(|| Error::Input("the condition must be univariate in the located variable".into()))?;
    let mut coeffs: Upoly = Vec::new();
    for (e, c) in minpoly.terms() {
        if e.iter().enumerate().any(|(i, &k)| i != mi && k > 0) {
            return Err(Error::Input("the condition must be univariate in the located variable".into()));
        }
        let d = e[mi] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, 0);
        }
        coeffs[d] = c.value();
    }
    let gctx = gf_context(p, coeffs, gen_name)?;
    let degree = Gf::degree(&gctx);
    let lift = |f: &Polynomial<Fp>| f.map_coeffs::<Gf>(&gctx, |c| Gf::from_prime(&gctx, c.value()));
    let expr = Polynomial::var_at(&gctx, &vars, j).add(&Polynomial::constant(&gctx, &vars, Gf::generator(&gctx)));
    let gens: Vec<Polynomial<Gf>> = chart.gens.iter().map(|g| lift(g).substitute_idx(j, &expr)).collect();
    if gens.iter().any(|g| !g.constant_term().is_zero()) {
        return Err(Error::Input("the point does not lie on X".into()));
    }
    let boundary = chart
        .frame
        .boundary
        .iter()
        .map(|b| BoundaryComponent::new(lift(&b.generator).substitute_idx(j, &expr), b.status, b.birth))
        .collect();
    let mut lineage = chart.lineage.clone();
    if let Some(l) = lineage.as_mut() {
        l.translations.push((var.to_string(), expr.to_string()));
    }
    let mut out = ChartState {
        id: chart.id,
        gens,
        frame: Frame { u: chart.frame.u.clone(), y: chart.frame.y.clone(), boundary },
        components: Vec::new(),
        step: chart.step,
        lineage,
        residue_degree: chart.residue_degree * degree,
    };
    drop_boundary_off_origin(&mut out);
    if let Some(l) = &chart.lineage {
        apply_history_rule(&mut out, &l.parent_hs.0)?;
    }
    Ok(out)
}

/// Kind of a point above the center relative to the point below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Dropped,
    Near,
    ONear,
    VeryNear,
    VeryONear,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: PointClass,
    pub near: bool,
    pub o_near: bool,
    pub very_near: bool,
    pub very_o_near: bool,
}

/// Directrix dimensions (e, e^O) at the origin.
pub fn directrix_dims<K: Field>(chart: &ChartState<K>) -> Result<(usize, usize)> {
    let e = compute_directrix(&initial_forms(&chart.gens)?)?.e;
    let eo = directrix_of_jo(&chart.gens, &chart.frame)?.e;
    Ok((e, eo))
}

/// Classifies the child origin against the parent origin. Closed points over closed points have
/// transcendence degree δ_{x'/x} = 0, so very-nearness compares directrix dimensions directly.
pub fn classify_point<K: Field>(parent: &ChartState<K>, child: &ChartState<K>) -> Result<Classification> {
    let dropped = Classification { class: PointClass::Dropped, near: false, o_near: false, very_near: false, very_o_near: false };
    if !child.origin_on_x() {
        return Ok(dropped);
    }
    let (nu_p, nu_c) = (parent.nu_star()?, child.nu_star()?);
    if nu_c != nu_p {
        return Ok(dropped);
    }
    let (e_p, eo_p) = directrix_dims(parent)?;
    let (e_c, eo_c) = directrix_dims(child)?;
    let o_near = parent.old_count() == child.old_count();
    let very_near = e_c == e_p;
    let very_o_near = o_near && eo_c == eo_p;
    let class = if very_o_near {
        PointClass::VeryONear
    } else if o_near {
        PointClass::ONear
    } else if very_near {
        PointClass::VeryNear
    } else {
        PointClass::Near
    };
    Ok(Classification { class, near: true, o_near, very_near, very_o_near })
}

/// Which blow-up the polyhedron prediction refers to (indices into the u-block).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PolyhedronTransform {
    /// Blow-up of the closed point, chart of u_{chart}.
    Point { chart: usize },
    /// Blow-up of the curve V(u_{u}, y).
    Curve { u: usize },
}

/// Predicted characteristic polyhedron after a blow-up; the flag is set when a predicted vertex
/// has a negative coordinate (the point is not near).
pub fn transform_polyhedron_expected(delta: &FPolyhedron, t: PolyhedronTransform) -> Result<(FPolyhedron, bool)> {
    let one = <BigRational as One>::one();
    let e = delta.dim;
    let mut pts = Vec::new();
    for v in &delta.vertices {
        let c = &v.0;
        let w: Vec<BigRational> = match (t, e) {
            (PolyhedronTransform::Point { .. }, 1) => vec![&c[0] - &one],
            (PolyhedronTransform::Point { chart: 0 }, 2) => vec![&c[0] + &c[1] - &one, c[1].clone()],
            (PolyhedronTransform::Point { chart: 1 }, 2) => vec![c[0].clone(), &c[0] + &c[1] - &one],
            (PolyhedronTransform::Curve { u }, _) if u < e => {
                let mut w = c.clone();
                w[u] = &w[u] - &one;
                w
            }
            _ => return Err(Error::Domain(format!("no polyhedron transform {:?} for e = {}", t, e))),
        };
        pts.push(w);
    }
    let negative = pts.iter().any(|p| p.iter().any(|q| q.is_negative()));
    Ok((FPolyhedron::from_points(e, pts), negative))
}
