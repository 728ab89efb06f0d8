//! Subcommand implementations. Every command returns a JSON document and an exit code.

use hironaka::blowup_engine::{blow_up_chart, classify_point, locate_point, locate_point_extension, permissible_check, Center, ChartState};
use hironaka::char_polyhedron::{face_numbers, prepare, sigma};
use hironaka::cjs_driver::{analyze, check_monotone, resolve, to_dot, ResolveOptions, TraceDoc, TraceStatus};
use hironaka::exact_algebra::fpx::Upoly;
use hironaka::exact_algebra::{gf_context, is_prime, FieldKind, FptCtx};
use hironaka::invariant::{compute_iota, FINISHED_NOTE};
use hironaka::local_frame::Status;
use hironaka::{Error, Field, Fp, Fpt, Gf, Polynomial, Result, Q};
use serde::Serialize;
use serde_json::{json, Value};

use crate::job::{ExtensionSpec, Job};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SCOPE: i32 = 3;
pub const EXIT_MONOTONE: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Scope(_) | Error::Unsupported(_) => EXIT_SCOPE,
        Error::Input(_) | Error::Domain(_) | Error::Degenerate(_) => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobCommand {
    Analyze,
    Polyhedron,
    Invariant,
    Blowup,
    Resolve,
}

pub struct Outcome {
    pub doc: Value,
    pub code: i32,
    /// The trace document of a `resolve` run, for storing next to the report.
    pub trace: Option<TraceDoc>,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: EXIT_OK, trace: None }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

#[derive(Serialize)]
struct BoundaryView {
    generator: String,
    status: Status,
    birth: u32,
}

#[derive(Serialize)]
struct ChartView {
    variables: Vec<String>,
    generators: Vec<String>,
    u: Vec<String>,
    y: Vec<String>,
    boundary: Vec<BoundaryView>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    translations: Vec<(String, String)>,
    residue_degree: usize,
}

fn chart_view<K: Field>(c: &ChartState<K>) -> ChartView {
    ChartView {
        variables: c.vars().to_vec(),
        generators: c.generator_strings(),
        u: c.frame.u.clone(),
        y: c.frame.y.clone(),
        boundary: c.frame.boundary.iter().map(|b| BoundaryView { generator: b.generator.to_string(), status: b.status, birth: b.birth }).collect(),
        translations: c.lineage.as_ref().map(|l| l.translations.clone()).unwrap_or_default(),
        residue_degree: c.residue_degree,
    }
}

/// Runs a job command over the field named in the job.
pub fn run_job(job: &Job, cmd: JobCommand, opts: &ResolveOptions) -> Result<Outcome> {
    let spec = &job.field;
    let p = spec.characteristic;
    if spec.kind != FieldKind::Rationals && !is_prime(p) {
        return Err(Error::Input(format!("field.characteristic: {} is not a prime", p)));
    }
    if job.point.as_ref().is_some_and(|pt| pt.extension.is_some()) && !(spec.kind == FieldKind::PrimeField && cmd == JobCommand::Blowup) {
        return Err(Error::Input("point.extension: extension points are supported by `blowup` over prime fields".into()));
    }
    match spec.kind {
        FieldKind::Rationals => run_field::<Q>(&(), job, cmd, opts),
        FieldKind::PrimeField => match job.point.as_ref().and_then(|pt| pt.extension.as_ref()) {
            Some(ext) => blowup_extension(job, p, ext),
            None => run_field::<Fp>(&p, job, cmd, opts),
        },
        FieldKind::RationalFunctionsOverPrimeField => {
            let name = spec.transcendental.clone().unwrap_or_else(|| "t".to_string());
            if job.variables.contains(&name) {
                return Err(Error::Input(format!("field.transcendental: {} is also an ambient variable", name)));
            }
            run_field::<Fpt>(&FptCtx::new(p, &name), job, cmd, opts)
        }
        FieldKind::FiniteExtension => {
            let name = spec.transcendental.clone().ok_or_else(|| Error::Input("field.transcendental: the generator name is required".into()))?;
            let text = spec.modulus.as_deref().ok_or_else(|| Error::Input("field.modulus: the minimal polynomial is required".into()))?;
            let m = Polynomial::<Fp>::parse(&p, &hironaka::exact_algebra::var_list(&[name.as_str()]), text).map_err(|e| Error::Input(format!("field.modulus: {}", e)))?;
            let mut coeffs: Upoly = Vec::new();
            for (e, c) in m.terms() {
                let d = e[0] as usize;
                if coeffs.len() <= d {
                    coeffs.resize(d + 1, 0);
                }
                coeffs[d] = c.value();
            }
            let ctx = gf_context(p, coeffs, &name)?;
            run_field::<Gf>(&ctx, job, cmd, opts)
        }
    }
}

fn run_field<K: Field>(ctx: &K::Ctx, job: &Job, cmd: JobCommand, opts: &ResolveOptions) -> Result<Outcome> {
    let chart = job.chart::<K>(ctx)?;
    let field = to_value(&K::descriptor(ctx));
    match cmd {
        JobCommand::Analyze => analyze_cmd(field, &chart, opts),
        JobCommand::Polyhedron => polyhedron_cmd(field, &chart, opts),
        JobCommand::Invariant => invariant_cmd(field, job, &chart, opts),
        JobCommand::Blowup => blowup_cmd(field, job, chart, opts),
        JobCommand::Resolve => resolve_cmd(chart, opts),
    }
}

fn require_on_x<K: Field>(chart: &ChartState<K>) -> Result<()> {
    if chart.origin_on_x() {
        Ok(())
    } else {
        Err(Error::Input("generators: the origin does not lie on X".into()))
    }
}

fn analyze_cmd<K: Field>(field: Value, chart: &ChartState<K>, opts: &ResolveOptions) -> Result<Outcome> {
    require_on_x(chart)?;
    let report = analyze(chart, opts)?;
    let i0 = &report.iota.iota0;
    Ok(Outcome::ok(json!({
        "field": field,
        "chart": to_value(&chart_view(chart)),
        "nu_star": i0.hs,
        "old": i0.old,
        "e": i0.e,
        "e_o": i0.eo,
        "case": report.iota.case,
        "components": report.components,
        "resolved": report.resolved,
        "terminal": report.terminal,
    })))
}

fn polyhedron_cmd<K: Field>(field: Value, chart: &ChartState<K>, opts: &ResolveOptions) -> Result<Outcome> {
    require_on_x(chart)?;
    let prep = prepare(&chart.gens, &chart.frame, opts.iota.prepare_budget)?;
    let mut faces = Vec::new();
    let mut sigmas = Vec::new();
    if prep.polyhedron.dim == 2 && !prep.polyhedron.is_empty() {
        for side in [1u8, 2] {
            let f = face_numbers(&prep.polyhedron, side)?;
            faces.push(json!({ "side": side, "alpha": f.alpha, "beta": f.beta, "gamma": f.gamma, "s": f.s }));
            let s = sigma(&chart.gens, &chart.frame, side, opts.iota.sigma_budget, opts.iota.prepare_budget)?;
            sigmas.push(json!({ "side": side, "value": s.value, "lower_bound": s.lower_bound, "substitutions": s.substitutions }));
        }
    }
    let prepared: Vec<String> = prep.gens.iter().map(|g| g.to_string()).collect();
    Ok(Outcome::ok(json!({
        "field": field,
        "u": chart.frame.u,
        "y": prep.frame.y,
        "status": prep.status,
        "vertices": prep.polyhedron.vertices,
        "delta": prep.polyhedron.delta(),
        "prepared_generators": prepared,
        "log": prep.log,
        "escape": prep.escape,
        "undetermined": prep.undetermined,
        "faces": faces,
        "sigma": sigmas,
    })))
}

fn invariant_cmd<K: Field>(field: Value, job: &Job, chart: &ChartState<K>, opts: &ResolveOptions) -> Result<Outcome> {
    require_on_x(chart)?;
    let (iota, components) = match &job.components {
        Some(c) => (compute_iota(chart, c, &opts.iota)?, None),
        None => {
            let r = analyze(chart, opts)?;
            (r.iota, Some(r.components))
        }
    };
    let finished = iota.notes.iter().any(|n| n == FINISHED_NOTE);
    Ok(Outcome::ok(json!({
        "field": field,
        "iota": iota,
        "components": components,
        "finished": finished,
    })))
}

fn parse_center<K: Field>(job: &Job, chart: &ChartState<K>) -> Result<Center> {
    let vars = chart.vars();
    let names = job.center.clone().unwrap_or_else(|| vars.to_vec());
    Center::new(vars, &names).map_err(|e| Error::Input(format!("center: {}", e)))
}

fn blowup_cmd<K: Field>(field: Value, job: &Job, mut chart: ChartState<K>, opts: &ResolveOptions) -> Result<Outcome> {
    require_on_x(&chart)?;
    let center = parse_center(job, &chart)?;
    let report = permissible_check(&chart, &center)?;
    if !report.ok {
        return Err(Error::Input(format!("center: {} is not permissible: {}", center, report.violations.join("; "))));
    }
    chart.components = analyze(&chart, opts).map(|r| r.components).unwrap_or_default();
    let chart_vars: Vec<String> = match &job.chart_var {
        Some(v) if center.vars.contains(v) => vec![v.clone()],
        Some(v) => return Err(Error::Input(format!("chart_var: {} is not a center variable", v))),
        None => center.vars.clone(),
    };
    if job.point.is_some() && chart_vars.len() != 1 {
        return Err(Error::Input("point: locating a point needs chart_var".into()));
    }
    let mut children = Vec::new();
    for var in &chart_vars {
        let child = blow_up_chart(&chart, &center, var)?;
        let child = match &job.point {
            Some(p) if !p.assign.is_empty() => {
                let assign = p
                    .assign
                    .iter()
                    .map(|(v, x)| Ok((v.clone(), job.parse_scalar::<K>(chart.ctx(), &format!("point.assign.{}", v), x)?)))
                    .collect::<Result<Vec<_>>>()?;
                locate_point(&child, &assign)?
            }
            _ => child,
        };
        children.push(child_report(var, &chart, &child, opts)?);
    }
    Ok(Outcome::ok(json!({
        "field": field,
        "center": center.to_string(),
        "permissibility": report,
        "children": children,
    })))
}

fn child_report<K: Field>(var: &str, parent: &ChartState<K>, child: &ChartState<K>, opts: &ResolveOptions) -> Result<Value> {
    let on_x = child.origin_on_x();
    let (classification, analysis) = if on_x { (Some(classify_point(parent, child)?), Some(analyze(child, opts)?)) } else { (None, None) };
    Ok(json!({
        "chart_var": var,
        "chart": to_value(&chart_view(child)),
        "origin_on_x": on_x,
        "classification": classification,
        "components": analysis.as_ref().map(|a| &a.components),
        "iota": analysis.as_ref().map(|a| &a.iota),
    }))
}

/// Blow-up over a prime field followed by moving a closed point with a larger residue field to
/// the origin of a chart over the extension.
fn blowup_extension(job: &Job, p: u64, ext: &ExtensionSpec) -> Result<Outcome> {
    let chart = job.chart::<Fp>(&p)?;
    require_on_x(&chart)?;
    let center = parse_center(job, &chart)?;
    let report = permissible_check(&chart, &center)?;
    if !report.ok {
        return Err(Error::Input(format!("center: {} is not permissible: {}", center, report.violations.join("; "))));
    }
    let var = match &job.chart_var {
        Some(v) if center.vars.contains(v) => v.clone(),
        _ => return Err(Error::Input("chart_var: a center variable is required for an extension point".into())),
    };
    let child = blow_up_chart(&chart, &center, &var)?;
    let minpoly = job.parse_poly::<Fp>(&p, "point.extension.minpoly", &ext.minpoly)?;
    let located = locate_point_extension(&child, &ext.var, &minpoly, &ext.name)?;
    Ok(Outcome::ok(json!({
        "field": to_value(&Fp::descriptor(&p)),
        "center": center.to_string(),
        "permissibility": report,
        "children": [{
            "chart_var": var,
            "field": to_value(&Gf::descriptor(located.ctx())),
            "chart": to_value(&chart_view(&located)),
            "origin_on_x": located.origin_on_x(),
            "nu_star": located.nu_star()?,
        }],
    })))
}

fn resolve_cmd<K: Field>(chart: ChartState<K>, opts: &ResolveOptions) -> Result<Outcome> {
    require_on_x(&chart)?;
    let doc = resolve(chart, opts)?.to_doc();
    let report = check_monotone(&doc);
    let code = if !report.ok {
        EXIT_MONOTONE
    } else if doc.status != TraceStatus::Resolved {
        EXIT_SCOPE
    } else {
        EXIT_OK
    };
    Ok(Outcome { doc: json!({ "trace": doc, "monotonicity": report }), code, trace: Some(doc) })
}

/// Reads a stored trace: either a bare trace document or a `resolve` report containing one.
pub fn parse_trace(text: &str) -> std::result::Result<TraceDoc, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("trace: {}", e))?;
    let inner = match v.get("trace") {
        Some(t) => t.clone(),
        None => v,
    };
    serde_json::from_value(inner).map_err(|e| format!("trace: {}", e))
}

pub fn export_dot(doc: &TraceDoc) -> String {
    to_dot(doc)
}
