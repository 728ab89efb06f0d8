use super::*;
use crate::exact_algebra::{var_list, Q};
use crate::local_frame::{BoundaryComponent, Frame, Status};

pub(crate) fn chart<K: Field>(ctx: &K::Ctx, vars: &[&str], gens: &[&str], u: &[&str], y: &[&str], bnd: &[(&str, Status)]) -> ChartState<K> {
    let v = var_list(vars);
    let gens = gens.iter().map(|g| Polynomial::parse(ctx, &v, g).unwrap()).collect();
    let boundary = bnd.iter().map(|(g, s)| BoundaryComponent::new(Polynomial::parse(ctx, &v, g).unwrap(), *s, 0)).collect();
    let frame = Frame { u: u.iter().map(|s| s.to_string()).collect(), y: y.iter().map(|s| s.to_string()).collect(), boundary };
    ChartState::root(gens, frame).unwrap()
}

fn comp(vars: &[&str], label: u32, original: bool) -> Component {
    Component { vars: vars.iter().map(|s| s.to_string()).collect(), label, original }
}

fn xyz(f: &str) -> ChartState<Q> {
    chart::<Q>(&(), &["x", "y", "z"], &[f], &["y", "z"], &["x"], &[])
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn stratum_of_two_lines() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["z^3 + x^2*y^2*z + x^3*y^3"], &["x", "y"], &["z"], &[]);
    let Stratum::Components(comps) = max_stratum(&c).unwrap() else { panic!("expected components") };
    assert_eq!(comps, vec![strings(&["x", "z"]), strings(&["y", "z"])]);
    let labelled = assign_labels(&c, &comps, LabelMode::Inherit, &OriginalSpec::All).unwrap();
    assert_eq!(labelled.iter().map(|c| c.label).collect::<Vec<_>>(), vec![0, 0]);
    assert!(labelled.iter().all(|c| c.original));
}

#[test]
fn regular_chart_is_whole_x() {
    assert_eq!(max_stratum(&xyz("y + x^2")).unwrap(), Stratum::WholeX);
}

#[test]
fn regular_chart_with_old_boundary_uses_nc_locus() {
    let c = chart::<Q>(&(), &["u1", "u2", "y"], &["u1 + u2 + y^2"], &["u1", "u2"], &["y"], &[("u1", Status::Old), ("u2", Status::New)]);
    let Stratum::Components(comps) = max_stratum(&c).unwrap() else { panic!("expected components") };
    assert_eq!(comps, vec![strings(&["u1", "u2", "y"])]);
    assert!(!is_resolved_point(&c).unwrap());
    let nc = chart::<Q>(&(), &["u1", "u2", "y"], &["y + u1^2"], &["u1", "u2"], &["y"], &[("u1", Status::Old), ("u2", Status::New)]);
    assert!(is_resolved_point(&nc).unwrap());
}

#[test]
fn center_selection() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["z^3 + x^2*y^2*z + x^3*y^3"], &["x", "y"], &["z"], &[]);
    let center = select_center(&c, &[comp(&["x", "z"], 0, true), comp(&["y", "z"], 0, true)]).unwrap();
    assert_eq!(center.to_string(), "V(x,y,z)");

    let c = xyz("x^2 + y^9*z^17");
    let center = select_center(&c, &[comp(&["x", "y"], 0, true), comp(&["x", "z"], 1, false)]).unwrap();
    assert_eq!(center.to_string(), "V(x,y)");
    let center = select_center(&c, &[comp(&["x", "z"], 1, false)]).unwrap();
    assert_eq!(center.to_string(), "V(x,z)");
    assert_eq!(select_center(&c, &[]).unwrap().to_string(), "V(x,y,z)");
}

fn generator_chain(doc: &TraceDoc) -> Vec<String> {
    doc.charts.iter().flat_map(|c| c.generators.clone()).collect()
}

#[test]
fn label_chain_with_inheritance() {
    let t = resolve(xyz("x^2 + y^9*z^10"), &ResolveOptions::default()).unwrap();
    let doc = t.to_doc();
    assert_eq!(doc.status, TraceStatus::Resolved);
    let first = doc.charts.iter().find(|c| c.generators == ["x^2 + y^9*z^17"]).expect("first strict transform");
    assert_eq!(first.center.as_deref(), Some("V(x,y,z)"));
    assert_eq!(first.components, vec![comp(&["x", "y"], 0, true), comp(&["x", "z"], 1, false)]);
    let second = doc.charts.iter().find(|c| c.parent == Some(first.id)).expect("second strict transform");
    assert_eq!(second.center.as_deref(), Some("V(x,y)"));
    assert_eq!(second.generators, ["x^2 + y^7*z^17"]);
    assert_eq!(second.components, vec![comp(&["x", "y"], 0, false), comp(&["x", "z"], 1, false)]);
    let report = check_monotone(&doc);
    assert!(report.ok, "{:?}", report.failure);
    assert!(doc.events.len() <= 64 * 4);
}

#[test]
fn label_chain_without_inheritance() {
    let opts = ResolveOptions { labelling: LabelMode::NoInherit, ..Default::default() };
    let doc = resolve(xyz("x^2 + y^9*z^10"), &opts).unwrap().to_doc();
    assert_eq!(doc.status, TraceStatus::Resolved);
    let chain = generator_chain(&doc);
    let a = chain.iter().position(|g| g == "x^2 + y^7*z^15").expect("f3");
    let b = chain.iter().position(|g| g == "x^2 + y^5*z^15").expect("f4");
    assert!(a < b);
    let f3 = doc.charts.iter().find(|c| c.generators == ["x^2 + y^7*z^15"]).unwrap();
    let f4 = doc.charts.iter().find(|c| c.generators == ["x^2 + y^5*z^15"]).unwrap();
    assert_eq!(f4.parent, Some(f3.id));
    assert!(check_monotone(&doc).ok);
}

#[test]
fn regular_input_needs_no_blow_up() {
    let doc = resolve(xyz("y"), &ResolveOptions::default()).unwrap().to_doc();
    assert_eq!(doc.status, TraceStatus::Resolved);
    assert!(doc.events.is_empty());
    assert_eq!(doc.charts.len(), 1);
    assert!(doc.charts[0].terminal);
}

fn cusp_boundary() -> ChartState<Q> {
    chart::<Q>(&(), &["u1", "u2", "y"], &["y^2 + (u2+u1)^3 + u1^7"], &["u1", "u2"], &["y"], &[("u1", Status::New), ("u2", Status::New)])
}

#[test]
fn cusp_boundary_trace_is_monotone() {
    let opts = ResolveOptions { original: OriginalSpec::None, ..Default::default() };
    let doc = resolve(cusp_boundary(), &opts).unwrap().to_doc();
    assert_eq!(doc.status, TraceStatus::Resolved);
    let x1 = doc.charts.iter().find(|c| c.generators == ["y^2 + u1*u2^3 + u1^5"]).expect("located point");
    assert_eq!(x1.parent, Some(0));
    assert_eq!(x1.translations, vec![("u2".to_string(), "-1 + u2".to_string())]);
    let root_poly = doc.charts[0].iota.as_ref().unwrap().iotapoly.0.iter().map(|q| q.to_string()).collect::<Vec<_>>();
    let x1_poly = x1.iota.as_ref().unwrap().iotapoly.0.iter().map(|q| q.to_string()).collect::<Vec<_>>();
    assert_eq!(root_poly, ["3/2", "3/2", "7/3", "0"]);
    assert_eq!(x1_poly, ["3/2", "3/2", "4/3", "1/2"]);
    let ev = &doc.events[0];
    let rec = ev.children.iter().find(|c| c.chart == x1.id).unwrap();
    assert_eq!(rec.comparison, Some(IotaOrdering::Less));
    let report = check_monotone(&doc);
    assert!(report.ok, "{:?}", report.failure);
    assert!(report.regular_parent > 0);
}

#[test]
fn corrupted_trace_fails_with_diagnostic() {
    let mut doc = resolve(xyz("x^2 + y^9*z^10"), &ResolveOptions::default()).unwrap().to_doc();
    let ev = doc.events[0].clone();
    let child = ev.children[0].chart;
    doc.charts[child].iota = doc.charts[ev.parent].iota.clone();
    let report = check_monotone(&doc);
    assert!(!report.ok);
    let f = report.failure.expect("diagnostic");
    assert_eq!((f.event, f.parent, f.child), (ev.index, ev.parent, child));
    assert_eq!(f.comparison, IotaOrdering::Equal);
    assert_eq!(f.parent_iota, f.child_iota);
}

#[test]
fn step_limit_is_reported() {
    let opts = ResolveOptions { max_steps: 1, ..Default::default() };
    let doc = resolve(xyz("x^2 + y^9*z^10"), &opts).unwrap().to_doc();
    assert_eq!(doc.status, TraceStatus::StepLimit);
    assert!(doc.charts.iter().all(|c| c.step <= 1));
}

#[test]
fn export_round_trip() {
    let doc = resolve(xyz("x^2 + y^3"), &ResolveOptions::default()).unwrap().to_doc();
    let json = serde_json::to_string(&doc).unwrap();
    let back: TraceDoc = serde_json::from_str(&json).unwrap();
    assert_eq!(back, doc);
    let dot = to_dot(&doc);
    assert!(dot.starts_with("digraph resolution {"));
    assert_eq!(dot.matches("->").count(), doc.events.iter().map(|e| e.children.len()).sum::<usize>());
    assert_eq!(doc.events[0].center.to_string(), "V(x,y)");
    assert!(dot.contains("c0 -> c1 [label=\"V(x,y) / "));
}
