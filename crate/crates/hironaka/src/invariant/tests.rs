use super::*;
use crate::blowup_engine::{blow_up_chart, locate_point};
use crate::exact_algebra::{var_list, Fpt, FptCtx, Q};
use crate::local_frame::BoundaryComponent;
use num_rational::BigRational;

fn chart<K: Field>(ctx: &K::Ctx, vars: &[&str], gens: &[&str], u: &[&str], y: &[&str], bnd: &[(&str, Status)]) -> ChartState<K> {
    let v = var_list(vars);
    let gens = gens.iter().map(|g| Polynomial::parse(ctx, &v, g).unwrap()).collect();
    let boundary = bnd.iter().map(|(g, s)| BoundaryComponent::new(Polynomial::parse(ctx, &v, g).unwrap(), *s, 0)).collect();
    let frame = Frame { u: u.iter().map(|s| s.to_string()).collect(), y: y.iter().map(|s| s.to_string()).collect(), boundary };
    ChartState::root(gens, frame).unwrap()
}

fn comps(c: &[&[&str]]) -> Vec<Vec<String>> {
    c.iter().map(|v| v.iter().map(|s| s.to_string()).collect()).collect()
}

fn tuple(v: &[(i64, i64)]) -> IotaPoly {
    IotaPoly([0, 1, 2, 3].map(|i| if v[i].1 == 0 { QInf::Inf } else { QInf::frac(v[i].0, v[i].1) }))
}

#[test]
fn iota0_examples() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["x^2 + y^9*z^10"], &["y", "z"], &["x"], &[]);
    assert_eq!(iota0(&c.gens, &c.frame).unwrap(), Iota0 { hs: NuStar(vec![2]), old: 0, e: 2, eo: 2 });
    let c = chart::<Q>(&(), &["x", "y", "z"], &["y"], &["x", "z"], &["y"], &[]);
    assert_eq!(iota0(&c.gens, &c.frame).unwrap(), Iota0 { hs: NuStar(vec![1]), old: 0, e: 2, eo: 2 });
    for p in [2u64, 3] {
        let ctx = FptCtx::new(p, "t");
        let c = chart::<Fpt>(&ctx, &["u1", "u2", "y"], &[&format!("y^{p} + t*u1^{p}")], &["u1", "u2"], &["y"], &[]);
        assert_eq!(iota0(&c.gens, &c.frame).unwrap(), Iota0 { hs: NuStar(vec![p as u32]), old: 0, e: 1, eo: 1 });
    }
}

#[test]
fn case_classification() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["x^2 + y^9*z^10"], &["y", "z"], &["x"], &[]);
    assert_eq!(classify_case(&c, &comps(&[&["x", "y"], &["x", "z"]])).unwrap(), CaseTag::III);
    assert_eq!(classify_case(&c, &comps(&[&["x", "y"]])).unwrap(), CaseTag::II);
    assert_eq!(classify_case(&c, &comps(&[&["x", "y", "z"]])).unwrap(), CaseTag::I);
    assert_eq!(classify_case(&c, &[]).unwrap(), CaseTag::IV);
    let r = chart::<Q>(&(), &["x", "y", "z"], &["y + x^2"], &["x", "z"], &["y"], &[]);
    assert_eq!(classify_case(&r, &[]).unwrap(), CaseTag::V);
    let r = chart::<Q>(&(), &["x", "y", "z"], &["y + x^2"], &["x", "z"], &["y"], &[("z", Status::Old)]);
    assert_eq!(classify_case(&r, &[]).unwrap(), CaseTag::IV);
}

#[test]
fn iota_c_values() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["x^2 + y^9*z^10"], &["y", "z"], &["x"], &[]);
    let opts = IotaOptions::default();
    let (ic, grid, _) = iota_c(&c, CaseTag::III, &comps(&[&["x", "y"], &["x", "z"]]), &opts).unwrap();
    assert_eq!(ic.hs, Some(NuStar(vec![1, 2])));
    assert_eq!((ic.old, ic.e, ic.eo), (0, 0, 0));
    assert_eq!(ic.delta, QInf::Inf);
    assert_eq!(grid, Some(2));
    let gens: Vec<String> = coordinate_intersection(&c, &comps(&[&["x", "y"], &["x", "z"]])).unwrap().iter().map(|g| g.to_string()).collect();
    assert_eq!(gens, vec!["x".to_string(), "y*z".to_string()]);
    assert_eq!(iota_c(&c, CaseTag::I, &[], &opts).unwrap().0, IotaC::permissible());
    assert_eq!(iota_c(&c, CaseTag::IV, &[], &opts).unwrap().0, IotaC::zeros());
}

#[test]
fn cusp_boundary_iota_poly() {
    let root = chart::<Q>(
        &(),
        &["u1", "u2", "y"],
        &["y^2 + (u2+u1)^3 + u1^7"],
        &["u1", "u2"],
        &["y"],
        &[("u1", Status::New), ("u2", Status::New)],
    );
    let opts = IotaOptions::default();
    let (ip, sides, lb) = iota_poly(&root, true, &opts).unwrap();
    assert_eq!(ip, tuple(&[(3, 2), (3, 2), (7, 3), (0, 1)]));
    assert_eq!(sides, vec![1, 2]);
    assert!(!lb);
    let c = blow_up_chart(&root, &Center::new(root.vars(), &root.vars().to_vec()).unwrap(), "u1").unwrap();
    let x1 = locate_point(&c, &[("u2".into(), BigRational::from_integer((-1).into()))]).unwrap();
    let (ip1, sides, _) = iota_poly(&x1, true, &opts).unwrap();
    assert_eq!(ip1, tuple(&[(3, 2), (3, 2), (4, 3), (1, 2)]));
    assert_eq!(sides, vec![1]);
    let a = compute_iota(&root, &[], &opts).unwrap();
    let b = compute_iota(&x1, &[], &opts).unwrap();
    assert_eq!(a.iota0, b.iota0);
    assert_eq!(a.iotac, b.iotac);
    assert_eq!(compare_iota(&b, &a), IotaOrdering::Less);
    assert_eq!(compare_iota(&a, &b), IotaOrdering::Greater);
    assert_eq!(compare_iota(&a, &a), IotaOrdering::Equal);
    // Without (5.1) the polyhedral part is infinite.
    assert_eq!(iota_poly(&root, false, &opts).unwrap().0, IotaPoly::infinite());
}

#[test]
fn inseparable_line_values() {
    for p in [2u64, 3] {
        let ctx = FptCtx::new(p, "t");
        let c = chart::<Fpt>(&ctx, &["u1", "phi", "z"], &[&format!("z^{p} + phi*u1^{p}")], &["u1", "phi"], &["z"], &[("u1", Status::New)]);
        let (ip, _, _) = iota_poly(&c, true, &IotaOptions::default()).unwrap();
        assert_eq!(ip, tuple(&[(1, p as i64), (1, p as i64), (1, 1), (1, 1)]));
        // At the origin of L = V(u1, y) with V(u1) old: e = e^O = 1 and δ^O = ∞.
        let c = chart::<Fpt>(&ctx, &["u1", "u2", "y"], &[&format!("y^{p} + t*u1^{p}")], &["u1", "u2"], &["y"], &[("u1", Status::Old)]);
        let i0 = iota0(&c.gens, &c.frame).unwrap();
        assert_eq!((i0.e, i0.eo), (1, 1));
        let (ip, _, _) = iota_poly(&c, true, &IotaOptions::default()).unwrap();
        assert_eq!(ip, IotaPoly([QInf::zero(), QInf::zero(), QInf::zero(), QInf::Inf]));
    }
}

#[test]
fn regular_chart_is_finished() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["y"], &["x", "z"], &["y"], &[]);
    let i = compute_iota(&c, &[], &IotaOptions::default()).unwrap();
    assert_eq!(i.case, CaseTag::V);
    assert_eq!(i.iotac, IotaC::zeros());
    assert_eq!(i.iotapoly, IotaPoly::zeros());
    assert_eq!(i.notes, vec![FINISHED_NOTE.to_string()]);
}

#[test]
fn comparison_order() {
    let c = chart::<Q>(&(), &["x", "y", "z"], &["x^2 + y^9*z^10"], &["y", "z"], &["x"], &[]);
    let r = chart::<Q>(&(), &["x", "y", "z"], &["y"], &["x", "z"], &["y"], &[]);
    let opts = IotaOptions::default();
    let big = compute_iota(&c, &comps(&[&["x", "y"], &["x", "z"]]), &opts).unwrap();
    let small = compute_iota(&r, &[], &opts).unwrap();
    assert_eq!(compare_iota(&small, &big), IotaOrdering::Less);
    let mut odd = small.clone();
    odd.iota0.hs = NuStar(vec![1, 3]);
    let mut other = small.clone();
    other.iota0.hs = NuStar(vec![2, 2]);
    assert_eq!(compare_iota(&odd, &other), IotaOrdering::Incomparable);
    let ser = serde_json::to_value(&big).unwrap();
    assert_eq!(ser["iotapoly"], serde_json::json!(["inf", "inf", "inf", "inf"]));
    assert_eq!(ser["case"], serde_json::json!("III"));
}
