use super::*;
use crate::exact_algebra::{var_list, Fp, Fpt, FptCtx, Q};

fn qp(vars: &[&str], s: &str) -> Polynomial<Q> {
    Polynomial::parse(&(), &var_list(vars), s).unwrap()
}

#[test]
fn initial_form_examples() {
    let f = qp(&["x", "y", "z"], "x^2 - y^2*z");
    assert_eq!(initial_form(&f, &[]).unwrap(), qp(&["x", "y", "z"], "x^2"));
    let v = var_list(&["t", "x", "y", "z"]);
    let g = Polynomial::<Fp>::parse(&2, &v, "t^2 + x*y^2 + z^3 + x^5*y").unwrap();
    assert_eq!(g.initial_form(&[]).unwrap().to_string(), "t^2");
    assert!(initial_form(&qp(&["x"], "0"), &[]).is_err());
}

#[test]
fn nu_star_examples() {
    let v = ["x", "y", "z"];
    assert_eq!(nu_star(&[qp(&v, "x^2 + y^9*z^10")]).unwrap(), NuStar(vec![2]));
    assert_eq!(nu_star(&[qp(&v, "y")]).unwrap(), NuStar(vec![1]));
    assert_eq!(nu_star(&[qp(&v, "x*(x^2+y^3)")]).unwrap(), NuStar(vec![3]));
    assert!(nu_star(&[qp(&v, "0")]).is_err());
}

#[test]
fn nu_star_orders() {
    let a = NuStar(vec![1]);
    let b = NuStar(vec![2]);
    assert!(a < b);
    assert!(NuStar(vec![2, 3]) < NuStar(vec![2]));
    assert_eq!(NuStar(vec![1, 5]).product_cmp(&NuStar(vec![2, 3])), None);
}

fn boundary(vars: &[&str], gens: &[(&str, Status)]) -> Frame<Q> {
    Frame {
        u: vec![],
        y: vars.iter().map(|s| s.to_string()).collect(),
        boundary: gens.iter().map(|(g, s)| BoundaryComponent::new(qp(vars, g), *s, 0)).collect(),
    }
}

#[test]
fn compose_examples() {
    let v = ["u1", "u2", "y"];
    let f = qp(&v, "y^2 + u1^3");
    assert_eq!(compose_with_old_boundary(std::slice::from_ref(&f), &boundary(&v, &[])), vec![f.clone()]);
    let fr = boundary(&v, &[("u1", Status::Old)]);
    let jo = compose_with_old_boundary(std::slice::from_ref(&f), &fr);
    assert_eq!(jo, vec![qp(&v, "u1*y^2 + u1^4")]);
    assert_eq!(nu_star(&jo).unwrap(), NuStar(vec![3]));
    let fr2 = boundary(&v, &[("u1", Status::Old), ("u2", Status::Old)]);
    assert_eq!(compose_with_old_boundary(std::slice::from_ref(&f), &fr2), vec![f.mul(&qp(&v, "u1*u2"))]);
}

#[test]
fn ridge_examples() {
    let r = compute_ridge(&[qp(&["y"], "y^2")]).unwrap();
    assert_eq!(r, vec![qp(&["y"], "y")]);
    let r2 = compute_ridge(&[qp(&["u", "y"], "(y+u)^2")]).unwrap();
    assert_eq!(r2.len(), 1);
    assert_eq!(r2[0], qp(&["u", "y"], "y + u"));
    for p in [2u64, 3] {
        let c = FptCtx::new(p, "t");
        let v = var_list(&["u1", "u2", "y"]);
        let f = Polynomial::<Fpt>::parse(&c, &v, &format!("y^{p} + t*u1^{p}")).unwrap();
        assert_eq!(compute_ridge(std::slice::from_ref(&f)).unwrap(), vec![f]);
    }
}

#[test]
fn directrix_examples() {
    for p in [2u64, 3] {
        let c = FptCtx::new(p, "t");
        let v = var_list(&["u1", "u2", "y"]);
        let f = Polynomial::<Fpt>::parse(&c, &v, &format!("y^{p} + t*u1^{p}")).unwrap();
        let d = compute_directrix(&[f]).unwrap();
        assert_eq!((d.r, d.e), (2, 1));
        assert!(d.certified);
        let g = Polynomial::<Fpt>::parse(&c, &v, &format!("(y + t*u1)^{p}")).unwrap();
        let d = compute_directrix(&[g]).unwrap();
        assert_eq!((d.r, d.e), (1, 2));
        assert!(d.certified);
    }
    let d = compute_directrix(&[qp(&["x", "y", "z"], "x^2")]).unwrap();
    assert_eq!((d.r, d.e), (1, 2));
    assert!(d.certified);
}

#[test]
fn directrix_of_jo_examples() {
    let v = ["u1", "u2", "y"];
    let f = qp(&v, "y^2 + u1^3");
    let none = boundary(&v, &[]);
    assert_eq!(directrix_of_jo(std::slice::from_ref(&f), &none).unwrap().e, 2);
    let old_u1 = boundary(&v, &[("u1", Status::Old)]);
    let d = directrix_of_jo(std::slice::from_ref(&f), &old_u1).unwrap();
    assert_eq!(d.e, 1);
    assert!(d.certified);
    let old_y = boundary(&v, &[("y + u2^2", Status::Old)]);
    assert_eq!(directrix_of_jo(&[f], &old_y).unwrap().e, 2);
}

#[test]
fn directrix_matches_exhaustive_oracle_small() {
    let v = var_list(&["a", "b", "c"]);
    let cases = ["a^2 + b^2", "a^2 + a*b", "a^3 + b^3 + c^3", "a^2*b + b^3", "(a+b+c)^3", "a*b*c"];
    for p in [2u64, 3] {
        for s in cases {
            let f = Polynomial::<Fp>::parse(&p, &v, s).unwrap();
            let d = compute_directrix(std::slice::from_ref(&f)).unwrap();
            let elems = Fp::elements(&p).unwrap();
            let mut count = 0u32;
            for a in &elems {
                for b in &elems {
                    for c in &elems {
                        if invariant_under_point(&f, &[*a, *b, *c]) {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(count as u64, p.pow(d.e as u32), "{} over F_{}", s, p);
        }
    }
}

#[test]
fn adapt_frame_makes_forms_coordinates() {
    let v = ["u1", "u2", "y"];
    let f = qp(&v, "(y + u2)^2 + u1^3");
    let d = compute_directrix(&[f.initial_form(&[]).unwrap()]).unwrap();
    assert_eq!(d.r, 1);
    let bnd = vec![BoundaryComponent::new(qp(&v, "u1"), Status::New, 0)];
    let a = adapt_frame(&[f], &bnd, &d.forms, &[2], &[0]).unwrap();
    assert_eq!(a.frame.u, vec!["u1".to_string(), "u2".to_string()]);
    assert_eq!(a.frame.y, vec!["y".to_string()]);
    assert_eq!(a.gens[0], qp(&v, "y^2 + u1^3"));
    assert_eq!(a.frame.boundary[0].generator, qp(&v, "u1"));
}

#[test]
fn standard_basis_check_detects_redundancy() {
    let v = ["x", "y"];
    assert!(standard_basis_check(&[qp(&v, "x^2"), qp(&v, "y^3")]).is_ok());
    assert!(standard_basis_check(&[qp(&v, "x"), qp(&v, "x*y + y^5")]).is_err());
    assert!(standard_basis_check(&[qp(&v, "y^3"), qp(&v, "x^2")]).is_err());
}
