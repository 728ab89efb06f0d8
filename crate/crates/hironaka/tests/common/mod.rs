//! Property checks shared by the proptest suite and the acceptance runner. Each check takes the
//! raw generated data, builds the instance over ℚ, 𝔽₂ or 𝔽₃ and compares against an oracle.

use std::sync::Arc;

use hironaka::blowup_engine::{blow_up_chart, classify_point, transform_polyhedron_expected, Center, ChartState, PolyhedronTransform};
use hironaka::char_polyhedron::{brute_force_vertices, polyhedron_of, prepare, FPolyhedron, PrepStatus};
use hironaka::exact_algebra::{multi_indices, var_list};
use hironaka::local_frame::{compute_directrix, invariant_under_point, Frame};
use hironaka::{Field, Fp, Polynomial, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError};

/// Passing cases per property.
pub const CASES: u32 = 256;
/// Preparation budget inside the properties; instances exceeding it are discarded.
pub const BUDGET: usize = 16;

pub fn config() -> Config {
    Config { cases: CASES, max_global_rejects: 1_000_000, failure_persistence: None, ..Config::default() }
}

/// Runs a generic check over ℚ, 𝔽₂ or 𝔽₃.
macro_rules! on_field {
    ($field:expr, $f:ident($($arg:expr),*)) => {
        match $field {
            0 => $f::<Q>(&(), $($arg),*),
            1 => $f::<Fp>(&2, $($arg),*),
            _ => $f::<Fp>(&3, $($arg),*),
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn frame<K: Field>(u: &[&str], y: &[&str]) -> Frame<K> {
    Frame { u: u.iter().map(|s| s.to_string()).collect(), y: y.iter().map(|s| s.to_string()).collect(), boundary: vec![] }
}

fn poly<K: Field>(ctx: &K::Ctx, vars: &Arc<Vec<String>>, terms: &[(Vec<u32>, i64)]) -> Polynomial<K> {
    Polynomial::from_terms(ctx, vars, terms.iter().map(|(e, c)| (e.clone(), K::from_i64(ctx, *c))))
}

/// Maps a raw draw into the range lo..=hi.
fn within(lo: u32, hi: u32, raw: u32) -> u32 {
    lo + raw % (hi - lo + 1)
}

fn nonzero(c: i64) -> i64 {
    if c == 0 {
        1
    } else {
        c
    }
}

// (a) Hull against the pairwise brute-force oracle.

pub fn points() -> impl Strategy<Value = Vec<(i64, i64, i64, i64)>> {
    prop::collection::vec((0i64..12, 1i64..5, 0i64..12, 1i64..5), 1..10)
}

pub fn hull_matches_oracle(raw: &[(i64, i64, i64, i64)]) -> Result<(), TestCaseError> {
    let pts: Vec<Vec<BigRational>> = raw.iter().map(|&(a, b, c, d)| vec![q(a, b), q(c, d)]).collect();
    let hull = FPolyhedron::from_points(2, pts.clone());
    let mut got: Vec<Vec<BigRational>> = hull.vertices.iter().map(|v| v.0.clone()).collect();
    got.sort();
    let mut want = brute_force_vertices(&pts);
    want.sort();
    prop_assert_eq!(&got, &want);
    for p in &pts {
        prop_assert!(hull.contains(p), "input point {:?} outside its hull", p);
    }
    Ok(())
}

// Random surfaces y^ν + Σ c u1^a u2^b y^k of order ν with (u1, u2; y) frame.

pub type SurfaceData = (usize, u32, Vec<(u32, u32, u32, i64)>, (u32, u32, i64));

pub fn surfaces() -> impl Strategy<Value = SurfaceData> {
    (0usize..3, 2u32..4, prop::collection::vec((0u32..7, 0u32..7, 0u32..3, -3i64..4), 0..5), (0u32..3, 0u32..3, -2i64..3))
}

/// Builds the surface: terms of order at least ν and y-degree below ν, followed by the translation
/// y ↦ y + λ u1^i u2^j (which creates solvable vertices).
fn surface<K: Field>(ctx: &K::Ctx, nu: u32, terms: &[(u32, u32, u32, i64)], shift: (u32, u32, i64)) -> Polynomial<K> {
    let vars = var_list(&["u1", "u2", "y"]);
    let mut t = vec![(vec![0, 0, nu], 1)];
    for &(a, b, k, c) in terms {
        // u-degree s in [ν − k, 6 − k], split as a' + b' = s.
        let k = k % nu;
        let s = within(nu - k, 6 - k, a + b);
        let a = a % (s + 1);
        t.push((vec![a, s - a, k], nonzero(c)));
    }
    let f = poly::<K>(ctx, &vars, &t);
    let (i, j, l) = shift;
    if l == 0 || i + j == 0 || (i + j) * nu > 6 {
        return f;
    }
    let y = Polynomial::var(ctx, &vars, "y").unwrap();
    let m = Polynomial::monomial(ctx, &vars, vec![i, j, 0], K::from_i64(ctx, l));
    f.substitute("y", &y.add(&m)).unwrap()
}

// (b) Predicted polyhedron of the origin of the u1-chart against the recomputed prepared one.

fn transform_case<K: Field>(ctx: &K::Ctx, nu: u32, terms: &[(u32, u32, u32, i64)], shift: (u32, u32, i64)) -> Result<(), TestCaseError> {
    let f = surface::<K>(ctx, nu, terms, shift);
    let fr = frame::<K>(&["u1", "u2"], &["y"]);
    let prep = prepare(&[f], &fr, BUDGET).unwrap();
    prop_assume!(prep.status != PrepStatus::BudgetExhausted);
    let parent = ChartState::root(prep.gens.clone(), prep.frame.clone()).unwrap();
    let center = Center::new(parent.vars(), &parent.vars().to_vec()).unwrap();
    let child = blow_up_chart(&parent, &center, "u1").unwrap();
    let cl = classify_point(&parent, &child).unwrap();
    prop_assume!(cl.near && cl.very_near);
    let recomputed = prepare(&child.gens, &child.frame, BUDGET).unwrap();
    prop_assume!(recomputed.status != PrepStatus::BudgetExhausted);
    let (expected, negative) = transform_polyhedron_expected(&prep.polyhedron, PolyhedronTransform::Point { chart: 0 }).unwrap();
    prop_assert!(!negative, "very near point with a negative predicted vertex");
    prop_assert_eq!(&recomputed.polyhedron, &expected, "parent {} child {}", prep.gens[0], child.gens[0]);
    Ok(())
}

pub fn transform_matches_recomputed(d: &SurfaceData) -> Result<(), TestCaseError> {
    let (field, nu, terms, shift) = d;
    on_field!(*field, transform_case(*nu, terms, *shift))
}

// (c) e = 1: δ drops by exactly one at the very near origin of the u1-chart.

pub type CurveData = (usize, u32, Vec<(u32, u32, u32, i64)>);

pub fn e1_surfaces() -> impl Strategy<Value = CurveData> {
    (0usize..3, 2u32..4, prop::collection::vec((0u32..7, 0u32..3, 0u32..3, -3i64..4), 1..5))
}

fn delta_drop_case<K: Field>(ctx: &K::Ctx, nu: u32, terms: &[(u32, u32, u32, i64)]) -> Result<(), TestCaseError> {
    let vars = var_list(&["u1", "y1", "y2"]);
    // Initial forms with a two-dimensional directrix in the y-block (e = 1) in every characteristic.
    let mut t = match nu {
        2 => vec![(vec![0, 1, 1], 1)],
        _ => vec![(vec![0, 2, 1], 1), (vec![0, 1, 2], 1)],
    };
    for &(a, b1, b2, c) in terms {
        // y-exponents with |B| < ν and u1-degree in [ν − |B| + 1, 6 − |B|].
        let b1 = b1 % nu;
        let b2 = b2 % (nu - b1);
        let a = within(nu - b1 - b2 + 1, 6 - b1 - b2, a);
        t.push((vec![a, b1, b2], nonzero(c)));
    }
    let f = poly::<K>(ctx, &vars, &t);
    let fr = frame::<K>(&["u1"], &["y1", "y2"]);
    let parent = ChartState::root(vec![f], fr).unwrap();
    prop_assert_eq!(compute_directrix(&[parent.gens[0].initial_form(&[]).unwrap()]).unwrap().e, 1);
    let prep = prepare(&parent.gens, &parent.frame, BUDGET).unwrap();
    prop_assume!(prep.status != PrepStatus::BudgetExhausted);
    let prepared = ChartState::root(prep.gens.clone(), prep.frame.clone()).unwrap();
    let center = Center::new(prepared.vars(), &prepared.vars().to_vec()).unwrap();
    let child = blow_up_chart(&prepared, &center, "u1").unwrap();
    let cl = classify_point(&prepared, &child).unwrap();
    prop_assume!(cl.near && cl.very_near);
    let after = prepare(&child.gens, &child.frame, BUDGET).unwrap();
    prop_assume!(after.status != PrepStatus::BudgetExhausted);
    let before = prep.polyhedron.delta();
    let expected = match before.finite() {
        Some(d) => hironaka::QInf::Fin(d - q(1, 1)),
        None => hironaka::QInf::Inf,
    };
    prop_assert_eq!(after.polyhedron.delta(), expected, "parent {} child {}", prep.gens[0], child.gens[0]);
    Ok(())
}

pub fn delta_drops_by_one(d: &CurveData) -> Result<(), TestCaseError> {
    let (field, nu, terms) = d;
    on_field!(*field, delta_drop_case(*nu, terms))
}

// (d) One preparation step removes the solved vertex, shrinks Δ and keeps the other vertices.

fn preparation_case<K: Field>(ctx: &K::Ctx, nu: u32, terms: &[(u32, u32, u32, i64)], shift: (u32, u32, i64)) -> Result<(), TestCaseError> {
    let f = surface::<K>(ctx, nu, terms, shift);
    let fr = frame::<K>(&["u1", "u2"], &["y"]);
    let before = polyhedron_of(std::slice::from_ref(&f), &fr).unwrap();
    let one = prepare(&[f], &fr, 1).unwrap();
    prop_assume!(!one.log.is_empty());
    let v = &one.log[0].vertex;
    let after = &one.polyhedron;
    prop_assert!(before.has_vertex(&v.0), "solved vertex {} is not a vertex of {}", v, before);
    prop_assert!(before.contains_polyhedron(after), "{} does not contain {}", before, after);
    prop_assert!(!after.has_vertex(&v.0), "solved vertex {} survives in {}", v, after);
    for w in before.vertices.iter().filter(|w| *w != v) {
        prop_assert!(after.has_vertex(&w.0), "vertex {} of {} lost in {}", w, before, after);
    }
    prop_assert!(after.delta() >= before.delta());
    Ok(())
}

pub fn preparation_is_monotone(d: &SurfaceData) -> Result<(), TestCaseError> {
    let (field, nu, terms, shift) = d;
    on_field!(*field, preparation_case(*nu, terms, *shift))
}

// (e) Directrix dimension against exhaustive translation tests over 𝔽₂ and 𝔽₃.

pub type FormData = (u64, usize, usize, u32, Vec<Vec<u64>>, Vec<(Vec<u32>, u64)>);

pub fn forms() -> impl Strategy<Value = FormData> {
    (prop_oneof![Just(2u64), Just(3u64)], 2usize..5, 1usize..4, 1u32..5).prop_flat_map(|(p, n, m, d)| {
        (
            Just(p),
            Just(n),
            Just(m),
            Just(d),
            prop::collection::vec(prop::collection::vec(0u64..p, n), m),
            prop::collection::vec((prop::collection::vec(0u32..=d, m), 1u64..p), 1..5),
        )
    })
}

/// A form of degree d in m random linear forms ℓ_1..ℓ_m of n variables, so e ≥ n − m.
pub fn directrix_matches_oracle(data: &FormData) -> Result<(), TestCaseError> {
    let (p, n, m, d, lin, mons) = data;
    let names: Vec<String> = (1..=*n).map(|i| format!("x{}", i)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let vars = var_list(&refs);
    let ell: Vec<Polynomial<Fp>> = lin
        .iter()
        .map(|row| {
            Polynomial::from_terms(p, &vars, row.iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0u32; *n];
                e[i] = 1;
                (e, Fp::new(*p, c as i64))
            }))
        })
        .collect();
    let mut f = Polynomial::zero(p, &vars);
    for (exps, c) in mons {
        // Spread the degree d over the m linear forms: the last form takes the remainder.
        let mut left = *d;
        let mut term = Polynomial::constant(p, &vars, Fp::new(*p, *c as i64));
        for (k, l) in ell.iter().enumerate().take(*m) {
            let e = if k + 1 == *m { left } else { exps[k].min(left) };
            left -= e;
            term = term.mul(&l.pow(e));
        }
        f = f.add(&term);
    }
    prop_assume!(!f.is_zero());
    let dir = compute_directrix(&[f.clone()]).unwrap();
    let elems = Fp::elements(p).unwrap();
    let mut count = 0u64;
    let mut w = vec![elems[0]; *n];
    for idx in 0..(*p as usize).pow(*n as u32) {
        let mut r = idx;
        for slot in w.iter_mut() {
            *slot = elems[r % *p as usize];
            r /= *p as usize;
        }
        if invariant_under_point(&f, &w) {
            count += 1;
        }
    }
    prop_assert_eq!(count, p.pow(dir.e as u32), "f = {} over F_{}", f, p);
    Ok(())
}

// (f) Taylor identity f(x + h) = Σ_A D_A f(x) h^A for Hasse derivatives.

pub type TaylorData = (usize, Vec<(u32, u32, i64)>);

pub fn bivariate() -> impl Strategy<Value = TaylorData> {
    (0usize..3, prop::collection::vec((0u32..7, 0u32..7, -4i64..5), 0..6))
}

fn taylor_case<K: Field>(ctx: &K::Ctx, terms: &[(u32, u32, i64)]) -> Result<(), TestCaseError> {
    let vars = var_list(&["x1", "x2", "h1", "h2"]);
    let t: Vec<(Vec<u32>, i64)> = terms.iter().filter(|(a, b, _)| a + b <= 6).map(|&(a, b, c)| (vec![a, b, 0, 0], c)).collect();
    let f = poly::<K>(ctx, &vars, &t);
    let var = |s: &str| Polynomial::var(ctx, &vars, s).unwrap();
    let lhs = f.substitute("x1", &var("x1").add(&var("h1"))).unwrap().substitute("x2", &var("x2").add(&var("h2"))).unwrap();
    let mut rhs = Polynomial::zero(ctx, &vars);
    for a in multi_indices(2, 6) {
        let d = f.hasse_derivative(&[a[0], a[1], 0, 0]);
        rhs = rhs.add(&d.mul_monomial(&[0, 0, a[0], a[1]], &K::one(ctx)));
    }
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn taylor_identity(d: &TaylorData) -> Result<(), TestCaseError> {
    let (field, terms) = d;
    on_field!(*field, taylor_case(terms))
}
