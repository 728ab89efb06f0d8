//! Exact coefficient fields and multivariate polynomial arithmetic: Hasse–Schmidt derivatives,
//! substitutions, p-th roots and linear algebra.

pub mod field;
pub mod fp;
pub mod fpt;
pub mod fpx;
pub mod gf;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod qinf;
pub mod rational;

pub use field::{binomial_in, horner, is_power_of, is_prime, CoeffText, Field, FieldDescriptor, FieldKind};
pub use fp::Fp;
pub use fpt::{Fpt, FptCtx};
pub use gf::{gf_context, Gf, GfCtx};
pub use poly::{index_of, monomial_text, var_list, Exp, Polynomial};
pub use qinf::{factorial, rational_text, QInf};
pub use rational::Q;

use crate::error::Result;

/// p-th root of a field element: `Ok(None)` when it does not exist, an error in characteristic 0.
pub fn p_th_root<K: Field>(c: &K) -> Result<Option<K>> {
    c.pth_root()
}

/// Hasse–Schmidt derivative D_A f.
pub fn hasse_derivative<K: Field>(f: &Polynomial<K>, a: &[u32]) -> Polynomial<K> {
    f.hasse_derivative(a)
}

/// All multi-indices A of length n with |A| ≤ d.
pub fn multi_indices(n: usize, d: u32) -> Vec<Exp> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Exp, out: &mut Vec<Exp>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All multi-indices of length n with |A| = d.
pub fn multi_indices_exact(n: usize, d: u32) -> Vec<Exp> {
    multi_indices(n, d).into_iter().filter(|e| e.iter().sum::<u32>() == d).collect()
}
