//! Sparse multivariate polynomials over a [`Field`] with a fixed ambient variable list.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::{binomial_in, Field};
use super::multi_indices;
use crate::error::{Error, Result};

/// Exponent vector indexed like the ambient variable list.
pub type Exp = Vec<u32>;

/// A polynomial: a canonical map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<K: Field> {
    ctx: K::Ctx,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exp, K>,
}

impl<K: Field> Polynomial<K> {
    pub fn zero(ctx: &K::Ctx, vars: &Arc<Vec<String>>) -> Self {
        Polynomial { ctx: ctx.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &K::Ctx, vars: &Arc<Vec<String>>, c: K) -> Self {
        let mut p = Self::zero(ctx, vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(ctx: &K::Ctx, vars: &Arc<Vec<String>>) -> Self {
        Self::constant(ctx, vars, K::one(ctx))
    }

    pub fn monomial(ctx: &K::Ctx, vars: &Arc<Vec<String>>, exp: Exp, c: K) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent length mismatch");
        let mut p = Self::zero(ctx, vars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The coordinate function of the variable at `idx`.
    pub fn var_at(ctx: &K::Ctx, vars: &Arc<Vec<String>>, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(ctx, vars, e, K::one(ctx))
    }

    pub fn var(ctx: &K::Ctx, vars: &Arc<Vec<String>>, name: &str) -> Result<Self> {
        let idx = index_of(vars, name)?;
        Ok(Self::var_at(ctx, vars, idx))
    }

    pub fn from_terms(ctx: &K::Ctx, vars: &Arc<Vec<String>>, terms: impl IntoIterator<Item = (Exp, K)>) -> Self {
        let mut p = Self::zero(ctx, vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }
    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &K)> {
        self.terms.iter()
    }
    pub fn term_map(&self) -> &BTreeMap<Exp, K> {
        &self.terms
    }
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }
    pub fn coeff(&self, e: &[u32]) -> K {
        self.terms.get(e).cloned().unwrap_or_else(|| K::zero(&self.ctx))
    }
    /// Value at the origin.
    pub fn constant_term(&self) -> K {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        index_of(&self.vars, name)
    }

    /// Adds `c·X^e` in place.
    pub fn add_term(&mut self, e: Exp, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_compatible(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars,
            "polynomials over different variable lists: {:?} vs {:?}",
            self.vars,
            o.vars
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = c.neg();
        }
        r
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero(&self.ctx, &self.vars);
        }
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = c.mul(k);
        }
        r
    }

    /// Multiplies by the monomial `c·X^e`.
    pub fn mul_monomial(&self, e: &[u32], c: &K) -> Self {
        let mut r = Self::zero(&self.ctx, &self.vars);
        if c.is_zero() {
            return r;
        }
        for (f, d) in &self.terms {
            let g: Exp = f.iter().zip(e).map(|(a, b)| a + b).collect();
            r.terms.insert(g, d.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx, &self.vars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[idx]).max()
    }

    /// Order along the coordinate prime generated by the variables at `idxs`; `None` means ∞.
    pub fn ord_at_idx(&self, idxs: &[usize]) -> Option<u32> {
        self.terms.keys().map(|e| idxs.iter().map(|&i| e[i]).sum()).min()
    }

    /// Order along the coordinate prime ⟨names⟩; `None` means ∞ (f = 0).
    pub fn ord_at(&self, names: &[&str]) -> Result<Option<u32>> {
        let idxs = names.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>>>()?;
        Ok(self.ord_at_idx(&idxs))
    }

    /// Order at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Terms of degree exactly `d` in the variables at `idxs`.
    pub fn homogeneous_part_idx(&self, idxs: &[usize], d: u32) -> Self {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            if idxs.iter().map(|&i| e[i]).sum::<u32>() == d {
                r.terms.insert(e.clone(), c.clone());
            }
        }
        r
    }

    /// Initial form with respect to the variables at `idxs`.
    pub fn initial_form_idx(&self, idxs: &[usize]) -> Result<Self> {
        match self.ord_at_idx(idxs) {
            None => Err(Error::Domain("initial form of the zero polynomial".into())),
            Some(d) => Ok(self.homogeneous_part_idx(idxs, d)),
        }
    }

    /// Initial form with respect to the named variables (all variables when `at` is empty).
    pub fn initial_form(&self, at: &[&str]) -> Result<Self> {
        let idxs: Vec<usize> = if at.is_empty() {
            (0..self.nvars()).collect()
        } else {
            at.iter().map(|n| self.index_of(n)).collect::<Result<_>>()?
        };
        self.initial_form_idx(&idxs)
    }

    /// True when every term has the same total degree in the variables at `idxs`.
    pub fn is_homogeneous_in(&self, idxs: &[usize]) -> bool {
        let mut d = None;
        for e in self.terms.keys() {
            let s: u32 = idxs.iter().map(|&i| e[i]).sum();
            match d {
                None => d = Some(s),
                Some(x) if x != s => return false,
                _ => {}
            }
        }
        true
    }

    /// Hasse–Schmidt derivative D_A f: the coefficient of Z^A in f(X + Z).
    pub fn hasse_derivative(&self, a: &[u32]) -> Self {
        assert_eq!(a.len(), self.nvars(), "multi-index length mismatch");
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            if e.iter().zip(a).any(|(x, y)| x < y) {
                continue;
            }
            let mut coef = c.clone();
            for (x, y) in e.iter().zip(a) {
                if *y > 0 {
                    coef = coef.mul(&binomial_in::<K>(&self.ctx, *x as u64, *y as u64));
                    if coef.is_zero() {
                        break;
                    }
                }
            }
            let f: Exp = e.iter().zip(a).map(|(x, y)| x - y).collect();
            r.add_term(f, coef);
        }
        r
    }

    /// Applies the coefficient Hasse derivative of order `j` (along the p-basis of the field).
    pub fn coefficient_hasse(&self, j: u32) -> Self {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.coefficient_hasse(j));
        }
        r
    }

    /// The nonzero absolute Hasse derivatives D_t^(j) D_A f with j + |A| ≤ k, where t runs over
    /// the p-basis of the coefficient field. Their common zeros near a point are the locus where
    /// f has order above k.
    pub fn absolute_derivatives(&self, k: u32) -> Vec<Self> {
        let n = self.nvars();
        let extra = if K::p_basis_size(&self.ctx) > 0 { k } else { 0 };
        let mut out = Vec::new();
        for j in 0..=extra {
            for a in multi_indices(n, k - j) {
                let d = self.hasse_derivative(&a).coefficient_hasse(j);
                if !d.is_zero() && !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Replaces the variable at `idx` by `expr`.
    pub fn substitute_idx(&self, idx: usize, expr: &Self) -> Self {
        self.check_compatible(expr);
        let mut groups: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[idx];
            let mut f = e.clone();
            f[idx] = 0;
            groups.entry(k).or_insert_with(|| Self::zero(&self.ctx, &self.vars)).add_term(f, c.clone());
        }
        let mut r = Self::zero(&self.ctx, &self.vars);
        let mut power = Self::one(&self.ctx, &self.vars);
        let mut current = 0u32;
        for (k, g) in groups {
            while current < k {
                power = power.mul(expr);
                current += 1;
            }
            r = r.add(&g.mul(&power));
        }
        r
    }

    pub fn substitute(&self, var: &str, expr: &Self) -> Result<Self> {
        let idx = self.index_of(var)?;
        if expr.vars != self.vars {
            return Err(Error::Input("substitution over a different variable list".into()));
        }
        Ok(self.substitute_idx(idx, expr))
    }

    /// Applies w ← w·v for every w at `others` (v at `chart`): a monomial substitution.
    pub fn monomial_blowup(&self, others: &[usize], chart: usize) -> Self {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            for &w in others {
                f[chart] += e[w];
            }
            r.add_term(f, c.clone());
        }
        r
    }

    /// Exact division by X_idx^k; `None` when some term is not divisible.
    pub fn divide_by_var_power(&self, idx: usize, k: u32) -> Option<Self> {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            if e[idx] < k {
                return None;
            }
            let mut f = e.clone();
            f[idx] -= k;
            r.terms.insert(f, c.clone());
        }
        Some(r)
    }

    /// Sets the variables at `idxs` to zero.
    pub fn restrict_zero(&self, idxs: &[usize]) -> Self {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            if idxs.iter().all(|&i| e[i] == 0) {
                r.terms.insert(e.clone(), c.clone());
            }
        }
        r
    }

    /// Sets the variable at `idx` to the constant `value`.
    pub fn evaluate_var(&self, idx: usize, value: &K) -> Self {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[idx] = 0;
            r.add_term(f, c.mul(&value.pow(e[idx] as u64)));
        }
        r
    }

    /// Value at a point given by one field element per ambient variable.
    pub fn evaluate(&self, point: &[K]) -> K {
        let mut acc = K::zero(&self.ctx);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&x.pow(k as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Exponent-wise minimum over all terms (the largest monomial dividing f).
    pub fn monomial_content(&self) -> Exp {
        let mut it = self.terms.keys();
        let mut m = match it.next() {
            None => return vec![0; self.nvars()],
            Some(e) => e.clone(),
        };
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divides by a monomial that divides every term.
    pub fn divide_monomial(&self, m: &[u32]) -> Option<Self> {
        let mut r = Self::zero(&self.ctx, &self.vars);
        for (e, c) in &self.terms {
            if e.iter().zip(m).any(|(a, b)| a < b) {
                return None;
            }
            r.terms.insert(e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone());
        }
        Some(r)
    }

    /// Re-expresses the polynomial over a new variable list containing all used variables.
    pub fn with_vars(&self, new_vars: &Arc<Vec<String>>) -> Result<Self> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, v) in self.vars.iter().enumerate() {
            match new_vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] > 0) {
                        return Err(Error::Input(format!("variable {} missing from the new variable list", v)));
                    }
                    map.push(None)
                }
            }
        }
        let mut r = Self::zero(&self.ctx, new_vars);
        for (e, c) in &self.terms {
            let mut f = vec![0; new_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    f[j] = k;
                }
            }
            r.terms.insert(f, c.clone());
        }
        Ok(r)
    }

    /// Maps coefficients into another field (for example ℚ-free lifts or field extensions).
    pub fn map_coeffs<L: Field>(&self, ctx: &L::Ctx, f: impl Fn(&K) -> L) -> Polynomial<L> {
        let mut r = Polynomial::<L>::zero(ctx, &self.vars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }

    /// Terms sorted for display: ascending total degree, ties in descending lexicographic order.
    pub fn display_order(&self) -> Vec<(&Exp, &K)> {
        let mut v: Vec<(&Exp, &K)> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        v
    }

    pub fn monomial_text(&self, e: &[u32]) -> String {
        monomial_text(&self.vars, e)
    }
}

pub fn monomial_text(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{}^{}", v, k) })
        .collect();
    parts.join("*")
}

pub fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::Input(format!("unknown variable {}", name)))
}

/// Shared variable list from names.
pub fn var_list<S: AsRef<str>>(names: &[S]) -> Arc<Vec<String>> {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

impl<K: Field> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.display_order().into_iter().enumerate() {
            let ct = c.coeff_text();
            let mono = monomial_text(&self.vars, e);
            let body = if mono.is_empty() {
                if ct.atomic {
                    ct.text.clone()
                } else {
                    format!("({})", ct.text)
                }
            } else if ct.text == "1" {
                mono
            } else if ct.atomic {
                format!("{}*{}", ct.text, mono)
            } else {
                format!("({})*{}", ct.text, mono)
            };
            match (i, ct.negative) {
                (0, false) => write!(f, "{}", body)?,
                (0, true) => write!(f, "-{}", body)?,
                (_, false) => write!(f, " + {}", body)?,
                (_, true) => write!(f, " - {}", body)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{Fp, Q};

    fn vars3() -> Arc<Vec<String>> {
        var_list(&["x", "y", "z"])
    }

    fn q(s: &str) -> Polynomial<Q> {
        Polynomial::parse(&(), &vars3(), s).unwrap()
    }

    #[test]
    fn ord_examples() {
        let f = q("x^2 + y^9*z^10");
        assert_eq!(f.ord_at(&["x", "y", "z"]).unwrap(), Some(2));
        assert_eq!(f.ord_at(&["x", "z"]).unwrap(), Some(2));
        assert_eq!(q("0").ord_at(&["x"]).unwrap(), None);
        assert!(f.ord_at(&["w"]).is_err());
    }

    #[test]
    fn hasse_examples() {
        let f = q("x^2");
        assert_eq!(f.hasse_derivative(&[1, 0, 0]), q("2*x"));
        let v = var_list(&["x", "y"]);
        let g = Polynomial::<Fp>::parse(&2, &v, "y^2").unwrap();
        assert!(g.hasse_derivative(&[0, 1]).is_zero());
        assert_eq!(g.hasse_derivative(&[0, 2]), Polynomial::one(&2, &v));
        let h = Polynomial::<Fp>::parse(&3, &v, "x^3*y + x*y").unwrap();
        assert_eq!(h.hasse_derivative(&[1, 0]), Polynomial::parse(&3, &v, "y").unwrap());
    }

    #[test]
    fn display_order_matches_convention() {
        assert_eq!(q("y^9*z^10 + x^2").to_string(), "x^2 + y^9*z^10");
        assert_eq!(q("x^3*y^3 + z^3 + x^2*y^2*z").to_string(), "z^3 + x^2*y^2*z + x^3*y^3");
        assert_eq!(q("-x + 3/2*y - 1").to_string(), "-1 - x + 3/2*y");
    }

    #[test]
    fn substitute_identity_and_inverse() {
        let f = q("x^3 + x*y*z + 5");
        let x = q("x");
        assert_eq!(f.substitute("x", &x).unwrap(), f);
        let g = f.substitute("x", &q("x + y*z")).unwrap();
        assert_eq!(g.substitute("x", &q("x - y*z")).unwrap(), f);
    }

    #[test]
    fn exact_division() {
        let f = q("x^2*y + x^3");
        assert_eq!(f.divide_by_var_power(0, 2).unwrap(), q("y + x"));
        assert!(f.divide_by_var_power(0, 3).is_none());
        assert!(Field::is_one(&q("1").constant_term()));
    }
}
