//! Dense univariate polynomials over 𝔽p, stored low degree first without trailing zeros.
//! They back the rational function field 𝔽p(t) and finite extensions 𝔽p[a]/(m).

use super::field::mod_pow;

pub type Upoly = Vec<u64>;

pub fn trim(mut a: Upoly) -> Upoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn constant(c: u64, p: u64) -> Upoly {
    trim(vec![c % p])
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Upoly {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        r.push((x + y) % p);
    }
    trim(r)
}

pub fn neg(a: &[u64], p: u64) -> Upoly {
    trim(a.iter().map(|&x| (p - x) % p).collect())
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Upoly {
    add(a, &neg(b, p), p)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Upoly {
    trim(a.iter().map(|&x| ((x as u128 * c as u128) % p as u128) as u64).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Upoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    trim(r.into_iter().map(|x| x as u64).collect())
}

pub fn inv_scalar(c: u64, p: u64) -> u64 {
    mod_pow(c, p - 2, p)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Upoly, Upoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r: Upoly = a.to_vec();
    let db = b.len() - 1;
    let lc_inv = inv_scalar(b[db], p);
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let c = ((r[dr] as u128 * lc_inv as u128) % p as u128) as u64;
        let shift = dr - db;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let t = ((c as u128 * bi as u128) % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(a: &[u64], p: u64) -> Upoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, inv_scalar(lc, p), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Upoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Extended gcd: returns (g, s, t) with s·a + t·b = g, g monic.
pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (Upoly, Upoly, Upoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(&lc) => {
            let i = inv_scalar(lc, p);
            (scale(&r0, i, p), scale(&s0, i, p), scale(&t0, i, p))
        }
    }
}

pub fn pow(a: &[u64], mut e: u64, p: u64) -> Upoly {
    let mut base = a.to_vec();
    let mut acc = vec![1 % p];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base, p);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base, p);
        }
    }
    trim(acc)
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc: u128 = 0;
    for &c in a.iter().rev() {
        acc = (acc * x as u128 + c as u128) % p as u128;
    }
    acc as u64
}

/// True when the monic polynomial `m` of degree ≥ 1 is irreducible over 𝔽p (trial division by
/// all monic polynomials of degree at most deg(m)/2).
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = match deg(m) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    for k in 1..=d / 2 {
        let count = (p as u128).pow(k as u32);
        for idx in 0..count {
            let mut cand = vec![0u64; k + 1];
            let mut x = idx;
            for c in cand.iter_mut().take(k) {
                *c = (x % p as u128) as u64;
                x /= p as u128;
            }
            cand[k] = 1;
            let (_, r) = divrem(m, &cand, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Render as a polynomial in `name`, highest degree first.
pub fn render(a: &[u64], name: &str) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{}^{}", name, i),
        };
        parts.push(if mono.is_empty() {
            c.to_string()
        } else if c == 1 {
            mono
        } else {
            format!("{}*{}", c, mono)
        });
    }
    parts.join(" + ")
}

pub fn term_count(a: &[u64]) -> usize {
    a.iter().filter(|&&c| c != 0).count()
}
