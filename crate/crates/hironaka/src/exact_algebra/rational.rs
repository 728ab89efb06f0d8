//! ℚ as a [`Field`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{CoeffText, Field, FieldDescriptor, FieldKind};
use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Q = BigRational;

impl Field for BigRational {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}
    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }
    fn from_bigint(_: &(), n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn characteristic(_: &()) -> u64 {
        0
    }
    fn descriptor(_: &()) -> FieldDescriptor {
        FieldDescriptor {
            kind: FieldKind::Rationals,
            characteristic: 0,
            transcendental_name: None,
            extension_degree: None,
            modulus: None,
        }
    }
    fn pth_root(&self) -> Result<Option<Self>> {
        Err(Error::Unsupported("p-th roots do not exist in characteristic 0".into()))
    }
    fn frobenius_coords(&self, q: u64) -> Vec<Self> {
        assert_eq!(q, 1, "only q = 1 exists in characteristic 0");
        vec![self.clone()]
    }
    fn frobenius_basis(_: &(), _q: u64) -> Vec<Self> {
        vec![<BigRational as One>::one()]
    }
    /// Rational root test; `None` when the constant or leading coefficient is too large to
    /// enumerate its divisors.
    fn roots(_: &(), coeffs: &[Self]) -> Option<Vec<Self>> {
        let mut c: Vec<Self> = coeffs.to_vec();
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        let mut out = Vec::new();
        let lead_zeros = c.iter().take_while(|x| Zero::is_zero(*x)).count();
        if lead_zeros > 0 {
            out.push(<BigRational as Zero>::zero());
            c.drain(..lead_zeros);
        }
        if c.len() <= 1 {
            return Some(out);
        }
        let den = c.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        let a0 = divisors(&ints[0].abs())?;
        let an = divisors(&ints[ints.len() - 1].abs())?;
        let mut seen = std::collections::BTreeSet::new();
        for p in &a0 {
            for q in &an {
                for sign in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                    if seen.insert(r.clone()) && Zero::is_zero(&super::field::horner(&(), &c, &r)) {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }
    fn coeff_text(&self) -> CoeffText {
        CoeffText { negative: self.is_negative(), text: self.abs().to_string(), atomic: true }
    }
}

/// Positive divisors of a nonzero integer below 2^64 by trial division.
fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n: u64 = u64::try_from(n).ok()?;
    if n > 1 << 40 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::Fp;

    fn q(n: i64, d: i64) -> Q {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots() {
        // 6x^3 - 11x^2 + 6x - 1 = (x - 1)(2x - 1)(3x - 1)
        let c = vec![q(-1, 1), q(6, 1), q(-11, 1), q(6, 1)];
        assert_eq!(Q::roots(&(), &c).unwrap(), vec![q(1, 3), q(1, 2), q(1, 1)]);
        // x^2 (x^2 + 1) has only the root 0.
        let c = vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(1, 1)];
        assert_eq!(Q::roots(&(), &c).unwrap(), vec![q(0, 1)]);
        // (x + 1)^3 with rational coefficients scaled by 1/2.
        let c = vec![q(1, 2), q(3, 2), q(3, 2), q(1, 2)];
        assert_eq!(Q::roots(&(), &c).unwrap(), vec![q(-1, 1)]);
        assert_eq!(Q::roots(&(), &[q(5, 1)]).unwrap(), vec![]);
        let huge = BigRational::from_integer(BigInt::from(1u64 << 50) + 1);
        assert!(Q::roots(&(), &[huge, q(1, 1)]).is_none());
    }

    #[test]
    fn finite_field_roots() {
        let c: Vec<Fp> = [1, 1, 1].iter().map(|&v| Fp::new(2, v)).collect();
        assert!(Fp::roots(&2, &c).unwrap().is_empty());
        let c: Vec<Fp> = [2, 0, 1].iter().map(|&v| Fp::new(3, v)).collect();
        assert_eq!(Fp::roots(&3, &c).unwrap(), vec![Fp::new(3, 1), Fp::new(3, 2)]);
    }
}
