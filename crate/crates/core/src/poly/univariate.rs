use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multipoly::MultiPoly;
use super::ring::PrimeField;

/// Dense univariate polynomial over the rationals, coefficients stored from
/// the constant term up. Trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `s - r`
    pub fn linear_root(r: &BigRational) -> Self {
        Self::new(vec![-r, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lc_inv = divisor.lc().recip();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() * &lc_inv;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quo[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quo), UniPoly::new(rem))
    }

    /// Quotient of an exact division; panics on a nonzero remainder.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's squarefree decomposition: returns `(P_k, k)` with the `P_k`
    /// monic, squarefree, pairwise coprime and of positive degree, such that
    /// `self = lc * prod P_k^k`.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.exact_div(&a);
        let mut d = fp.exact_div(&a).sub(&b.derivative());
        let mut k = 1;
        loop {
            let p = b.gcd(&d);
            if p.degree().unwrap_or(0) > 0 {
                out.push((p.clone(), k));
            }
            b = b.exact_div(&p);
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let c = d.exact_div(&p);
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// Squarefree part, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(UniPoly::constant(BigRational::one()), |acc, (p, _)| acc.mul(&p))
    }

    /// Distinct rational roots, ascending. Candidates come from the
    /// rational root test on the integer-normalized polynomial, so this is
    /// meant for modest coefficient sizes.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let ints = self.integer_coeffs();
        let lead_zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(BigRational::zero());
        }
        let ints = &ints[lead_zeros..];
        if ints.len() >= 2 {
            let a0 = ints[0].abs();
            let an = ints[ints.len() - 1].abs();
            let reduced = UniPoly::new(ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
            for p in divisors(&a0) {
                for qd in divisors(&an) {
                    for sign in [1i32, -1] {
                        let r = BigRational::new(BigInt::from(sign) * &p, qd.clone());
                        if reduced.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &BigRational) -> usize {
        let lin = UniPoly::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    /// Primitive integer coefficient vector proportional to `self`.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            ints
        } else {
            ints.into_iter().map(|c| c / &g).collect()
        }
    }

    /// Reduction modulo a prime, or `None` if a denominator vanishes mod p.
    pub fn reduce_mod(&self, field: &PrimeField) -> Option<ModPoly> {
        use super::ring::Ring;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| field.from_rational(c))
            .collect::<Option<Vec<u64>>>()?;
        Some(ModPoly::new(*field, coeffs))
    }

    pub fn to_multi(&self) -> MultiPoly {
        MultiPoly::from_univariate(1, 0, self)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        self.to_multi().to_string_with(&[var])
    }
}

impl std::str::FromStr for UniPoly {
    type Err = super::PolyError;

    /// Parses a polynomial in the variable `s`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Ok(super::parse_poly(text, &["s"])?.restrict_to_axis(0))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("s"))
    }
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    if let Some(small) = n.to_u64() {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d.saturating_mul(d) <= small {
            if small % d == 0 {
                out.push(BigInt::from(d));
                if d != small / d {
                    out.push(BigInt::from(small / d));
                }
            }
            d += 1;
        }
        return out;
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let o = &n / &d;
            if o != d {
                out.push(o);
            }
        }
        d += 1;
    }
    out
}

/// Dense polynomial over a prime field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        let p = field.modulus();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { field, coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.field.modulus();
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.field.modulus();
        ModPoly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * (i as u64 % p) % p)
                .collect(),
        )
    }

    fn rem(&self, d: &ModPoly) -> ModPoly {
        let p = self.field.modulus();
        let dd = d.degree().expect("nonzero divisor");
        let inv = self.field.inv(*d.coeffs.last().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() * inv % p;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * dc % p) % p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly::new(self.field, r)
    }

    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// True when the polynomial has no repeated root over the algebraic
    /// closure of F_p.
    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Roots in F_p by exhaustive evaluation.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.field.modulus()).filter(|&x| self.eval(x) == 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn squarefree_decomposition_of_mixed_powers() {
        // (s-1)^3 (s+2) (s^2+1)^2
        let a = UniPoly::from_ints(&[-1, 1]).pow(3);
        let b = UniPoly::from_ints(&[2, 1]);
        let c = UniPoly::from_ints(&[1, 0, 1]).pow(2);
        let f = a.mul(&b).mul(&c).scale(&q(5));
        let dec = f.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![
                (UniPoly::from_ints(&[2, 1]), 1),
                (UniPoly::from_ints(&[1, 0, 1]), 2),
                (UniPoly::from_ints(&[-1, 1]), 3)
            ]
        );
    }

    #[test]
    fn rational_roots_found() {
        // (2s - 1)(s + 3) s (s^2 + 2)
        let f = UniPoly::from_ints(&[-1, 2])
            .mul(&UniPoly::from_ints(&[3, 1]))
            .mul(&UniPoly::from_ints(&[0, 1]))
            .mul(&UniPoly::from_ints(&[2, 0, 1]));
        assert_eq!(f.rational_roots(), vec![q(-3), q(0), BigRational::new(1.into(), 2.into())]);
        assert!(UniPoly::from_ints(&[1, 0, 1]).rational_roots().is_empty());
        assert_eq!(UniPoly::from_ints(&[0, 0, 1]).root_multiplicity(&q(0)), 2);
    }

    #[test]
    fn gcd_and_division() {
        let f = UniPoly::from_ints(&[-1, 0, 1]);
        let g = UniPoly::from_ints(&[1, 2, 1]);
        assert_eq!(f.gcd(&g), UniPoly::from_ints(&[1, 1]));
        let (quo, rem) = f.div_rem(&UniPoly::from_ints(&[1, 1]));
        assert_eq!(quo, UniPoly::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn mod_p_squarefree() {
        let f7 = PrimeField::new(7).unwrap();
        // s^3 + 1 = (s+1)(s^2-s+1) mod 3 is (s+1)^3
        let f = UniPoly::from_ints(&[1, 0, 0, 1]);
        assert!(f.reduce_mod(&f7).unwrap().is_squarefree());
        let f3 = PrimeField::new(3).unwrap();
        assert!(!f.reduce_mod(&f3).unwrap().is_squarefree());
        assert_eq!(f.reduce_mod(&f7).unwrap().roots(), vec![3, 5, 6]);
    }
}
