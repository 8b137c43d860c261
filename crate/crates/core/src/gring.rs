//! Laurent polynomials in the class `L` of the affine line, rational series
//! in an auxiliary variable `T`, and cyclotomic-product zeta functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GringError {
    #[error("cannot evaluate a negative power of L at q = 0")]
    EvalAtZero,
    #[error("cannot parse '{0}' as a Laurent polynomial in L")]
    Parse(String),
    #[error("factor L^-{a} T^{b} is not admissible (need a >= 1, b >= 1)")]
    Inadmissible { a: u64, b: u64 },
}

/// Integer Laurent polynomial in `L`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentL {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentL {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(0, c)
    }

    /// `c * L^exp`
    pub fn monomial<C: Into<BigInt>>(exp: i64, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, c.into());
        out
    }

    /// `L^exp`
    pub fn l_pow(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    /// `(L - 1)^k`
    pub fn l_minus_one_pow(k: u32) -> Self {
        let base = &Self::l_pow(1) - &Self::one();
        base.pow(k)
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn scale<C: Into<BigInt>>(&self, c: C) -> Self {
        let c = c.into();
        let mut out = Self::zero();
        for (e, v) in &self.coeffs {
            out.add_term(*e, v * &c);
        }
        out
    }

    /// Multiplies by `L^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentL {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Euler-characteristic specialization `L -> 1`.
    pub fn euler_specialize(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Point-counting specialization `L -> q`, exact.
    pub fn eval_at_q(&self, q: &BigRational) -> Result<BigRational, GringError> {
        if q.is_zero() {
            if self.low_degree().is_some_and(|d| d < 0) {
                return Err(GringError::EvalAtZero);
            }
            return Ok(BigRational::from_integer(self.coeff(0)));
        }
        let mut sum = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = if *e >= 0 {
                num_traits::pow(q.clone(), *e as usize)
            } else {
                num_traits::pow(q.recip(), e.unsigned_abs() as usize)
            };
            sum += p * BigRational::from_integer(c.clone());
        }
        Ok(sum)
    }
}

impl fmt::Display for LaurentL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let power = match *e {
                0 => String::new(),
                1 => "L".to_string(),
                e => format!("L^{e}"),
            };
            if *e == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{abs}*{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentL({self})")
    }
}

impl FromStr for LaurentL {
    type Err = GringError;

    /// Accepts the canonical rendering, e.g. `2*L^3 - L^-1 + 5`, and also
    /// tolerates missing spaces and terms in any order.
    fn from_str(s: &str) -> Result<Self, GringError> {
        let err = || GringError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // split into signed terms; a '-' directly after '^' belongs to the exponent
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(err());
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((neg, cur));
        let mut out = LaurentL::zero();
        for (neg, t) in terms {
            let (coef, power) = match t.split_once('L') {
                None => (t.as_str(), None),
                Some((c, p)) => (c.strip_suffix('*').unwrap_or(c), Some(p)),
            };
            let mut c: BigInt = if coef.is_empty() {
                BigInt::one()
            } else {
                coef.parse().map_err(|_| err())?
            };
            let exp: i64 = match power {
                None => 0,
                Some("") => 1,
                Some(p) => p.strip_prefix('^').ok_or_else(err)?.parse().map_err(|_| err())?,
            };
            if neg {
                c = -c;
            }
            out.add_term(exp, c);
        }
        Ok(out)
    }
}

impl<'a> Add<&'a LaurentL> for &'a LaurentL {
    type Output = LaurentL;
    fn add(self, rhs: &LaurentL) -> LaurentL {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentL> for &'a LaurentL {
    type Output = LaurentL;
    fn sub(self, rhs: &LaurentL) -> LaurentL {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentL> for &'a LaurentL {
    type Output = LaurentL;
    fn mul(self, rhs: &LaurentL) -> LaurentL {
        let mut out = LaurentL::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentL {
    type Output = LaurentL;
    fn neg(self) -> LaurentL {
        self.scale(-1)
    }
}

/// The factor `L^-a T^b / (1 - L^-a T^b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeomFactor {
    a: u64,
    b: u64,
}

impl GeomFactor {
    pub fn new(a: u64, b: u64) -> Result<Self, GringError> {
        if a == 0 || b == 0 {
            return Err(GringError::Inadmissible { a, b });
        }
        Ok(GeomFactor { a, b })
    }

    pub fn l_exp(&self) -> u64 {
        self.a
    }

    pub fn t_exp(&self) -> u64 {
        self.b
    }
}

/// One summand `coeff * prod factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomTerm {
    pub coeff: LaurentL,
    pub factors: Vec<GeomFactor>,
}

/// A rational function of `T` over `LaurentL`, kept as a linear combination
/// of products of geometric factors `L^-a T^b / (1 - L^-a T^b)`. The
/// denominator is therefore always available in factored form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalT {
    terms: Vec<GeomTerm>,
}

/// Polynomial in `T` with `LaurentL` coefficients, keyed by `T`-degree.
pub type TPoly = BTreeMap<u64, LaurentL>;

impl RationalT {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn push_term(&mut self, coeff: LaurentL, mut factors: Vec<GeomFactor>) {
        if coeff.is_zero() {
            return;
        }
        factors.sort();
        self.terms.push(GeomTerm { coeff, factors });
    }

    pub fn terms(&self) -> &[GeomTerm] {
        &self.terms
    }

    pub fn add(&self, other: &RationalT) -> RationalT {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: &LaurentL) -> RationalT {
        let mut out = RationalT::zero();
        for t in &self.terms {
            out.push_term(&t.coeff * c, t.factors.clone());
        }
        out
    }

    /// Coefficient of `T^n` of the power-series expansion, summing over
    /// tuples `k_i >= 1` with `sum k_i b_i = n` for every term.
    pub fn coefficient(&self, n: u64) -> LaurentL {
        let mut out = LaurentL::zero();
        for t in &self.terms {
            let mut acc = LaurentL::zero();
            for_each_composition(&t.factors, n, &mut |ks| {
                let e: u64 = ks.iter().zip(&t.factors).map(|(k, f)| k * f.a).sum();
                acc = &acc + &LaurentL::l_pow(-(e as i64));
            });
            out = &out + &(&acc * &t.coeff);
        }
        out
    }

    /// Value of the "limit as `T -> infinity`": every factor tends to `-1`.
    pub fn limit_t_to_infinity(&self) -> LaurentL {
        let mut out = LaurentL::zero();
        for t in &self.terms {
            let c = if t.factors.len() % 2 == 0 { t.coeff.clone() } else { -&t.coeff };
            out = &out + &c;
        }
        out
    }

    /// Common-denominator form: returns the numerator polynomial and the
    /// denominator as factors `(1 - L^-a T^b)` with multiplicities.
    pub fn to_fraction(&self) -> (TPoly, BTreeMap<GeomFactor, u32>) {
        let mut den: BTreeMap<GeomFactor, u32> = BTreeMap::new();
        for t in &self.terms {
            let mut local: BTreeMap<GeomFactor, u32> = BTreeMap::new();
            for f in &t.factors {
                *local.entry(*f).or_default() += 1;
            }
            for (f, m) in local {
                let e = den.entry(f).or_default();
                *e = (*e).max(m);
            }
        }
        let mut num = TPoly::new();
        for t in &self.terms {
            let mut poly = TPoly::from([(0u64, t.coeff.clone())]);
            let mut remaining = den.clone();
            for f in &t.factors {
                poly = tpoly_mul(&poly, &TPoly::from([(f.b, LaurentL::l_pow(-(f.a as i64)))]));
                *remaining.get_mut(f).unwrap() -= 1;
            }
            for (f, m) in remaining {
                let one_minus = TPoly::from([(0u64, LaurentL::one()), (f.b, -&LaurentL::l_pow(-(f.a as i64)))]);
                for _ in 0..m {
                    poly = tpoly_mul(&poly, &one_minus);
                }
            }
            num = tpoly_add(&num, &poly);
        }
        (num, den)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let fs: Vec<String> = t
                    .factors
                    .iter()
                    .map(|f| format!("[L^-{} T^{} / (1 - L^-{} T^{})]", f.a, f.b, f.a, f.b))
                    .collect();
                if fs.is_empty() {
                    format!("({})", t.coeff)
                } else {
                    format!("({})*{}", t.coeff, fs.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for RationalT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = TPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = out.entry(ea + eb).or_default();
            *e = &*e + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn tpoly_add(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.entry(*e).or_default();
        *v = &*v + c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Visits every tuple `(k_i)` with `k_i >= 1` and `sum k_i * b_i = n`.
fn for_each_composition<F: FnMut(&[u64])>(factors: &[GeomFactor], n: u64, f: &mut F) {
    fn rec<F: FnMut(&[u64])>(factors: &[GeomFactor], rest: u64, ks: &mut Vec<u64>, f: &mut F) {
        match factors.split_first() {
            None => {
                if rest == 0 {
                    f(ks)
                }
            }
            Some((head, tail)) => {
                let tail_min: u64 = tail.iter().map(|g| g.b).sum();
                let mut k = 1;
                while k * head.b + tail_min <= rest {
                    ks.push(k);
                    rec(tail, rest - k * head.b, ks, f);
                    ks.pop();
                    k += 1;
                }
            }
        }
    }
    rec(factors, n, &mut Vec::new(), f);
}

/// `prod_i (1 - t^i)^{e_i}`, zero exponents never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZetaFactorization {
    exps: BTreeMap<u64, i64>,
}

impl ZetaFactorization {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn factor(i: u64, e: i64) -> Self {
        let mut z = Self::one();
        z.add_exponent(i, e);
        z
    }

    pub fn add_exponent(&mut self, i: u64, e: i64) {
        assert!(i >= 1, "cyclotomic index must be positive");
        let v = self.exps.entry(i).or_insert(0);
        *v += e;
        if *v == 0 {
            self.exps.remove(&i);
        }
    }

    pub fn multiply(&self, other: &ZetaFactorization) -> ZetaFactorization {
        let mut out = self.clone();
        for (i, e) in &other.exps {
            out.add_exponent(*i, *e);
        }
        out
    }

    /// `(i, e_i)` in ascending `i`.
    pub fn exponents(&self) -> Vec<(u64, i64)> {
        self.exps.iter().map(|(i, e)| (*i, *e)).collect()
    }

    pub fn exponent(&self, i: u64) -> i64 {
        self.exps.get(&i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Lefschetz number of the `n`-th iterate read off the factorization:
    /// `sum_{i | n} i * e_i`.
    pub fn lefschetz(&self, n: u64) -> i64 {
        self.exps
            .iter()
            .filter(|(i, _)| n % **i == 0)
            .map(|(i, e)| *i as i64 * e)
            .sum()
    }
}

impl fmt::Display for ZetaFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (i, e) in &self.exps {
            if *i == 1 {
                f.write_str("(1-t)")?;
            } else {
                write!(f, "(1-t^{i})")?;
            }
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
