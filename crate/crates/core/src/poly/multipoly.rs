use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::fmt_rational;
use super::univariate::UniPoly;
use super::PolyError;

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial with arbitrary-precision rational
/// coefficients.
///
/// Zero coefficients are never stored, so two equal polynomials always have
/// identical term maps and `==` is structural.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    /// The coordinate function `x_var`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        assert!(var < num_vars, "variable index out of range");
        let mut e = vec![0; num_vars];
        e[var] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Exponents, c: BigRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(PolyError::VarCountMismatch {
                    expected: num_vars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_int_terms(num_vars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            num_vars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigRational::from_integer(BigInt::from(*c)))),
        )
        .expect("exponent vectors match num_vars")
    }

    fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.num_vars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Largest power of `x_var` dividing every term.
    pub fn order_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Lowest-degree homogeneous part.
    pub fn initial_form(&self) -> MultiPoly {
        let Some(d) = self.min_degree() else {
            return self.clone();
        };
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> MultiPoly {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.num_vars);
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            sum += t;
        }
        sum
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Applies a map on exponent vectors term by term. The map must be
    /// injective on the support for the result to be meaningful; it is used
    /// for monomial substitutions such as `x -> a, y -> a*s`.
    pub fn map_exponents<F>(&self, num_vars: usize, f: F) -> MultiPoly
    where
        F: Fn(&[u32]) -> Exponents,
    {
        let mut out = Self::zero(num_vars);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// Divides by `x_var^k`; panics unless every term is divisible.
    pub fn div_var_power(&self, var: usize, k: u32) -> MultiPoly {
        self.map_exponents(self.num_vars, |e| {
            assert!(e[var] >= k, "not divisible by x_{var}^{k}");
            let mut e2 = e.to_vec();
            e2[var] -= k;
            e2
        })
    }

    /// Substitutes `x_i -> x_i + p_i`.
    pub fn translate(&self, point: &[BigRational]) -> MultiPoly {
        assert_eq!(point.len(), self.num_vars);
        if point.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let shifted: Vec<MultiPoly> = (0..self.num_vars)
            .map(|i| &Self::var(self.num_vars, i) + &Self::constant(self.num_vars, point[i].clone()))
            .collect();
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.num_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &shifted[i].pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Multiplicity at a rational point: the lowest total degree after
    /// translating the point to the origin. `None` encodes "infinite", which
    /// only happens for the zero polynomial.
    pub fn mult_at_point(&self, point: &[BigRational]) -> Option<u32> {
        self.translate(point).min_degree()
    }

    pub fn mult_at_origin(&self) -> Option<u32> {
        self.min_degree()
    }

    /// Restriction to the line where every variable except `keep` is zero,
    /// as a univariate polynomial in `x_keep`.
    pub fn restrict_to_axis(&self, keep: usize) -> UniPoly {
        let mut coeffs: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().all(|(i, &k)| i == keep || k == 0) {
                *coeffs.entry(e[keep]).or_insert_with(BigRational::zero) += c;
            }
        }
        let deg = coeffs.keys().next_back().copied().unwrap_or(0) as usize;
        let mut v = vec![BigRational::zero(); deg + 1];
        for (k, c) in coeffs {
            v[k as usize] = c;
        }
        UniPoly::new(v)
    }

    /// Embeds a univariate polynomial as a polynomial in `x_var`.
    pub fn from_univariate(num_vars: usize, var: usize, p: &UniPoly) -> MultiPoly {
        let mut out = Self::zero(num_vars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; num_vars];
            e[var] = k as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Canonical term order for printing: descending total degree, then
    /// descending lexicographic exponents.
    fn sorted_terms(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Renders with the given variable names, using `^` and explicit `*`.
    pub fn to_string_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.num_vars, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !abs.is_one() || is_const {
                factors.push(fmt_rational(&abs));
            }
            for (name, &k) in names.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Default variable names: `x, y, z` for up to three variables, else
/// `x1, x2, ...`.
pub fn default_var_names(num_vars: usize) -> Vec<String> {
    if num_vars <= 3 {
        ["x", "y", "z"][..num_vars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=num_vars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.num_vars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&refs))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn multiplicity_examples() {
        let cusp = MultiPoly::from_int_terms(2, &[(&[2, 0], 1), (&[0, 3], 1)]);
        assert_eq!(cusp.mult_at_point(&[q(0), q(0)]), Some(2));
        assert_eq!(cusp.mult_at_point(&[q(1), q(0)]), Some(0));
        let xy = MultiPoly::from_int_terms(2, &[(&[1, 1], 1)]);
        assert_eq!(xy.mult_at_point(&[q(0), q(0)]), Some(2));
        assert_eq!(MultiPoly::zero(2).mult_at_point(&[q(0), q(0)]), None);
        // y - x^2 is smooth at (1, 1)
        let par = MultiPoly::from_int_terms(2, &[(&[0, 1], 1), (&[2, 0], -1)]);
        assert_eq!(par.mult_at_point(&[q(1), q(1)]), Some(1));
    }

    #[test]
    fn printing_is_canonical() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 3], 1), (&[2, 0], 1), (&[0, 0], -5)]);
        assert_eq!(p.to_string(), "y^3 + x^2 - 5");
        let p = MultiPoly::from_int_terms(2, &[(&[1, 1], -2)]);
        assert_eq!(p.to_string(), "-2*x*y");
        let half = MultiPoly::monomial(vec![1], BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "1/2*x");
        assert_eq!(MultiPoly::zero(1).to_string(), "0");
    }

    #[test]
    fn arithmetic_cancels_to_canonical_zero() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let s = &(&x + &y) * &(&x - &y);
        let d = &(&x.pow(2) - &y.pow(2)) - &s;
        assert!(d.is_zero());
        assert_eq!(d, MultiPoly::zero(2));
    }

    #[test]
    fn translate_roundtrip() {
        let p = MultiPoly::from_int_terms(2, &[(&[2, 1], 3), (&[0, 3], -1), (&[1, 0], 2)]);
        let pt = [q(2), q(-1)];
        let back = p.translate(&pt).translate(&[q(-2), q(1)]);
        assert_eq!(back, p);
        assert_eq!(p.translate(&pt).constant_term(), p.eval(&pt));
    }
}
