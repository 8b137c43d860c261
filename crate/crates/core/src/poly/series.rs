use std::collections::BTreeMap;

use super::multipoly::MultiPoly;
use super::ring::Ring;
use super::PolyError;

/// Power series truncated modulo `t^(order+1)`; index `j` holds the
/// coefficient of `t^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> TruncSeries<E> {
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        TruncSeries { coeffs }
    }

    pub fn zero<R: Ring<Elem = E>>(ring: &R, order: usize) -> Self {
        TruncSeries {
            coeffs: vec![ring.zero(); order + 1],
        }
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, order: usize, c: E) -> Self {
        let mut s = Self::zero(ring, order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &E {
        &self.coeffs[j]
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation<R: Ring<Elem = E>>(&self, ring: &R) -> Option<usize> {
        self.coeffs.iter().position(|c| !ring.is_zero(c))
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    /// Truncated product; coefficient `j` only reads coefficients `<= j` of
    /// both factors.
    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let n = self.order();
        let mut out = vec![ring.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        TruncSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }
}

/// A point of the jet space: one truncated series per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<E> {
    order: usize,
    coeffs: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> Jet<E> {
    pub fn new(coeffs: Vec<Vec<E>>) -> Result<Self, PolyError> {
        let order = coeffs
            .first()
            .map(|c| c.len())
            .filter(|&l| l > 0)
            .ok_or(PolyError::EmptyJet)?
            - 1;
        if coeffs.iter().any(|c| c.len() != order + 1) {
            return Err(PolyError::RaggedJet);
        }
        Ok(Jet { order, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn component(&self, var: usize) -> TruncSeries<E> {
        TruncSeries::new(self.coeffs[var].clone())
    }

    pub fn coeffs(&self) -> &[Vec<E>] {
        &self.coeffs
    }

    /// True when every constant term is zero (the jet is based at the
    /// origin).
    pub fn is_based<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(&c[0]))
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet {
            order,
            coeffs: self.coeffs.iter().map(|c| c[..=order].to_vec()).collect(),
        }
    }
}

/// Computes `f(phi)` modulo `t^(order+1)` by nested Horner evaluation in the
/// truncated series ring, one variable at a time.
pub fn jet_compose<R: Ring>(ring: &R, f: &MultiPoly, jet: &Jet<R::Elem>) -> Result<TruncSeries<R::Elem>, PolyError> {
    if f.num_vars() != jet.num_vars() {
        return Err(PolyError::VarCountMismatch {
            expected: f.num_vars(),
            found: jet.num_vars(),
        });
    }
    let terms = f
        .terms()
        .map(|(e, c)| {
            ring.from_rational(c)
                .map(|v| (e.as_slice(), v))
                .ok_or_else(|| PolyError::NonReducible(crate::poly::ring::fmt_rational(c)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let comps: Vec<TruncSeries<R::Elem>> = (0..jet.num_vars()).map(|i| jet.component(i)).collect();
    Ok(horner(ring, &terms, 0, &comps, jet.order()))
}

fn horner<R: Ring>(
    ring: &R,
    terms: &[(&[u32], R::Elem)],
    var: usize,
    comps: &[TruncSeries<R::Elem>],
    order: usize,
) -> TruncSeries<R::Elem> {
    if var == comps.len() {
        let c = terms.iter().fold(ring.zero(), |acc, (_, c)| ring.add(&acc, c));
        return TruncSeries::constant(ring, order, c);
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], R::Elem)>> = BTreeMap::new();
    for (e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c.clone()));
    }
    let x = &comps[var];
    let mut acc: Option<TruncSeries<R::Elem>> = None;
    let mut prev = 0u32;
    for (&k, group) in groups.iter().rev() {
        let inner = horner(ring, group, var + 1, comps, order);
        acc = Some(match acc {
            None => inner,
            Some(a) => {
                let mut a = a;
                for _ in k..prev {
                    a = a.mul(ring, x);
                }
                a.add(ring, &inner)
            }
        });
        prev = k;
    }
    let mut acc = acc.unwrap_or_else(|| TruncSeries::zero(ring, order));
    for _ in 0..prev {
        acc = acc.mul(ring, x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring::{PrimeField, Rationals};
    use crate::poly::parse_poly;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn cusp_along_x_axis() {
        let f = parse_poly("x^2+y^3", &["x", "y"]).unwrap();
        let jet = Jet::new(vec![qs(&[0, 1, 0, 0]), qs(&[0, 0, 0, 0])]).unwrap();
        let s = jet_compose(&Rationals, &f, &jet).unwrap();
        assert_eq!(s.coeffs(), qs(&[0, 0, 1, 0]).as_slice());
    }

    #[test]
    fn identity_and_product() {
        let x = parse_poly("x", &["x", "y"]).unwrap();
        let jet = Jet::new(vec![qs(&[3, 1, 4, 1]), qs(&[5, 9, 2, 6])]).unwrap();
        assert_eq!(jet_compose(&Rationals, &x, &jet).unwrap().coeffs(), qs(&[3, 1, 4, 1]).as_slice());
        let xy = parse_poly("x*y", &["x", "y"]).unwrap();
        let jet = Jet::new(vec![qs(&[1, 1, 0]), qs(&[1, -1, 0])]).unwrap();
        assert_eq!(jet_compose(&Rationals, &xy, &jet).unwrap().coeffs(), qs(&[1, 0, -1]).as_slice());
    }

    #[test]
    fn mismatch_and_bad_reduction() {
        let f = parse_poly("x*y", &["x", "y"]).unwrap();
        let jet = Jet::new(vec![qs(&[0, 1])]).unwrap();
        assert!(matches!(
            jet_compose(&Rationals, &f, &jet),
            Err(PolyError::VarCountMismatch { expected: 2, found: 1 })
        ));
        let g = parse_poly("x/3", &["x"]).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        let jet = Jet::new(vec![vec![0u64, 1]]).unwrap();
        assert!(matches!(jet_compose(&f3, &g, &jet), Err(PolyError::NonReducible(_))));
    }

    #[test]
    fn sparse_high_powers() {
        let f = parse_poly("x^5*y + 2*y^4 + x", &["x", "y"]).unwrap();
        let jet = Jet::new(vec![qs(&[1, 2, 0, 1, 0, 0]), qs(&[2, 0, 1, 0, 0, 0])]).unwrap();
        let direct = jet_compose(&Rationals, &f, &jet).unwrap();
        // compare against evaluating the univariate product by plain series arithmetic
        let x = jet.component(0);
        let y = jet.component(1);
        let mut x5 = TruncSeries::constant(&Rationals, 5, q(1));
        for _ in 0..5 {
            x5 = x5.mul(&Rationals, &x);
        }
        let mut y4 = TruncSeries::constant(&Rationals, 5, q(2));
        for _ in 0..4 {
            y4 = y4.mul(&Rationals, &y);
        }
        let expect = x5.mul(&Rationals, &y).add(&Rationals, &y4).add(&Rationals, &x);
        assert_eq!(direct, expect);
    }
}
