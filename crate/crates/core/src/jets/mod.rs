//! Point counts of jet spaces over finite fields and exact interpolation of
//! Euler characteristics.

mod search;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::formulas::{count_xn1_formula, for_each_weight, formula_strata, FormulaStratum};
use crate::poly::ring::{is_prime, primes_up_to};
use crate::poly::{MultiPoly, PolyError};
use crate::resolve::ResolutionData;

/// Default cap on visited search nodes.
pub const DEFAULT_WORK_BOUND: u64 = 4_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("search aborted after {0} nodes (work bound)")]
    WorkBoundExceeded(u64),
    #[error("the polynomial does not vanish at the origin")]
    NotVanishingAtOrigin,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{q} is not admissible here: {reason}")]
    NotAdmissible { q: u64, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("count does not fit in 128 bits")]
    Overflow,
    #[error("interpolation failed: {0}")]
    Interpolation(String),
}

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub work_bound: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            work_bound: DEFAULT_WORK_BOUND,
        }
    }
}

fn check_n(n: u64) -> Result<usize, JetError> {
    if n == 0 {
        return Err(JetError::InvalidArgument("n must be at least 1".into()));
    }
    Ok(n as usize)
}

/// `#{phi in X_{n,1}(F_q)}`: arcs mod `t^(n+1)` based at the origin with
/// `f(phi) = t^n + ...`.
pub fn count_points_xn1(f: &MultiPoly, n: u64, q: u64, opts: &CountOptions) -> Result<u128, JetError> {
    count_fiber(f, n, q, 1, opts)
}

/// Like [`count_points_xn1`], for the fiber over `target != 0` of the
/// `t^n` coefficient.
pub fn count_fiber(f: &MultiPoly, n: u64, q: u64, target: u64, opts: &CountOptions) -> Result<u128, JetError> {
    let n = check_n(n)?;
    if target % q == 0 {
        return Err(JetError::InvalidArgument("the target value must be nonzero".into()));
    }
    match search::Problem::new(f, n, q, 1, target)? {
        None => Ok(0),
        Some(p) => search::run(&p, opts.work_bound),
    }
}

/// Arcs of `X_{n,1}(F_q)` fixed by the `d`-th power of the monodromy
/// `phi(t) -> phi(zeta t)`: those supported in degrees divisible by
/// `n / gcd(n, d)`. Needs `q = 1 mod n` so that `zeta` exists in `F_q`.
pub fn count_fixed_locus(f: &MultiPoly, n: u64, d: u64, q: u64, opts: &CountOptions) -> Result<u128, JetError> {
    let nn = check_n(n)?;
    if d == 0 {
        return Err(JetError::InvalidArgument("d must be at least 1".into()));
    }
    if (q - 1) % n != 0 {
        return Err(JetError::NotAdmissible {
            q,
            reason: format!("need q = 1 mod {n}"),
        });
    }
    let step = (n / n.gcd(&d)) as usize;
    match search::Problem::new(f, nn, q, step, 1)? {
        None => Ok(0),
        Some(p) => search::run(&p, opts.work_bound),
    }
}

fn strata_with_crossings(res: &ResolutionData) -> Vec<FormulaStratum<'_>> {
    formula_strata(res, true).unwrap_or_else(|_| formula_strata(res, false).expect("no charts needed"))
}

/// Upper bound for the degree in `q` of `#X_{n,1}(F_q)`, read off the closed
/// formula: `nm + m - 1 - min sum k_i nu_i` over admissible `(I, k)`, or 0
/// when no `(I, k)` is admissible. Without chart data every strict-transform
/// branch is assumed reduced.
pub fn degree_bound(res: &ResolutionData, n: u64) -> u64 {
    let m = res.ambient_dim as u64;
    let mut data: Vec<Vec<(u64, u64)>> = strata_with_crossings(res).into_iter().map(|s| s.data).collect();
    if res.charts.is_none() {
        for d in res.divisors.iter().filter(|d| d.strict_contacts > 0) {
            data.push(vec![(d.n, d.nu), (1, 1)]);
        }
    }
    let mut best: Option<u64> = None;
    for dt in &data {
        for_each_weight(dt, n, &mut |w| best = Some(best.map_or(w, |b| b.min(w))));
    }
    match best {
        None => 0,
        Some(w) => (n * m + m - 1).saturating_sub(w),
    }
}

/// Primes `q <= bound` at which counts for `X_{n,1}` (or, with `fixed = Some(d)`,
/// for the fixed locus of the `d`-th monodromy power) follow one polynomial:
/// `q` divides no multiplicity of a contributing stratum and `q = 1 mod m_I`
/// for each of them, the chart data reduces well, and `q = 1 mod n` for fixed loci.
pub fn admissible_primes(res: &ResolutionData, n: u64, fixed: Option<u64>, bound: u64) -> Vec<u64> {
    let effective = fixed.map_or(n, |d| n.gcd(&d));
    let strata = strata_with_crossings(res);
    let mut moduli: Vec<u64> = Vec::new();
    let mut mults: Vec<u64> = Vec::new();
    for st in &strata {
        let mut contributes = false;
        for_each_weight(&st.data, effective, &mut |_| contributes = true);
        if contributes {
            mults.extend(st.data.iter().map(|(ni, _)| *ni));
            moduli.push(st.m);
        }
    }
    if fixed.is_some() {
        moduli.push(n);
    }
    primes_up_to(bound)
        .into_iter()
        .filter(|q| mults.iter().all(|ni| ni % q != 0))
        .filter(|q| moduli.iter().all(|mi| (q - 1) % mi == 0))
        .filter(|q| res.charts.is_none() || count_xn1_formula(res, effective, *q).is_ok())
        .collect()
}

/// What a [`CountTable`] counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountProblem {
    pub germ: String,
    pub n: u64,
    /// Power of the monodromy whose fixed locus is counted.
    pub d: Option<u64>,
}

/// Point counts at several primes, to be interpolated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub problem: CountProblem,
    pub samples: Vec<(u64, u128)>,
    pub degree_bound: u64,
}

impl CountTable {
    pub fn new(problem: CountProblem, degree_bound: u64) -> Self {
        CountTable {
            problem,
            samples: Vec::new(),
            degree_bound,
        }
    }

    pub fn push(&mut self, q: u64, count: u128) -> Result<(), JetError> {
        if !is_prime(q) {
            return Err(JetError::InvalidArgument(format!("{q} is not prime")));
        }
        if self.samples.iter().any(|(p, _)| *p == q) {
            return Err(JetError::InvalidArgument(format!("prime {q} sampled twice")));
        }
        if self.problem.d.is_some() && (q - 1) % self.problem.n != 0 {
            return Err(JetError::NotAdmissible {
                q,
                reason: format!("need q = 1 mod {}", self.problem.n),
            });
        }
        self.samples.push((q, count));
        Ok(())
    }

    /// Fills the table by counting at each prime.
    pub fn sample(
        f: &MultiPoly,
        problem: CountProblem,
        degree_bound: u64,
        primes: &[u64],
        opts: &CountOptions,
    ) -> Result<Self, JetError> {
        let mut table = CountTable::new(problem, degree_bound);
        for &q in primes {
            let c = match table.problem.d {
                None => count_points_xn1(f, table.problem.n, q, opts)?,
                Some(d) => count_fixed_locus(f, table.problem.n, d, q, opts)?,
            };
            table.push(q, c)?;
        }
        Ok(table)
    }
}

/// Result of [`interpolate_euler`]: integer coefficients (constant term
/// first) and the value at `q = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolation {
    pub coeffs: Vec<BigInt>,
    pub chi: BigInt,
}

impl Interpolation {
    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            let body = if k == 0 {
                c.magnitude().to_string()
            } else if c.magnitude().is_one() {
                mono
            } else {
                format!("{}*{mono}", c.magnitude())
            };
            let neg = c < &BigInt::zero();
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {body}", if neg { "-" } else { "+" }));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Fits a polynomial of degree `<= degree_bound` through the first
/// `degree_bound + 1` samples, checks the remaining samples against it,
/// requires integer coefficients and returns the value at `q = 1`.
pub fn interpolate_euler(table: &CountTable) -> Result<Interpolation, JetError> {
    let need = table.degree_bound as usize + 1;
    if table.samples.len() < need {
        return Err(JetError::Interpolation(format!(
            "{} samples for a degree bound of {} (need {need})",
            table.samples.len(),
            table.degree_bound
        )));
    }
    let pts: Vec<(BigRational, BigRational)> = table.samples[..need]
        .iter()
        .map(|(q, c)| (BigRational::from_integer((*q).into()), BigRational::from_integer((*c).into())))
        .collect();
    // Newton divided differences
    let mut dd: Vec<BigRational> = pts.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..need {
        for i in (j..need).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&pts[i].0 - &pts[i - j].0);
        }
    }
    // expand to the monomial basis
    let mut poly = vec![BigRational::zero(); need];
    for i in (0..need).rev() {
        // poly = poly * (x - x_i) + dd[i]
        let xi = &pts[i].0;
        let mut next = vec![BigRational::zero(); need];
        for k in 0..need {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < need {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * xi;
        }
        next[0] += &dd[i];
        poly = next;
    }
    if let Some(bad) = poly.iter().find(|c| !c.is_integer()) {
        return Err(JetError::Interpolation(format!(
            "non-integral coefficient {bad}: counts are not a polynomial in q on these primes"
        )));
    }
    let mut coeffs: Vec<BigInt> = poly.into_iter().map(|c| c.to_integer()).collect();
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    let fit = Interpolation {
        chi: coeffs.iter().sum(),
        coeffs,
    };
    for (q, c) in &table.samples[need..] {
        let v = fit.eval(&BigInt::from(*q));
        if v != BigInt::from(*c) {
            return Err(JetError::Interpolation(format!(
                "sample at q = {q} is {c} but the fit {} predicts {v}",
                fit.render()
            )));
        }
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn table(samples: &[(u64, u128)], bound: u64) -> CountTable {
        CountTable {
            problem: CountProblem {
                germ: "test".into(),
                n: 1,
                d: None,
            },
            samples: samples.to_vec(),
            degree_bound: bound,
        }
    }

    #[test]
    fn interpolation_examples() {
        let fit = interpolate_euler(&table(&[(3, 54), (5, 250), (7, 686), (11, 2662)], 3)).unwrap();
        assert_eq!(fit.render(), "2*q^3");
        assert_eq!(fit.chi, 2.into());
        let fit = interpolate_euler(&table(&[(3, 1), (5, 1)], 0)).unwrap();
        assert_eq!(fit.render(), "1");
        let fit = interpolate_euler(&table(&[(3, 18), (5, 100), (7, 294), (11, 1210)], 3)).unwrap();
        assert_eq!(fit.render(), "q^3 - q^2");
        assert_eq!(fit.chi, 0.into());
    }

    #[test]
    fn interpolation_rejects_bad_data() {
        assert!(interpolate_euler(&table(&[(3, 1)], 2)).is_err());
        // 1, 2, 4 at q = 3, 5, 7: the quadratic through them is not integral
        assert!(interpolate_euler(&table(&[(3, 1), (5, 2), (7, 4)], 2)).is_err());
        // a line through the first two that misses the third
        let err = interpolate_euler(&table(&[(3, 3), (5, 5), (7, 8)], 1)).unwrap_err();
        assert!(err.to_string().contains("q = 7"));
    }

    #[test]
    fn documented_counts() {
        let o = CountOptions::default();
        let x = parse_poly("x", &["x"]).unwrap();
        assert_eq!(count_points_xn1(&x, 4, 5, &o).unwrap(), 1);
        let cusp = parse_poly("x^2+y^3", &["x", "y"]).unwrap();
        assert_eq!(count_points_xn1(&cusp, 2, 7, &o).unwrap(), 686);
        let node = parse_poly("x*y", &["x", "y"]).unwrap();
        assert_eq!(count_points_xn1(&node, 1, 5, &o).unwrap(), 0);
        assert_eq!(count_points_xn1(&node, 2, 5, &o).unwrap(), 100);
        let x3 = parse_poly("x^3", &["x"]).unwrap();
        assert_eq!(count_points_xn1(&x3, 3, 7, &o).unwrap(), 147);
    }

    #[test]
    fn documented_fixed_loci() {
        let o = CountOptions::default();
        let cusp = parse_poly("x^2+y^3", &["x", "y"]).unwrap();
        assert_eq!(count_fixed_locus(&cusp, 2, 1, 7, &o).unwrap(), 0);
        assert_eq!(count_fixed_locus(&cusp, 6, 2, 7, &o).unwrap(), 686);
        assert!(matches!(count_fixed_locus(&cusp, 6, 2, 5, &o), Err(JetError::NotAdmissible { .. })));
    }

    #[test]
    fn work_bound_aborts() {
        let cusp = parse_poly("x^2+y^3", &["x", "y"]).unwrap();
        let tight = CountOptions { work_bound: 10 };
        assert_eq!(count_points_xn1(&cusp, 4, 7, &tight), Err(JetError::WorkBoundExceeded(10)));
    }

    #[test]
    fn rejects_units() {
        let f = parse_poly("x+1", &["x"]).unwrap();
        assert_eq!(count_points_xn1(&f, 2, 3, &CountOptions::default()), Err(JetError::NotVanishingAtOrigin));
    }
}
