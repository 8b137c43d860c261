//! Closed formulas evaluated on resolution data: Lefschetz numbers of the
//! monodromy, zeta functions, the class of the jet space `X_{n,1}`, its
//! point count, the generating series `P(T)` and the volume `S`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gring::{GeomFactor, LaurentL, RationalT, ZetaFactorization};
use crate::poly::{ModPoly, PrimeField, Ring, UniPoly};
use crate::resolve::{Chart, ResolutionData, Stratum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("no cover class available for {0}")]
    MissingCoverClass(String),
    #[error("chart data is required to count cover points")]
    MissingCharts,
    #[error("{q} is a bad prime for this resolution: {reason}")]
    BadPrime { q: u64, reason: String },
    #[error("{d} does not divide {n}")]
    NotADivisor { d: u64, n: u64 },
    #[error("inconsistent Lefschetz table: {0}")]
    InconsistentTable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// How classes of the cyclic covers enter cover-dependent formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    /// Only Euler characteristics: `chi(cover) = m_I * chi(E_I°)`.
    Chi,
    /// Full classes in `Z[L, 1/L]`, computed over an algebraically closed
    /// field (every cover component and puncture treated as split).
    Split,
}

/// `n -> Lambda(M^n)`.
pub type LefschetzTable = BTreeMap<u64, i64>;

/// Lefschetz number of the `n`-th power of the monodromy: the sum of
/// `N_i * chi(E_i°)` over divisors with `N_i | n`.
pub fn lefschetz_acampo(res: &ResolutionData, n: u64) -> i64 {
    res.divisors
        .iter()
        .filter(|d| n % d.n == 0)
        .map(|d| d.n as i64 * d.chi_open)
        .sum()
}

pub fn lefschetz_table(res: &ResolutionData, max_n: u64) -> LefschetzTable {
    (1..=max_n).map(|n| (n, lefschetz_acampo(res, n))).collect()
}

pub fn zeta_monodromy(res: &ResolutionData) -> ZetaFactorization {
    res.divisors.iter().fold(ZetaFactorization::one(), |z, d| {
        z.multiply(&ZetaFactorization::factor(d.n, d.chi_open))
    })
}

/// Zeta function of the fibration given by the `t^n` coefficient: only
/// divisors with `N_i | n` contribute.
pub fn zeta_fibration(res: &ResolutionData, n: u64) -> ZetaFactorization {
    res.divisors
        .iter()
        .filter(|d| n % d.n == 0)
        .fold(ZetaFactorization::one(), |z, d| {
            z.multiply(&ZetaFactorization::factor(d.n, d.chi_open))
        })
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors_of(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n % d == 0)
}

/// Moebius inversion of `Lambda(M^n) = sum_{i | n} s_i`. Every `s_i` must be
/// divisible by `i`.
pub fn s_invariants(table: &LefschetzTable) -> Result<BTreeMap<u64, i64>, FormulaError> {
    let mut out = BTreeMap::new();
    for &n in table.keys() {
        let mut s = 0i64;
        for d in divisors_of(n) {
            let lambda = table
                .get(&d)
                .ok_or_else(|| FormulaError::InconsistentTable(format!("missing entry for n = {d}")))?;
            s += mobius(n / d) * lambda;
        }
        if s % n as i64 != 0 {
            return Err(FormulaError::InconsistentTable(format!("s_{n} = {s} is not divisible by {n}")));
        }
        out.insert(n, s);
    }
    Ok(out)
}

/// `Lambda(T_n^d) = Lambda(M^gcd(d, n))`, with `gcd(0, n) = n`.
pub fn lefschetz_tn(res: &ResolutionData, n: u64, d: u64) -> i64 {
    lefschetz_acampo(res, d.gcd(&n))
}

/// Euler characteristic of the part of `X_{n,1}` where `mu_n` acts through a
/// character of order `d`.
pub fn equivariant_chi_xn1(res: &ResolutionData, n: u64, d: u64) -> Result<i64, FormulaError> {
    if d == 0 || n % d != 0 {
        return Err(FormulaError::NotADivisor { d, n });
    }
    Ok(res
        .divisors
        .iter()
        .filter(|e| e.n % d == 0 && n % e.n == 0)
        .map(|e| e.chi_open)
        .sum())
}

/// Euler characteristic of the `alpha`-part of the volume `S`, for a
/// character `alpha` of order `d`.
pub fn s_alpha_chi(res: &ResolutionData, d: u64) -> i64 {
    res.divisors.iter().filter(|e| e.n % d == 0).map(|e| e.chi_open).sum()
}

/// One summand of the closed formula for `[X_{n,1}]`: a stratum of
/// exceptional divisors, or a divisor together with a strict-transform
/// branch crossing it.
#[derive(Clone, Debug)]
pub struct FormulaStratum<'a> {
    /// `(N_i, nu_i)` for every component through the stratum.
    pub data: Vec<(u64, u64)>,
    pub m: u64,
    pub source: Source<'a>,
}

#[derive(Clone, Debug)]
pub enum Source<'a> {
    Exceptional(&'a Stratum),
    Crossing {
        id: u32,
        branch_n: u64,
        roots: &'a UniPoly,
        unit: &'a UniPoly,
    },
}

impl FormulaStratum<'_> {
    pub fn describe(&self) -> String {
        match &self.source {
            Source::Exceptional(s) => format!("stratum {:?}", s.ids),
            Source::Crossing { id, roots, .. } => format!("crossing of E{id} with the strict transform at {roots} = 0"),
        }
    }
}

/// Strata entering the closed formula. Crossing strata only matter away
/// from the Euler-characteristic specialization, so they are included on
/// request.
pub fn formula_strata(res: &ResolutionData, crossings: bool) -> Result<Vec<FormulaStratum<'_>>, FormulaError> {
    let mut out: Vec<FormulaStratum> = res
        .strata
        .iter()
        .map(|s| FormulaStratum {
            data: res.numerical_data(s),
            m: s.m,
            source: Source::Exceptional(s),
        })
        .collect();
    if crossings && res.contact_points() > 0 {
        if res.charts.is_none() {
            return Err(FormulaError::MissingCharts);
        }
        for c in res.charts() {
            if let Chart::Contact {
                id,
                branch_n,
                roots,
                unit,
            } = c
            {
                let d = res.divisor(*id).expect("validated chart ids");
                out.push(FormulaStratum {
                    data: vec![(d.n, d.nu), (*branch_n, 1)],
                    m: d.n.gcd(branch_n),
                    source: Source::Crossing {
                        id: *id,
                        branch_n: *branch_n,
                        roots,
                        unit,
                    },
                });
            }
        }
    }
    Ok(out)
}

/// Visits every `k` with all `k_i >= 1` and `sum k_i N_i = n`, passing
/// `sum k_i nu_i`.
pub fn for_each_weight<F: FnMut(u64)>(data: &[(u64, u64)], n: u64, f: &mut F) {
    fn rec<F: FnMut(u64)>(data: &[(u64, u64)], rest: u64, acc: u64, f: &mut F) {
        match data.split_first() {
            None => {
                if rest == 0 {
                    f(acc)
                }
            }
            Some((&(ni, nui), tail)) => {
                let tail_min: u64 = tail.iter().map(|(nj, _)| nj).sum();
                let mut k = 1;
                while k * ni + tail_min <= rest {
                    rec(tail, rest - k * ni, acc + k * nui, f);
                    k += 1;
                }
            }
        }
    }
    rec(data, n, 0, f);
}

/// `sum_k L^{-sum k_i nu_i}` for one stratum.
fn weight_sum(data: &[(u64, u64)], n: u64) -> LaurentL {
    let mut out = LaurentL::zero();
    for_each_weight(data, n, &mut |w| out = &out + &LaurentL::l_pow(-(w as i64)));
    out
}

/// Class of the cyclic cover over a stratum, computed over an algebraically
/// closed field.
pub fn cover_class(res: &ResolutionData, st: &FormulaStratum) -> Result<LaurentL, FormulaError> {
    match &st.source {
        Source::Crossing { roots, .. } => {
            Ok(LaurentL::constant(roots.degree().unwrap_or(0) as u64 * st.m))
        }
        Source::Exceptional(s) => {
            if let Some(c) = &s.class {
                return Ok(c.clone());
            }
            if s.ids.len() == res.ambient_dim {
                // a point: the cover is m points
                return Ok(LaurentL::constant(s.m));
            }
            if res.ambient_dim == 2 {
                for c in res.charts() {
                    if let Chart::Line {
                        id,
                        unit,
                        punctures,
                        unit_at_infinity,
                    } = c
                    {
                        if *id == s.ids[0] {
                            return line_cover_class(s.m, unit, punctures, unit_at_infinity.is_some())
                                .ok_or_else(|| {
                                    FormulaError::MissingCoverClass(format!("stratum {:?} (cover of positive genus)", s.ids))
                                });
                        }
                    }
                }
            }
            Err(FormulaError::MissingCoverClass(format!("stratum {:?}", s.ids)))
        }
    }
}

/// Class of `z^N = 1/u(s)` over `P^1` minus the punctures, when every
/// component has genus zero: each of the `g` components is a copy of `P^1`
/// with its points over the punctures removed.
pub fn line_cover_class(n: u64, unit: &UniPoly, punctures: &UniPoly, infinity_kept: bool) -> Option<LaurentL> {
    // (number of punctures, order of u there)
    let mut orders: Vec<(u64, u64)> = Vec::new();
    let mut seen = 0usize;
    for (h, k) in unit.squarefree_decomposition() {
        let d = h.degree().unwrap_or(0);
        seen += d;
        orders.push((d as u64, k as u64));
    }
    let finite = punctures.degree().unwrap_or(0);
    if finite < seen {
        return None;
    }
    orders.push(((finite - seen) as u64, 0));
    if !infinity_kept {
        orders.push((1, unit.degree().unwrap_or(0) as u64));
    }
    orders.retain(|(c, _)| *c > 0);
    let g = orders.iter().fold(n, |g, (_, e)| g.gcd(e));
    let n1 = n / g;
    let punct: u64 = orders.iter().map(|(c, _)| c).sum();
    let above: u64 = orders.iter().map(|(c, e)| c * n1.gcd(&(e / g))).sum();
    let chi_closed = n1 as i64 * (2 - punct as i64) + above as i64;
    (chi_closed == 2).then(|| {
        let base = &(&LaurentL::l_pow(1) + &LaurentL::one()) - &LaurentL::constant(above);
        base.scale(g)
    })
}

/// Value of the class of `X_{n,1}` in a given mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassValue {
    Euler(BigInt),
    Class(LaurentL),
}

impl ClassValue {
    pub fn euler(&self) -> BigInt {
        match self {
            ClassValue::Euler(e) => e.clone(),
            ClassValue::Class(c) => c.euler_specialize(),
        }
    }
}

impl std::fmt::Display for ClassValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassValue::Euler(e) => write!(f, "{e}"),
            ClassValue::Class(c) => write!(f, "{c}"),
        }
    }
}

fn check_n(n: u64) -> Result<(), FormulaError> {
    if n == 0 {
        return Err(FormulaError::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// Euler characteristic of `X_{n,1}` from the closed formula: strata with two
/// or more components drop out at `L = 1`, and a cover over `E_i°` has Euler
/// characteristic `m_i * chi(E_i°)`.
pub fn chi_xn1(res: &ResolutionData, n: u64) -> i64 {
    formula_strata(res, false)
        .expect("no charts needed")
        .iter()
        .filter(|st| st.data.len() == 1)
        .map(|st| {
            let mut count = 0i64;
            for_each_weight(&st.data, n, &mut |_| count += 1);
            let Source::Exceptional(s) = st.source else { unreachable!() };
            count * st.m as i64 * s.chi_open
        })
        .sum()
}

/// Class of `X_{n,1}` in the requested mode.
pub fn class_xn1(res: &ResolutionData, n: u64, mode: CoverMode) -> Result<ClassValue, FormulaError> {
    check_n(n)?;
    match mode {
        CoverMode::Chi => Ok(ClassValue::Euler(chi_xn1(res, n).into())),
        CoverMode::Split => {
            let mut total = LaurentL::zero();
            for st in formula_strata(res, true)? {
                let w = weight_sum(&st.data, n);
                if w.is_zero() {
                    continue;
                }
                let c = cover_class(res, &st)?;
                let term = &(&LaurentL::l_minus_one_pow(st.data.len() as u32 - 1) * &c) * &w;
                total = &total + &term;
            }
            Ok(ClassValue::Class(total.shift((n * res.ambient_dim as u64) as i64)))
        }
    }
}

/// Number of `F_q`-points of the cyclic cover over a stratum.
pub fn cover_count(res: &ResolutionData, st: &FormulaStratum, field: &PrimeField) -> Result<u64, FormulaError> {
    let q = field.modulus();
    let bad = |reason: String| FormulaError::BadPrime { q, reason };
    let reduce = |r: &BigRational| field.from_rational(r).filter(|v| *v != 0);
    let reduce_poly = |p: &UniPoly, what: &str| -> Result<ModPoly, FormulaError> {
        let m = p
            .reduce_mod(field)
            .ok_or_else(|| bad(format!("{what} has a denominator divisible by {q}")))?;
        if m.degree() != p.degree() {
            return Err(bad(format!("{what} drops degree")));
        }
        Ok(m)
    };
    let roots_of = |m: u64, c: u64| field.count_roots_of(m, field.inv(c).expect("nonzero"));
    match &st.source {
        Source::Crossing { roots, unit, .. } => {
            let r = reduce_poly(roots, "crossing locus")?;
            if !r.is_squarefree() {
                return Err(bad("crossing points collide".into()));
            }
            let u = reduce_poly(unit, "crossing unit")?;
            let mut total = 0;
            for s in r.roots() {
                let v = u.eval(s);
                if v == 0 {
                    return Err(bad("crossing unit vanishes".into()));
                }
                total += roots_of(st.m, v);
            }
            Ok(total)
        }
        Source::Exceptional(s) => {
            if s.ids.len() == res.ambient_dim {
                for c in res.charts() {
                    if let Chart::Point { ids, unit } = c {
                        let mut a = ids.clone();
                        a.sort_unstable();
                        let mut b = s.ids.clone();
                        b.sort_unstable();
                        if a == b {
                            let u = reduce(unit).ok_or_else(|| bad(format!("unit at {:?} vanishes", s.ids)))?;
                            return Ok(roots_of(s.m, u));
                        }
                    }
                }
            } else if res.ambient_dim == 2 {
                for c in res.charts() {
                    if let Chart::Line {
                        id,
                        unit,
                        punctures,
                        unit_at_infinity,
                    } = c
                    {
                        if *id != s.ids[0] {
                            continue;
                        }
                        let u = reduce_poly(unit, "divisor unit")?;
                        let p = reduce_poly(punctures, "puncture locus")?;
                        if !p.is_squarefree() {
                            return Err(bad(format!("punctures of E{id} collide")));
                        }
                        let mut total = 0;
                        for x in 0..q {
                            if p.eval(x) == 0 {
                                continue;
                            }
                            let v = u.eval(x);
                            if v == 0 {
                                return Err(bad(format!("unit of E{id} vanishes at a kept point")));
                            }
                            total += roots_of(s.m, v);
                        }
                        if let Some(ui) = unit_at_infinity {
                            let v = reduce(ui).ok_or_else(|| bad(format!("unit of E{id} vanishes at infinity")))?;
                            total += roots_of(s.m, v);
                        }
                        return Ok(total);
                    }
                }
            }
            Err(FormulaError::MissingCharts)
        }
    }
}

/// `#X_{n,1}(F_q)` from the closed formula with `L = q` and cover points
/// counted on the charts. Only strata that contribute at this `n` need to
/// reduce well at `q`.
pub fn count_xn1_formula(res: &ResolutionData, n: u64, q: u64) -> Result<BigInt, FormulaError> {
    check_n(n)?;
    if res.charts.is_none() {
        return Err(FormulaError::MissingCharts);
    }
    let field = PrimeField::new(q).map_err(|e| FormulaError::InvalidArgument(e.to_string()))?;
    let strata = formula_strata(res, true)?;
    let qr = BigRational::from_integer(q.into());
    let mut total = BigRational::zero();
    for st in &strata {
        let w = weight_sum(&st.data, n);
        if w.is_zero() {
            continue;
        }
        if let Some((bad_n, _)) = st.data.iter().find(|(ni, _)| ni % q == 0) {
            return Err(FormulaError::BadPrime {
                q,
                reason: format!("{q} divides the multiplicity {bad_n}"),
            });
        }
        let count = cover_count(res, st, &field)?;
        if count == 0 {
            continue;
        }
        let lead = num_traits::pow(qr.clone() - BigRational::one(), st.data.len() - 1);
        total += lead * BigRational::from_integer(count.into()) * w.eval_at_q(&qr).expect("q > 0");
    }
    total *= num_traits::pow(qr, (n * res.ambient_dim as u64) as usize);
    if !total.is_integer() {
        return Err(FormulaError::BadPrime {
            q,
            reason: "closed formula is not an integer".into(),
        });
    }
    Ok(total.to_integer())
}

/// Checks that every cover count needed for `X_{n,1}` with `n <= max_n`
/// is valid at `q`.
pub fn check_good_prime(res: &ResolutionData, q: u64, max_n: u64) -> Result<(), FormulaError> {
    for n in 1..=max_n {
        count_xn1_formula(res, n, q)?;
    }
    Ok(())
}

/// `P(T) = sum_n [X_{n,1}] L^{-nm} T^n` in closed form. In `Chi` mode the
/// cover classes are replaced by their Euler characteristics and crossing
/// strata are left out, which preserves the `L = 1` specialization of
/// every coefficient.
pub fn motivic_series_p(res: &ResolutionData, mode: CoverMode) -> Result<RationalT, FormulaError> {
    let mut out = RationalT::zero();
    for st in formula_strata(res, mode == CoverMode::Split)? {
        let class = match mode {
            CoverMode::Split => cover_class(res, &st)?,
            CoverMode::Chi => {
                let Source::Exceptional(s) = st.source else { unreachable!() };
                LaurentL::constant(st.m as i64 * s.chi_open)
            }
        };
        let factors = st
            .data
            .iter()
            .map(|&(ni, nui)| GeomFactor::new(nui, ni).expect("N and nu are positive"))
            .collect();
        out.push_term(&LaurentL::l_minus_one_pow(st.data.len() as u32 - 1) * &class, factors);
    }
    Ok(out)
}

/// `S = sum_I (1 - L)^{|I|-1} [cover over E_I°]` (split mode).
pub fn motivic_volume_s(res: &ResolutionData) -> Result<LaurentL, FormulaError> {
    let one_minus_l = &LaurentL::one() - &LaurentL::l_pow(1);
    let mut total = LaurentL::zero();
    for st in formula_strata(res, true)? {
        let c = cover_class(res, &st)?;
        total = &total + &(&one_minus_l.pow(st.data.len() as u32 - 1) * &c);
    }
    Ok(total)
}

/// Euler characteristic of `S`: `sum_i N_i chi(E_i°)`, which is the Euler
/// characteristic of the Milnor fiber.
pub fn motivic_volume_chi(res: &ResolutionData) -> i64 {
    res.strata
        .iter()
        .filter(|s| s.ids.len() == 1)
        .map(|s| s.m as i64 * s.chi_open)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let got: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn s_invariant_examples() {
        let table: LefschetzTable = (1..=6).map(|n| (n, [0, 2, 3, 2, 0, -1][n as usize - 1])).collect();
        let s = s_invariants(&table).unwrap();
        assert_eq!((s[&1], s[&2], s[&3], s[&6]), (0, 2, 3, -6));
        let ones: LefschetzTable = (1..=8).map(|n| (n, 1)).collect();
        let s = s_invariants(&ones).unwrap();
        assert_eq!(s[&1], 1);
        assert!((2..=8).all(|i| s[&i] == 0));
        let broken: LefschetzTable = [(1, 0), (2, 1)].into_iter().collect();
        assert!(matches!(s_invariants(&broken), Err(FormulaError::InconsistentTable(_))));
        let gap: LefschetzTable = [(1, 0), (4, 1)].into_iter().collect();
        assert!(s_invariants(&gap).is_err());
    }

    #[test]
    fn kummer_cover_classes() {
        let one = UniPoly::from_ints(&[1]);
        // N = 2, u = 1, one puncture at infinity: two copies of A^1
        assert_eq!(line_cover_class(2, &one, &one, false), Some("2*L".parse().unwrap()));
        // N = 3, u = s^3, puncture at 0 only
        let s3 = UniPoly::from_ints(&[0, 0, 0, 1]);
        let s = UniPoly::from_ints(&[0, 1]);
        assert_eq!(line_cover_class(3, &s3, &s, true), Some("3*L".parse().unwrap()));
        // N = 6, u = s^2 (s + 1), punctures 0, -1, infinity: genus one
        let u = UniPoly::from_ints(&[0, 0, 1, 1]);
        let p = UniPoly::from_ints(&[0, 1, 1]);
        assert_eq!(line_cover_class(6, &u, &p, false), None);
        // N = 2, u = 1, punctures 0 and infinity: two copies of G_m
        assert_eq!(line_cover_class(2, &one, &s, false), Some("2*L - 2".parse().unwrap()));
        // N = 2, u = s, punctures 0 and infinity: z^2 = 1/s is one G_m
        assert_eq!(line_cover_class(2, &s, &s, false), Some("L - 1".parse().unwrap()));
    }

    #[test]
    fn weights_enumerate_compositions() {
        let mut ws = Vec::new();
        for_each_weight(&[(2, 2), (6, 5)], 10, &mut |w| ws.push(w));
        // (k1, k3) = (2, 1)
        assert_eq!(ws, vec![9]);
        let mut count = 0;
        for_each_weight(&[(1, 1), (1, 1)], 5, &mut |_| count += 1);
        assert_eq!(count, 4);
    }
}
