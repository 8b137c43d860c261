//! Cross-checks between the resolution pipeline and the arc-counting
//! pipeline, reported in a uniform JSON-friendly format.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::formulas::{count_xn1_formula, lefschetz_acampo, lefschetz_tn, FormulaError};
use crate::jets::{
    admissible_primes, count_points_xn1, degree_bound, interpolate_euler, CountOptions, CountProblem, CountTable,
    JetError,
};
use crate::poly::ring::is_prime;
use crate::poly::{parse_poly, MultiPoly, PolyError};
use crate::resolve::{resolve_germ, ResolutionData, ResolveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Jets(#[from] JetError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A polynomial germ at the origin with the variable names used to print it.
#[derive(Clone, Debug)]
pub struct Germ {
    pub poly: MultiPoly,
    pub vars: Vec<String>,
}

impl Germ {
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, PolyError> {
        Ok(Germ {
            poly: parse_poly(text, vars)?,
            vars: vars.iter().map(|v| v.to_string()).collect(),
        })
    }

    pub fn label(&self) -> String {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        format!("{} in ({})", self.poly.to_string_with(&names), self.vars.join(","))
    }

    pub fn resolve(&self) -> Result<ResolutionData, ResolveError> {
        resolve_germ(&self.poly, 64)
    }
}

/// The germs every check is exercised on.
pub fn corpus() -> Vec<(&'static str, Germ)> {
    let g = |t: &str, v: &[&str]| Germ::parse(t, v).expect("corpus parses");
    vec![
        ("cusp", g("x^2+y^3", &["x", "y"])),
        ("node", g("x*y", &["x", "y"])),
        ("three lines", g("x^3+y^3", &["x", "y"])),
        ("smooth", g("x", &["x"])),
        ("double point", g("x^2", &["x"])),
        ("triple point", g("x^3", &["x"])),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Lefschetz numbers of the monodromy equal Euler characteristics of
    /// the jet spaces.
    #[serde(rename = "MT")]
    Mt,
    /// Point counts of the jet spaces match the closed formula.
    #[serde(rename = "PT")]
    Pt,
    /// Lefschetz numbers of powers of the jet-space monodromy.
    #[serde(rename = "SEC")]
    Sec,
    /// Monomial germs in normal-crossing form.
    #[serde(rename = "TRIV")]
    Triv,
}

impl Theorem {
    pub fn tag(&self) -> &'static str {
        match self {
            Theorem::Mt => "MT",
            Theorem::Pt => "PT",
            Theorem::Sec => "SEC",
            Theorem::Triv => "TRIV",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub germ: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub verdict: Verdict,
    pub ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl VerificationReport {
    fn new(theorem: Theorem, germ: String, params: BTreeMap<String, String>, lhs: Vec<String>, rhs: Vec<String>, start: Instant) -> Self {
        let verdict = if lhs == rhs { Verdict::Pass } else { Verdict::Fail };
        VerificationReport {
            theorem,
            germ,
            params,
            lhs,
            rhs,
            verdict,
            ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{} {} [{}]: lhs = [{}], rhs = [{}] -> {}",
            self.theorem.tag(),
            self.germ,
            params.join(" "),
            self.lhs.join(", "),
            self.rhs.join(", "),
            match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
            }
        )
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Picks sample primes for an interpolation: the given ones (checked), or
/// the first admissible ones up to `bound`.
fn sample_primes(
    res: &ResolutionData,
    n: u64,
    fixed: Option<u64>,
    given: Option<&[u64]>,
    need: usize,
    bound: u64,
) -> Result<Vec<u64>, VerifyError> {
    let chosen: Vec<u64> = match given {
        Some(ps) => {
            let top = ps.iter().copied().max().unwrap_or(2);
            let ok = admissible_primes(res, n, fixed, top);
            if let Some(bad) = ps.iter().find(|q| !ok.contains(q)) {
                return Err(VerifyError::Precondition(format!("{bad} is not an admissible prime here")));
            }
            ps.to_vec()
        }
        None => admissible_primes(res, n, fixed, bound).into_iter().take(need).collect(),
    };
    if chosen.len() < need {
        return Err(VerifyError::Precondition(format!(
            "{} admissible primes available, {need} needed for the degree bound",
            chosen.len()
        )));
    }
    Ok(chosen)
}

/// Default search range for sample primes.
pub const PRIME_RANGE: u64 = 31;

/// Euler characteristic of `X_{n,1}`, interpolated from point counts,
/// against the Lefschetz number of `M^n` from the resolution.
pub fn verify_mt(germ: &Germ, n: u64, primes: Option<&[u64]>, opts: &CountOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let res = germ.resolve()?;
    let bound = degree_bound(&res, n);
    let primes = sample_primes(&res, n, None, primes, bound as usize + 1, PRIME_RANGE)?;
    let problem = CountProblem {
        germ: germ.label(),
        n,
        d: None,
    };
    let table = CountTable::sample(&germ.poly, problem, bound, &primes, opts)?;
    let mut params = BTreeMap::from([
        ("n".to_string(), n.to_string()),
        ("primes".to_string(), join(&primes)),
        ("degree_bound".to_string(), bound.to_string()),
    ]);
    let lhs = match interpolate_euler(&table) {
        Ok(fit) => {
            params.insert("fit".into(), fit.render());
            vec![fit.chi.to_string()]
        }
        Err(e) => vec![e.to_string()],
    };
    let rhs = vec![lefschetz_acampo(&res, n).to_string()];
    Ok(VerificationReport::new(Theorem::Mt, germ.label(), params, lhs, rhs, start))
}

/// Per-prime equality of the arc count and the closed formula.
pub fn verify_pt_counts(germ: &Germ, n: u64, qs: &[u64], opts: &CountOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let res = germ.resolve()?;
    if qs.is_empty() {
        return Err(VerifyError::Precondition("at least one prime is required".into()));
    }
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &q in qs {
        let formula = count_xn1_formula(&res, n, q)?;
        lhs.push(count_points_xn1(&germ.poly, n, q, opts)?.to_string());
        rhs.push(formula.to_string());
    }
    let params = BTreeMap::from([("n".to_string(), n.to_string()), ("q".to_string(), join(qs))]);
    Ok(VerificationReport::new(Theorem::Pt, germ.label(), params, lhs, rhs, start))
}

/// Euler characteristic of the fixed locus of `T_n^d` (interpolated from
/// counts) against `Lambda(M^gcd(n, d))`.
///
/// Fixed arcs are `psi(t^e)` with `psi` in `X_{gcd(n,d),1}`, so the count is
/// a polynomial of degree at most `degree_bound(res, gcd(n, d))`.
pub fn verify_sec(
    germ: &Germ,
    n: u64,
    d: u64,
    primes: Option<&[u64]>,
    opts: &CountOptions,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    if d == 0 {
        return Err(VerifyError::Precondition("d must be at least 1".into()));
    }
    let res = germ.resolve()?;
    let bound = degree_bound(&res, n.gcd(&d));
    let primes = sample_primes(&res, n, Some(d), primes, bound as usize + 1, 37)?;
    let problem = CountProblem {
        germ: germ.label(),
        n,
        d: Some(d),
    };
    let table = CountTable::sample(&germ.poly, problem, bound, &primes, opts)?;
    let mut params = BTreeMap::from([
        ("n".to_string(), n.to_string()),
        ("d".to_string(), d.to_string()),
        ("primes".to_string(), join(&primes)),
        ("degree_bound".to_string(), bound.to_string()),
    ]);
    let lhs = match interpolate_euler(&table) {
        Ok(fit) => {
            params.insert("fit".into(), fit.render());
            vec![fit.chi.to_string()]
        }
        Err(e) => vec![e.to_string()],
    };
    let rhs = vec![lefschetz_tn(&res, n, d).to_string()];
    Ok(VerificationReport::new(Theorem::Sec, germ.label(), params, lhs, rhs, start))
}

fn check_monomial_locus(ns: &[u64], ks: &[u64], m: usize, n: u64) -> Result<(), VerifyError> {
    if ns.is_empty() || ns.len() != ks.len() || ns.len() > m {
        return Err(VerifyError::Precondition(
            "need 1 <= |N| = |k| <= m".into(),
        ));
    }
    if ns.iter().chain(ks).any(|v| *v == 0) {
        return Err(VerifyError::Precondition("N_i and k_i must be positive".into()));
    }
    let total: u64 = ns.iter().zip(ks).map(|(a, b)| a * b).sum();
    if total != n {
        return Err(VerifyError::Precondition(format!("sum k_i N_i = {total}, not {n}")));
    }
    Ok(())
}

/// Closed-form count of arcs on `F_q^m` with `ord y_i = k_i` and
/// `prod y_i^{N_i} = t^n + ...`: the leading coefficients solve
/// `prod z_i^{N_i} = 1` on a torus, `(q-1)^{|I|-1} gcd(gcd N_i, q-1)`
/// solutions, and every higher coefficient is free.
pub fn oracle_normal_crossings(ns: &[u64], ks: &[u64], m: usize, n: u64, q: u64) -> Result<u128, VerifyError> {
    check_monomial_locus(ns, ks, m, n)?;
    if !is_prime(q) {
        return Err(VerifyError::Precondition(format!("{q} is not prime")));
    }
    let g = ns.iter().fold(0u64, |g, v| g.gcd(v));
    let torus = ((q - 1) as u128).pow(ns.len() as u32 - 1) * g.gcd(&(q - 1)) as u128;
    let free = m as u64 * n - ks.iter().sum::<u64>();
    Ok(torus * (q as u128).pow(free as u32))
}

/// The same count by listing every arc of the variables that occur in the
/// monomial; variables that do not occur contribute `q^n` each. Arcs of each
/// variable are listed separately and bucketed by `y_i^{N_i}`, so the work is
/// a product of per-variable lists rather than one joint list.
pub fn enumerate_normal_crossings(ns: &[u64], ks: &[u64], m: usize, n: u64, q: u64) -> Result<u128, VerifyError> {
    check_monomial_locus(ns, ks, m, n)?;
    if !is_prime(q) {
        return Err(VerifyError::Precondition(format!("{q} is not prime")));
    }
    let len = n as usize + 1;
    let mut unit = vec![0u64; len];
    unit[0] = 1;
    // distinct partial products with multiplicities
    let mut partial: Vec<(Vec<u64>, u128)> = vec![(unit, 1)];
    for (&big_n, &k) in ns.iter().zip(ks) {
        let powers = arc_powers(big_n, k as usize, len, q);
        let mut next: HashMap<Vec<u64>, u128> = HashMap::new();
        for (a, ca) in &partial {
            for (b, cb) in &powers {
                *next.entry(mul_trunc(a, b, q)).or_default() += ca * cb;
            }
        }
        partial = next.into_iter().collect();
    }
    let hits: u128 = partial
        .iter()
        .filter(|(s, _)| s[..len - 1].iter().all(|c| *c == 0) && s[len - 1] == 1)
        .map(|(_, c)| c)
        .sum();
    Ok(hits * (q as u128).pow((n as u32) * (m - ns.len()) as u32))
}

/// `y^N` for every arc `y` with `ord y = k`, bucketed.
fn arc_powers(big_n: u64, k: usize, len: usize, q: u64) -> Vec<(Vec<u64>, u128)> {
    let slots = len - k;
    let mut out: HashMap<Vec<u64>, u128> = HashMap::new();
    for mut code in 0..q.pow(slots as u32) {
        let mut arc = vec![0u64; len];
        for c in arc[k..].iter_mut() {
            *c = code % q;
            code /= q;
        }
        if arc[k] == 0 {
            continue;
        }
        let mut power = vec![0u64; len];
        power[0] = 1;
        for _ in 0..big_n {
            power = mul_trunc(&power, &arc, q);
        }
        *out.entry(power).or_default() += 1;
    }
    out.into_iter().collect()
}

fn mul_trunc(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len()];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
        for (j, y) in b[..a.len() - i].iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    out
}

/// Closed form against enumeration for one monomial locus.
pub fn verify_triv(ns: &[u64], ks: &[u64], m: usize, n: u64, q: u64) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let lhs = vec![oracle_normal_crossings(ns, ks, m, n, q)?.to_string()];
    let rhs = vec![enumerate_normal_crossings(ns, ks, m, n, q)?.to_string()];
    let params = BTreeMap::from([
        ("N".to_string(), join(ns)),
        ("k".to_string(), join(ks)),
        ("m".to_string(), m.to_string()),
        ("n".to_string(), n.to_string()),
        ("q".to_string(), q.to_string()),
    ]);
    let label = ns
        .iter()
        .enumerate()
        .map(|(i, e)| format!("y{}^{e}", i + 1))
        .collect::<Vec<_>>()
        .join("*");
    Ok(VerificationReport::new(Theorem::Triv, label, params, lhs, rhs, start))
}

/// One verification request.
#[derive(Clone, Debug)]
pub enum Job {
    Mt { germ: Germ, n: u64, primes: Option<Vec<u64>> },
    Pt { germ: Germ, n: u64, qs: Vec<u64> },
    Sec { germ: Germ, n: u64, d: u64, primes: Option<Vec<u64>> },
    Triv { ns: Vec<u64>, ks: Vec<u64>, m: usize, n: u64, q: u64 },
}

impl Job {
    fn theorem(&self) -> Theorem {
        match self {
            Job::Mt { .. } => Theorem::Mt,
            Job::Pt { .. } => Theorem::Pt,
            Job::Sec { .. } => Theorem::Sec,
            Job::Triv { .. } => Theorem::Triv,
        }
    }

    pub fn run(&self, opts: &CountOptions) -> Result<VerificationReport, VerifyError> {
        match self {
            Job::Mt { germ, n, primes } => verify_mt(germ, *n, primes.as_deref(), opts),
            Job::Pt { germ, n, qs } => verify_pt_counts(germ, *n, qs, opts),
            Job::Sec { germ, n, d, primes } => verify_sec(germ, *n, *d, primes.as_deref(), opts),
            Job::Triv { ns, ks, m, n, q } => verify_triv(ns, ks, *m, *n, *q),
        }
    }

    fn germ_label(&self) -> String {
        match self {
            Job::Mt { germ, .. } | Job::Pt { germ, .. } | Job::Sec { germ, .. } => germ.label(),
            Job::Triv { ns, .. } => join(ns),
        }
    }
}

/// Runs jobs in parallel. A job that errors becomes a failing report whose
/// left side carries the error, so one bad job never hides the others.
pub fn run_batch(jobs: &[Job], opts: &CountOptions) -> Vec<VerificationReport> {
    jobs.par_iter()
        .map(|job| {
            let start = Instant::now();
            job.run(opts).unwrap_or_else(|e| VerificationReport {
                theorem: job.theorem(),
                germ: job.germ_label(),
                params: BTreeMap::new(),
                lhs: vec![format!("error: {e}")],
                rhs: vec![],
                verdict: Verdict::Fail,
                ms: start.elapsed().as_millis() as u64,
            })
        })
        .collect()
}

/// A count-level pass at `degree_bound + 1` admissible primes forces the
/// interpolated Euler characteristic to agree, so a passing count report
/// with enough primes and a failing Euler report for the same germ and `n`
/// cannot both be right. Returns `false` on such a contradiction.
pub fn pt_implies_mt(pt: &VerificationReport, mt: &VerificationReport, degree_bound: u64) -> bool {
    let primes = pt.params.get("q").map_or(0, |q| q.split(',').count());
    let same = pt.germ == mt.germ && pt.params.get("n") == mt.params.get("n");
    !(same && pt.passed() && primes as u64 > degree_bound) || mt.passed()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_crossing_examples() {
        assert_eq!(oracle_normal_crossings(&[1, 1], &[1, 1], 2, 2, 5).unwrap(), 100);
        assert_eq!(oracle_normal_crossings(&[2], &[1], 1, 2, 7).unwrap(), 14);
        assert_eq!(oracle_normal_crossings(&[2], &[2], 1, 4, 5).unwrap(), 50);
        assert!(oracle_normal_crossings(&[2], &[1], 1, 3, 5).is_err());
        assert_eq!(enumerate_normal_crossings(&[1, 1], &[1, 1], 2, 2, 5).unwrap(), 100);
        assert_eq!(enumerate_normal_crossings(&[2], &[1], 2, 2, 3).unwrap(), 2 * 3 * 9);
    }

    #[test]
    fn implication_flags_contradictions() {
        let mk = |theorem, q: &str, pass: bool| VerificationReport {
            theorem,
            germ: "g".into(),
            params: BTreeMap::from([("n".into(), "2".into()), ("q".into(), q.into())]),
            lhs: vec![],
            rhs: vec![],
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            ms: 0,
        };
        let pt = mk(Theorem::Pt, "3,5,7,11", true);
        assert!(pt_implies_mt(&pt, &mk(Theorem::Mt, "", true), 3));
        assert!(!pt_implies_mt(&pt, &mk(Theorem::Mt, "", false), 3));
        assert!(pt_implies_mt(&pt, &mk(Theorem::Mt, "", false), 4));
    }
}
