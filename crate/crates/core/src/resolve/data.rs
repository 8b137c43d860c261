use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::ResolveError;
use crate::gring::LaurentL;
use crate::poly::UniPoly;

/// An exceptional divisor `E_i` with its multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Divisor {
    pub id: u32,
    /// Multiplicity of `E_i` in the divisor of `f` pulled back.
    #[serde(rename = "N")]
    pub n: u64,
    /// One more than the multiplicity of `E_i` in the relative canonical divisor.
    pub nu: u64,
    pub chi_open: i64,
    pub adjacent: Vec<u32>,
    pub strict_contacts: u64,
}

/// A stratum `E_I°`: points lying on exactly the divisors in `ids`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub ids: Vec<u32>,
    pub chi_open: i64,
    pub m: u64,
    /// Optional class of the cyclic cover, overriding anything derived from
    /// charts.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_text")]
    pub class: Option<LaurentL>,
}

/// Data needed to count or classify the cyclic covers `z^m = 1/u`.
///
/// Polynomials are in the affine coordinate `s` of the divisor (or, for
/// contacts found at a single rational point, a local coordinate centered at
/// that point).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Chart {
    /// A divisor seen as `P^1`: `unit(s)` is the unit along the divisor in
    /// the affine chart, `punctures` vanishes exactly at the finite points
    /// removed from `E_i°`, and `unit_at_infinity` is `None` when the point at
    /// infinity is removed too.
    Line {
        id: u32,
        #[serde(with = "text")]
        unit: UniPoly,
        #[serde(with = "text")]
        punctures: UniPoly,
        #[serde(default, with = "opt_text")]
        unit_at_infinity: Option<BigRational>,
    },
    /// A zero-dimensional stratum: the intersection point of `ids` (or the
    /// whole exceptional locus of a germ in one variable).
    Point {
        ids: Vec<u32>,
        #[serde(with = "text")]
        unit: BigRational,
    },
    /// Points where a strict-transform branch of multiplicity `branch_n`
    /// crosses divisor `id`, located at the roots of `roots`; the unit there is
    /// `unit` evaluated at the root.
    Contact {
        id: u32,
        branch_n: u64,
        #[serde(with = "text")]
        roots: UniPoly,
        #[serde(with = "text")]
        unit: UniPoly,
    },
}

/// An embedded resolution summarized by its numerical data, strata, and
/// (optionally) the chart data used for point counting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionData {
    pub ambient_dim: usize,
    pub divisors: Vec<Divisor>,
    pub strata: Vec<Stratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charts: Option<Vec<Chart>>,
}

fn invalid(path: impl Into<String>, msg: impl Into<String>) -> ResolveError {
    ResolveError::Invalid {
        path: path.into(),
        msg: msg.into(),
    }
}

impl ResolutionData {
    /// Parses and validates a JSON document.
    pub fn from_json(bytes: &[u8]) -> Result<Self, ResolveError> {
        let data: ResolutionData = serde_json::from_slice(bytes).map_err(|e| ResolveError::Schema(e.to_string()))?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("resolution data always serializes")
    }

    pub fn divisor(&self, id: u32) -> Option<&Divisor> {
        self.divisors.iter().find(|d| d.id == id)
    }

    /// `(N_i, nu_i)` for every id of the stratum.
    pub fn numerical_data(&self, stratum: &Stratum) -> Vec<(u64, u64)> {
        stratum
            .ids
            .iter()
            .map(|id| {
                let d = self.divisor(*id).expect("validated stratum ids");
                (d.n, d.nu)
            })
            .collect()
    }

    pub fn charts(&self) -> &[Chart] {
        self.charts.as_deref().unwrap_or(&[])
    }

    /// Number of intersection points between pairs of divisors.
    pub fn pair_points(&self) -> usize {
        self.divisors.iter().map(|d| d.adjacent.len()).sum::<usize>() / 2
    }

    pub fn contact_points(&self) -> u64 {
        self.divisors.iter().map(|d| d.strict_contacts).sum()
    }

    /// Checks every structural invariant; errors name the offending field.
    pub fn validate(&self) -> Result<(), ResolveError> {
        if self.ambient_dim == 0 {
            return Err(invalid("ambient_dim", "must be positive"));
        }
        if self.divisors.is_empty() {
            return Err(invalid("divisors", "at least one divisor is required"));
        }
        let mut index: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, d) in self.divisors.iter().enumerate() {
            if index.insert(d.id, i).is_some() {
                return Err(invalid(format!("divisors[{i}].id"), format!("duplicate id {}", d.id)));
            }
            if d.n == 0 {
                return Err(invalid(format!("divisors[{i}].N"), "must be positive"));
            }
            if d.nu == 0 {
                return Err(invalid(format!("divisors[{i}].nu"), "must be positive"));
            }
        }
        for (i, d) in self.divisors.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for a in &d.adjacent {
                let path = format!("divisors[{i}].adjacent");
                if *a == d.id {
                    return Err(invalid(path, "a divisor cannot be adjacent to itself"));
                }
                let Some(&j) = index.get(a) else {
                    return Err(invalid(path, format!("unknown divisor {a}")));
                };
                if !seen.insert(*a) {
                    return Err(invalid(path, format!("divisor {a} listed twice")));
                }
                if !self.divisors[j].adjacent.contains(&d.id) {
                    return Err(invalid(path, format!("adjacency with {a} is not symmetric")));
                }
            }
        }
        self.check_connected(&index)?;

        let mut strata_by_ids: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for (k, s) in self.strata.iter().enumerate() {
            let path = |f: &str| format!("strata[{k}].{f}");
            if s.ids.is_empty() {
                return Err(invalid(path("ids"), "must be nonempty"));
            }
            let mut sorted = s.ids.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.ids.len() {
                return Err(invalid(path("ids"), "repeated divisor id"));
            }
            if s.ids.len() > self.ambient_dim {
                return Err(invalid(path("ids"), "more divisors than the ambient dimension"));
            }
            let mut g = 0u64;
            for id in &s.ids {
                let Some(&j) = index.get(id) else {
                    return Err(invalid(path("ids"), format!("unknown divisor {id}")));
                };
                g = g.gcd(&self.divisors[j].n);
            }
            if s.m != g {
                return Err(invalid(path("m"), format!("m_I mismatch (gcd of N is {g}, found {})", s.m)));
            }
            if strata_by_ids.insert(sorted, k).is_some() {
                return Err(invalid(path("ids"), "duplicate stratum"));
            }
        }
        for (i, d) in self.divisors.iter().enumerate() {
            match strata_by_ids.get(&vec![d.id]) {
                None => return Err(invalid(format!("divisors[{i}]"), format!("no stratum for divisor {}", d.id))),
                Some(&k) if self.strata[k].chi_open != d.chi_open => {
                    return Err(invalid(
                        format!("strata[{k}].chi_open"),
                        format!("differs from divisors[{i}].chi_open"),
                    ))
                }
                _ => {}
            }
        }
        if self.ambient_dim == 2 {
            self.check_curve_configuration(&strata_by_ids)?;
        }
        self.check_charts(&index, &strata_by_ids)
    }

    fn check_connected(&self, index: &BTreeMap<u32, usize>) -> Result<(), ResolveError> {
        let mut seen = vec![false; self.divisors.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for a in &self.divisors[i].adjacent {
                let j = index[a];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().all(|s| *s) {
            Ok(())
        } else {
            Err(invalid("divisors", "dual graph is not connected"))
        }
    }

    /// Plane-curve specific checks: every divisor is a rational curve, so its
    /// open part has Euler characteristic 2 minus its special points, and
    /// pair strata are exactly the adjacencies.
    fn check_curve_configuration(&self, strata_by_ids: &BTreeMap<Vec<u32>, usize>) -> Result<(), ResolveError> {
        for (i, d) in self.divisors.iter().enumerate() {
            let expected = 2 - d.adjacent.len() as i64 - d.strict_contacts as i64;
            if d.chi_open != expected {
                return Err(invalid(
                    format!("divisors[{i}].chi_open"),
                    format!("expected 2 - adjacent - strict_contacts = {expected}, found {}", d.chi_open),
                ));
            }
            for a in &d.adjacent {
                let mut key = vec![d.id, *a];
                key.sort_unstable();
                if !strata_by_ids.contains_key(&key) {
                    return Err(invalid(
                        format!("divisors[{i}].adjacent"),
                        format!("no stratum for the intersection with {a}"),
                    ));
                }
            }
        }
        for (k, s) in self.strata.iter().enumerate() {
            if s.ids.len() == 2 {
                let d = self.divisor(s.ids[0]).unwrap();
                if !d.adjacent.contains(&s.ids[1]) {
                    return Err(invalid(format!("strata[{k}].ids"), "divisors do not meet"));
                }
                if s.chi_open != 1 {
                    return Err(invalid(format!("strata[{k}].chi_open"), "an intersection point has chi_open 1"));
                }
            }
        }
        Ok(())
    }

    fn check_charts(
        &self,
        index: &BTreeMap<u32, usize>,
        strata_by_ids: &BTreeMap<Vec<u32>, usize>,
    ) -> Result<(), ResolveError> {
        for (k, c) in self.charts().iter().enumerate() {
            let path = format!("charts[{k}]");
            match c {
                Chart::Line { id, punctures, .. } | Chart::Contact { id, roots: punctures, .. } => {
                    if !index.contains_key(id) {
                        return Err(invalid(path + ".id", format!("unknown divisor {id}")));
                    }
                    if punctures.is_zero() {
                        return Err(invalid(path, "root polynomial must be nonzero"));
                    }
                }
                Chart::Point { ids, .. } => {
                    let mut key = ids.clone();
                    key.sort_unstable();
                    if !strata_by_ids.contains_key(&key) {
                        return Err(invalid(path + ".ids", "not a stratum"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Serializes through `Display`/`FromStr`.
mod text {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

mod opt_text {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        match Option::<String>::deserialize(d)? {
            Some(raw) => raw.parse().map(Some).map_err(serde::de::Error::custom),
            None => Ok(None),
        }
    }
}
