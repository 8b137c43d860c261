//! Embedded resolution of plane-curve germs by iterated point blowups.
//!
//! Every pending center is described in local coordinates `(x1, x2)` in which
//! the exceptional divisors through it are coordinate axes. Blowing up uses
//! two charts: `x2 = x1 * s` (the new divisor is `x1 = 0`, with affine
//! coordinate `s`) and `x1 = x2 * t` (covering the point at infinity).

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::data::{Chart, Divisor, ResolutionData, Stratum};
use super::reduce::squarefree_part;
use super::ResolveError;
use crate::poly::{MultiPoly, UniPoly};

/// Knobs for [`resolve_with`].
#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub max_blowups: usize,
    /// Additional blowups at free points: `(divisor id, s)` blows up the
    /// point with affine coordinate `s` on that divisor right after it is
    /// created. Produces non-minimal but valid resolutions.
    pub extra_centers: Vec<(u32, BigRational)>,
}

impl ResolveOptions {
    pub fn new(max_blowups: usize) -> Self {
        ResolveOptions {
            max_blowups,
            extra_centers: Vec::new(),
        }
    }
}

struct Center {
    /// Total transform of `f`.
    total: MultiPoly,
    /// Strict transform of the reduced curve.
    strict: MultiPoly,
    /// Divisor along `x1 = 0`.
    d1: Option<u32>,
    /// Divisor along `x2 = 0`.
    d2: Option<u32>,
    forced: bool,
}

#[derive(Default)]
struct DivRec {
    n: u64,
    nu: u64,
    adjacent: BTreeSet<u32>,
    contacts: u64,
}

struct Resolver<'a> {
    opts: &'a ResolveOptions,
    divisors: Vec<DivRec>,
    lines: Vec<Chart>,
    points: Vec<Chart>,
    contacts: Vec<Chart>,
    queue: VecDeque<Center>,
    blowups: usize,
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ResolveError> {
    if ok {
        Ok(())
    } else {
        Err(ResolveError::ChartCheck(msg()))
    }
}

impl Resolver<'_> {
    fn n_of(&self, d: Option<u32>) -> u32 {
        d.map_or(0, |id| self.divisors[id as usize - 1].n as u32)
    }

    fn run(&mut self, f: &MultiPoly) -> Result<(), ResolveError> {
        self.queue.push_back(Center {
            total: f.clone(),
            strict: squarefree_part(f),
            d1: None,
            d2: None,
            forced: true,
        });
        while let Some(c) = self.queue.pop_front() {
            self.process(c)?;
        }
        Ok(())
    }

    fn process(&mut self, c: Center) -> Result<(), ResolveError> {
        let passes = c.strict.constant_term().is_zero();
        if !c.forced {
            match (c.d1, c.d2, passes) {
                (Some(a), Some(b), false) => return self.record_pair(&c, a, b),
                (Some(id), None, true) | (None, Some(id), true) => {
                    if self.try_contact(&c, id)? {
                        return Ok(());
                    }
                }
                (_, _, false) => {
                    return Err(ResolveError::ChartCheck("a center that nothing passes through".into()));
                }
                _ => {}
            }
        }
        self.blow_up(c)
    }

    fn record_pair(&mut self, c: &Center, a: u32, b: u32) -> Result<(), ResolveError> {
        let unit = c
            .total
            .div_var_power(0, self.n_of(Some(a)))
            .div_var_power(1, self.n_of(Some(b)))
            .constant_term();
        check(!unit.is_zero(), || format!("vanishing unit at E{a} ∩ E{b}"))?;
        self.divisors[a as usize - 1].adjacent.insert(b);
        self.divisors[b as usize - 1].adjacent.insert(a);
        self.points.push(Chart::Point {
            ids: vec![a.min(b), a.max(b)],
            unit,
        });
        Ok(())
    }

    /// A single divisor and the strict transform: records a transverse
    /// crossing of a smooth branch, or returns `false` if a blowup is needed.
    fn try_contact(&mut self, c: &Center, id: u32) -> Result<bool, ResolveError> {
        // variable vanishing on the divisor, and the coordinate along it
        let (normal, along) = if c.d1 == Some(id) { (0, 1) } else { (1, 0) };
        let strict_on_e = c.strict.restrict_to_axis(along);
        let transverse = strict_on_e.coeffs().get(1).is_some_and(|v| !v.is_zero());
        if !transverse {
            return Ok(false);
        }
        let rest = c.total.div_var_power(normal, self.n_of(Some(id)));
        let e = rest.mult_at_origin().expect("nonzero total transform");
        let on_e = rest.restrict_to_axis(along);
        let lowest = on_e.coeffs().iter().position(|v| !v.is_zero());
        check(lowest == Some(e as usize), || format!("branch multiplicity mismatch on E{id}"))?;
        self.divisors[id as usize - 1].contacts += 1;
        self.contacts.push(Chart::Contact {
            id,
            branch_n: e as u64,
            roots: UniPoly::from_ints(&[0, 1]),
            unit: UniPoly::constant(on_e.coeffs()[e as usize].clone()),
        });
        Ok(true)
    }

    fn blow_up(&mut self, c: Center) -> Result<(), ResolveError> {
        self.blowups += 1;
        if self.blowups > self.opts.max_blowups {
            return Err(ResolveError::MaxBlowupsExceeded(self.opts.max_blowups));
        }
        let (n1, n2) = (self.n_of(c.d1), self.n_of(c.d2));
        let n_e = c.total.mult_at_origin().expect("nonzero total transform");
        let m_strict = c.strict.mult_at_origin().expect("nonzero strict transform");
        let rest = c.total.div_var_power(0, n1).div_var_power(1, n2);
        check(rest.mult_at_origin() == Some(n_e - n1 - n2), || {
            "multiplicity recursion disagrees with the total transform".into()
        })?;
        let nu_e = 2 + [c.d1, c.d2]
            .iter()
            .flatten()
            .map(|d| self.divisors[*d as usize - 1].nu - 1)
            .sum::<u64>();
        self.divisors.push(DivRec {
            n: n_e as u64,
            nu: nu_e,
            ..Default::default()
        });
        let id = self.divisors.len() as u32;

        // chart x2 = x1 * s, coordinates (x1, s)
        let total_a = c.total.map_exponents(2, |e| vec![e[0] + e[1], e[1]]);
        check(total_a.order_in(0) == Some(n_e), || format!("order of f along E{id} differs from N"))?;
        let total_a_rest = total_a.div_var_power(0, n_e);
        let unit = total_a_rest.restrict_to_axis(1);
        let strict_a = c.strict.map_exponents(2, |e| vec![e[0] + e[1], e[1]]).div_var_power(0, m_strict);

        // chart x1 = x2 * t, coordinates (t, x2): the point at infinity is t = 0
        let total_b = c.total.map_exponents(2, |e| vec![e[0], e[0] + e[1]]);
        check(total_b.order_in(1) == Some(n_e), || format!("order of f along E{id} differs from N"))?;
        let unit_inf = total_b.div_var_power(1, n_e).constant_term();
        let strict_b = c.strict.map_exponents(2, |e| vec![e[0], e[0] + e[1]]).div_var_power(1, m_strict);
        let inf_special = c.d1.is_some() || strict_b.constant_term().is_zero();
        check(inf_special == unit_inf.is_zero(), || format!("inconsistent point at infinity on E{id}"))?;

        let mut punctures = if unit.degree().unwrap_or(0) > 0 {
            unit.squarefree_part()
        } else {
            UniPoly::constant(BigRational::one())
        };
        for r in unit.rational_roots() {
            let at = [BigRational::zero(), r.clone()];
            self.queue.push_back(Center {
                total: total_a.translate(&at),
                strict: strict_a.translate(&at),
                d1: Some(id),
                d2: if r.is_zero() { c.d2 } else { None },
                forced: false,
            });
        }
        self.record_irrational_contacts(id, &unit, &strict_a.restrict_to_axis(1))?;
        for (_, r) in self.opts.extra_centers.iter().filter(|(d, _)| *d == id) {
            if unit.eval(r).is_zero() {
                return Err(ResolveError::InvalidExtraCenter { id, point: r.to_string() });
            }
            punctures = punctures.mul(&UniPoly::linear_root(r));
            let at = [BigRational::zero(), r.clone()];
            self.queue.push_back(Center {
                total: total_a.translate(&at),
                strict: strict_a.translate(&at),
                d1: Some(id),
                d2: None,
                forced: true,
            });
        }
        if inf_special {
            self.queue.push_back(Center {
                total: total_b,
                strict: strict_b,
                d1: c.d1,
                d2: Some(id),
                forced: false,
            });
        }
        self.lines.push(Chart::Line {
            id,
            unit,
            punctures,
            unit_at_infinity: (!unit_inf.is_zero()).then_some(unit_inf),
        });
        Ok(())
    }

    /// Points of the new divisor over irrational roots of its unit. They
    /// must be transverse crossings of smooth branches, since blowing them up
    /// would need a field extension.
    fn record_irrational_contacts(&mut self, id: u32, unit: &UniPoly, strict_on_e: &UniPoly) -> Result<(), ResolveError> {
        for (h, k) in unit.squarefree_decomposition() {
            let mut irr = h.clone();
            for r in h.rational_roots() {
                irr = irr.exact_div(&UniPoly::linear_root(&r));
            }
            let deg = irr.degree().unwrap_or(0);
            if deg == 0 {
                continue;
            }
            let simple = irr.divides(strict_on_e) && irr.gcd(&strict_on_e.derivative()).degree() == Some(0);
            if !simple {
                return Err(ResolveError::NonRationalCenter(format!(
                    "E{id}: the strict transform is singular or tangent over the roots of {irr}"
                )));
            }
            self.divisors[id as usize - 1].contacts += deg as u64;
            self.contacts.push(Chart::Contact {
                id,
                branch_n: k as u64,
                roots: irr.clone(),
                unit: unit.exact_div(&irr.pow(k as u32)),
            });
        }
        Ok(())
    }

    fn finish(self) -> Result<ResolutionData, ResolveError> {
        let mut divisors = Vec::new();
        let mut strata = Vec::new();
        for (i, d) in self.divisors.iter().enumerate() {
            let id = i as u32 + 1;
            let chi = 2 - d.adjacent.len() as i64 - d.contacts as i64;
            divisors.push(Divisor {
                id,
                n: d.n,
                nu: d.nu,
                chi_open: chi,
                adjacent: d.adjacent.iter().copied().collect(),
                strict_contacts: d.contacts,
            });
            strata.push(Stratum {
                ids: vec![id],
                chi_open: chi,
                m: d.n,
                class: None,
            });
        }
        for p in &self.points {
            if let Chart::Point { ids, .. } = p {
                let (a, b) = (&self.divisors[ids[0] as usize - 1], &self.divisors[ids[1] as usize - 1]);
                strata.push(Stratum {
                    ids: ids.clone(),
                    chi_open: 1,
                    m: a.n.gcd(&b.n),
                    class: None,
                });
            }
        }
        let mut charts = self.lines;
        charts.extend(self.points);
        charts.extend(self.contacts);
        let data = ResolutionData {
            ambient_dim: 2,
            divisors,
            strata,
            charts: Some(charts),
        };
        let euler: i64 = data.divisors.iter().map(|d| d.chi_open).sum::<i64>()
            + data.pair_points() as i64
            + data.contact_points() as i64;
        check(euler == 1 + self.blowups as i64, || {
            format!("exceptional locus has Euler characteristic {euler}, expected {}", 1 + self.blowups)
        })?;
        data.validate()?;
        Ok(data)
    }
}

/// Resolves the germ at the origin of the plane curve `f = 0`.
pub fn resolve_plane_curve(f: &MultiPoly, max_blowups: usize) -> Result<ResolutionData, ResolveError> {
    resolve_with(f, &ResolveOptions::new(max_blowups))
}

/// Like [`resolve_plane_curve`], with extra options.
pub fn resolve_with(f: &MultiPoly, opts: &ResolveOptions) -> Result<ResolutionData, ResolveError> {
    if f.num_vars() != 2 {
        return Err(ResolveError::UnsupportedDimension(f.num_vars()));
    }
    check_vanishes(f)?;
    let mut r = Resolver {
        opts,
        divisors: Vec::new(),
        lines: Vec::new(),
        points: Vec::new(),
        contacts: Vec::new(),
        queue: VecDeque::new(),
        blowups: 0,
    };
    r.run(f)?;
    r.finish()
}

/// Resolution data for a germ in one or two variables. In one variable the
/// identity already is a resolution: the origin is a single divisor of
/// multiplicity `ord_0 f`.
pub fn resolve_germ(f: &MultiPoly, max_blowups: usize) -> Result<ResolutionData, ResolveError> {
    match f.num_vars() {
        1 => {
            check_vanishes(f)?;
            let n = f.mult_at_origin().expect("nonzero");
            let unit = f.coeff(&[n]);
            Ok(ResolutionData {
                ambient_dim: 1,
                divisors: vec![Divisor {
                    id: 1,
                    n: n as u64,
                    nu: 1,
                    chi_open: 1,
                    adjacent: vec![],
                    strict_contacts: 0,
                }],
                strata: vec![Stratum {
                    ids: vec![1],
                    chi_open: 1,
                    m: n as u64,
                    class: None,
                }],
                charts: Some(vec![Chart::Point { ids: vec![1], unit }]),
            })
        }
        2 => resolve_plane_curve(f, max_blowups),
        k => Err(ResolveError::UnsupportedDimension(k)),
    }
}

fn check_vanishes(f: &MultiPoly) -> Result<(), ResolveError> {
    if f.is_zero() {
        return Err(ResolveError::ZeroPolynomial);
    }
    if !f.constant_term().is_zero() {
        return Err(ResolveError::NotVanishingAtOrigin);
    }
    Ok(())
}
