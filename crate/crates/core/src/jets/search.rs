//! Pruned depth-first enumeration of truncated arcs.
//!
//! `f(phi)` is evaluated through a straight-line program whose nodes are the
//! monomials of `f` and their prefixes, each node being its parent times one
//! variable. The coefficient of `t^i` in a degree-`D` monomial only involves
//! arc coefficients of level `<= i - D + 1`, so once levels `1..=l` are
//! fixed the coefficient `l + ord(f) - 1` of `f(phi)` is known and can be
//! tested before descending further.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::JetError;
use crate::poly::{MultiPoly, PrimeField, Ring};

struct Node {
    var: usize,
    parent: Option<usize>,
    deg: usize,
}

/// Immutable description of one counting problem.
pub(super) struct Problem {
    field: PrimeField,
    m: usize,
    n: usize,
    ord: usize,
    nodes: Vec<Node>,
    /// `(node, coefficient)` for each monomial of `f`.
    terms: Vec<(usize, u64)>,
    /// Only levels divisible by `step` may be nonzero.
    step: usize,
    target: u64,
}

impl Problem {
    /// `None` when the locus is trivially empty (`n < ord f` or `f = 0`).
    pub(super) fn new(f: &MultiPoly, n: usize, q: u64, step: usize, target: u64) -> Result<Option<Self>, JetError> {
        let field = PrimeField::new(q)?;
        let Some(ord) = f.mult_at_origin() else {
            return Ok(None);
        };
        if ord == 0 {
            return Err(JetError::NotVanishingAtOrigin);
        }
        if (ord as usize) > n {
            return Ok(None);
        }
        let m = f.num_vars();
        let mut nodes: Vec<Node> = Vec::new();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut terms = Vec::new();
        for (e, c) in f.terms() {
            let c = field
                .from_rational(c)
                .ok_or_else(|| JetError::Poly(crate::poly::PolyError::NonReducible(c.to_string())))?;
            if c == 0 {
                continue;
            }
            let node = intern(e, &mut nodes, &mut index);
            terms.push((node, c));
        }
        Ok(Some(Problem {
            field,
            m,
            n,
            ord: ord as usize,
            nodes,
            terms,
            step,
            target: target % q,
        }))
    }

    /// Deepest level that influences a checked coefficient.
    fn last_level(&self) -> usize {
        self.n + 1 - self.ord
    }

    /// Number of unconstrained levels above `last_level` that may be nonzero.
    fn free_levels(&self) -> usize {
        (self.last_level() + 1..=self.n).filter(|l| l % self.step == 0).count()
    }
}

fn intern(e: &[u32], nodes: &mut Vec<Node>, index: &mut HashMap<Vec<u32>, usize>) -> usize {
    if let Some(&i) = index.get(e) {
        return i;
    }
    let var = e.iter().rposition(|&k| k > 0).expect("nonconstant monomial");
    let deg: u32 = e.iter().sum();
    let parent = if deg == 1 {
        None
    } else {
        let mut p = e.to_vec();
        p[var] -= 1;
        Some(intern(&p, nodes, index))
    };
    nodes.push(Node {
        var,
        parent,
        deg: deg as usize,
    });
    index.insert(e.to_vec(), nodes.len() - 1);
    nodes.len() - 1
}

const FLUSH: u64 = 1 << 12;

struct Budget<'a> {
    used: &'a AtomicU64,
    abort: &'a AtomicBool,
    limit: u64,
    local: u64,
}

impl Budget<'_> {
    #[inline]
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local >= FLUSH {
            let total = self.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if total > self.limit {
                self.abort.store(true, Ordering::Relaxed);
            }
            return !self.abort.load(Ordering::Relaxed);
        }
        true
    }
}

/// Mutable DFS state: arc coefficients and node series coefficients.
struct Walker<'a> {
    p: &'a Problem,
    /// `arc[var * (n + 1) + level]`
    arc: Vec<u64>,
    /// `series[node * (n + 1) + i]`
    series: Vec<u64>,
}

impl<'a> Walker<'a> {
    fn new(p: &'a Problem) -> Self {
        Walker {
            p,
            arc: vec![0; p.m * (p.n + 1)],
            series: vec![0; p.nodes.len() * (p.n + 1)],
        }
    }

    /// Updates every node coefficient that becomes known at level `l`, then
    /// returns whether the newly determined coefficient of `f(phi)` is right.
    fn settle(&mut self, l: usize) -> bool {
        let p = self.p;
        let w = p.n + 1;
        let q = p.field.modulus();
        for (k, node) in p.nodes.iter().enumerate() {
            let idx = l + node.deg - 1;
            if idx > p.n {
                continue;
            }
            let arc = &self.arc[node.var * w..(node.var + 1) * w];
            let val = match node.parent {
                None => arc[l],
                Some(par) => {
                    let ps = &self.series[par * w..(par + 1) * w];
                    let mut acc = 0u64;
                    for a in 1..=l {
                        let x = arc[a];
                        if x != 0 {
                            acc = (acc + x * ps[idx - a]) % q;
                        }
                    }
                    acc
                }
            };
            self.series[k * w + idx] = val;
        }
        let i = l + p.ord - 1;
        let mut fi = 0u64;
        for &(node, c) in &p.terms {
            fi = (fi + c * self.series[node * w + i]) % q;
        }
        let want = if i < p.n { 0 } else { p.target };
        fi == want
    }

    fn set_level(&mut self, l: usize, mut code: u64) {
        let q = self.p.field.modulus();
        let w = self.p.n + 1;
        for v in 0..self.p.m {
            self.arc[v * w + l] = code % q;
            code /= q;
        }
    }

    fn choices(&self, l: usize) -> u64 {
        if l % self.p.step == 0 {
            self.p.field.modulus().pow(self.p.m as u32)
        } else {
            1
        }
    }

    fn dfs(&mut self, l: usize, budget: &mut Budget) -> Option<u128> {
        if l > self.p.last_level() {
            return Some(1);
        }
        let mut total = 0u128;
        for code in 0..self.choices(l) {
            if !budget.tick() {
                return None;
            }
            self.set_level(l, code);
            if self.settle(l) {
                total += self.dfs(l + 1, budget)?;
            }
        }
        Some(total)
    }
}

/// Counts arcs with the problem's support restriction, splitting the first
/// level across worker threads.
pub(super) fn run(p: &Problem, work_bound: u64) -> Result<u128, JetError> {
    let q = p.field.modulus() as u128;
    let used = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let first = Walker::new(p).choices(1);
    let partial: Option<u128> = (0..first)
        .into_par_iter()
        .map(|code| {
            let mut budget = Budget {
                used: &used,
                abort: &abort,
                limit: work_bound,
                local: 0,
            };
            let mut w = Walker::new(p);
            if !budget.tick() {
                return None;
            }
            w.set_level(1, code);
            let r = if w.settle(1) { w.dfs(2, &mut budget) } else { Some(0) };
            if used.fetch_add(budget.local, Ordering::Relaxed) + budget.local > work_bound {
                abort.store(true, Ordering::Relaxed);
            }
            r
        })
        .try_reduce(|| 0u128, |a, b| Some(a + b));
    if abort.load(Ordering::Relaxed) {
        return Err(JetError::WorkBoundExceeded(work_bound));
    }
    let core = partial.ok_or(JetError::WorkBoundExceeded(work_bound))?;
    let free = (p.m * p.free_levels()) as u32;
    let factor = q.checked_pow(free).ok_or(JetError::Overflow)?;
    core.checked_mul(factor).ok_or(JetError::Overflow)
}
