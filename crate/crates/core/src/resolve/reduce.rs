//! Squarefree part of a bivariate polynomial via primitive remainder
//! sequences in `Q[x][y]`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{MultiPoly, UniPoly};

/// Coefficients in `y` (index = degree), each a polynomial in `x`.
type YPoly = Vec<UniPoly>;

fn to_ypoly(f: &MultiPoly) -> YPoly {
    let deg = f.degree_in(1).unwrap_or(0) as usize;
    let mut cols: Vec<Vec<BigRational>> = vec![Vec::new(); deg + 1];
    for (e, c) in f.terms() {
        let col = &mut cols[e[1] as usize];
        let i = e[0] as usize;
        if col.len() <= i {
            col.resize(i + 1, BigRational::zero());
        }
        col[i] = c.clone();
    }
    trim(cols.into_iter().map(UniPoly::new).collect())
}

fn from_ypoly(p: &[UniPoly]) -> MultiPoly {
    let mut out = MultiPoly::zero(2);
    for (j, c) in p.iter().enumerate() {
        let col = MultiPoly::from_univariate(2, 0, c);
        out = &out + &(&col * &MultiPoly::monomial(vec![0, j as u32], BigRational::one()));
    }
    out
}

fn trim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(UniPoly::is_zero) {
        p.pop();
    }
    p
}

fn content(p: &[UniPoly]) -> UniPoly {
    p.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &[UniPoly]) -> YPoly {
    let c = content(p);
    p.iter().map(|a| a.exact_div(&c)).collect()
}

/// Pseudo-remainder of `a` by `b` (both nonzero in `y`).
fn prem(a: &[UniPoly], b: &[UniPoly]) -> YPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: YPoly = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: YPoly = r.iter().map(|c| c.mul(lb)).collect();
        for (j, bc) in b.iter().enumerate() {
            next[j + shift] = next[j + shift].sub(&bc.mul(&lr));
        }
        r = trim(next);
    }
    r
}

fn gcd(a: &[UniPoly], b: &[UniPoly]) -> YPoly {
    if a.is_empty() {
        return b.to_vec();
    }
    if b.is_empty() {
        return a.to_vec();
    }
    let c = content(a).gcd(&content(b));
    let (mut p, mut q) = (primitive(a), primitive(b));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        q = if r.is_empty() { r } else { primitive(&r) };
    }
    primitive(&p).iter().map(|x| x.mul(&c)).collect()
}

/// Exact quotient `a / b` in `Q[x][y]`.
fn exact_div(a: &[UniPoly], b: &[UniPoly]) -> YPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: YPoly = a.to_vec();
    let mut q: YPoly = vec![UniPoly::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let (t, rem) = r[dr].div_rem(lb);
        assert!(rem.is_zero(), "inexact bivariate division");
        let shift = dr - db;
        q[shift] = q[shift].add(&t);
        for (j, bc) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&bc.mul(&t));
        }
        r = trim(r);
    }
    assert!(r.is_empty(), "inexact bivariate division");
    trim(q)
}

/// `f / gcd(f, df/dx, df/dy)`: the product of the distinct irreducible
/// factors of `f`, up to a constant.
pub fn squarefree_part(f: &MultiPoly) -> MultiPoly {
    assert_eq!(f.num_vars(), 2);
    let fy = to_ypoly(f);
    let g = gcd(&gcd(&fy, &to_ypoly(&f.derivative(0))), &to_ypoly(&f.derivative(1)));
    from_ypoly(&exact_div(&fy, &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    fn same_up_to_scalar(a: &MultiPoly, b: &MultiPoly) -> bool {
        let (ea, ca) = a.terms().next().unwrap();
        let k = b.coeff(ea) / ca;
        !k.is_zero() && &a.scale(&k) == b
    }

    #[test]
    fn removes_repeated_factors() {
        for (f, r) in [
            ("x^2*y", "x*y"),
            ("x^2", "x"),
            ("y^3", "y"),
            ("(x^2+y^3)^2*(x-y)", "(x^2+y^3)*(x-y)"),
            ("x^2+y^3", "x^2+y^3"),
            ("(x*y+1)^2*x^3", "(x*y+1)*x"),
            ("(x+y)^2*(x-y)^3*(x+2*y)", "(x+y)*(x-y)*(x+2*y)"),
        ] {
            let got = squarefree_part(&p(f));
            assert!(same_up_to_scalar(&got, &p(r)), "{f}: got {got}");
        }
    }
}
