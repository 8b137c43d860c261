use arcmilnor::jets::*;
use arcmilnor::poly::{jet_compose, parse_poly, Jet, MultiPoly, PrimeField};
use num_bigint::BigInt;
use proptest::prelude::*;

fn opts() -> CountOptions {
    CountOptions::default()
}

fn poly(f: &str, vars: &[&str]) -> MultiPoly {
    parse_poly(f, vars).unwrap()
}

/// Walks every jet based at the origin with coefficients on the allowed
/// levels and tallies the `t^n` coefficient of `f(phi)` over the jets whose
/// lower coefficients vanish.
fn brute_force(f: &MultiPoly, n: usize, q: u64, step: usize) -> Vec<u128> {
    let field = PrimeField::new(q).unwrap();
    let m = f.num_vars();
    let levels: Vec<usize> = (1..=n).filter(|l| l % step == 0).collect();
    let slots = m * levels.len();
    let mut tally = vec![0u128; q as usize];
    for mut code in 0..q.pow(slots as u32) {
        let mut coeffs = vec![vec![0u64; n + 1]; m];
        for row in coeffs.iter_mut() {
            for &l in &levels {
                row[l] = code % q;
                code /= q;
            }
        }
        let s = jet_compose(&field, f, &Jet::new(coeffs).unwrap()).unwrap();
        if s.coeffs()[..n].iter().all(|c| *c == 0) {
            tally[s.coeffs()[n] as usize] += 1;
        }
    }
    tally
}

const SMALL: [(&str, &[&str]); 6] = [
    ("x^2+y^3", &["x", "y"]),
    ("x*y", &["x", "y"]),
    ("x^3+y^3", &["x", "y"]),
    ("x", &["x"]),
    ("x^2", &["x"]),
    ("x^2*y-y^2", &["x", "y"]),
];

#[test]
fn dfs_agrees_with_full_enumeration() {
    for (f, vars) in SMALL {
        let p = poly(f, vars);
        for q in [2u64, 3, 5] {
            for n in 1..=3usize {
                if p.num_vars() * n > 6 && q == 5 {
                    continue;
                }
                let tally = brute_force(&p, n, q, 1);
                for target in 1..q {
                    assert_eq!(
                        count_fiber(&p, n as u64, q, target, &opts()).unwrap(),
                        tally[target as usize],
                        "{f} n={n} q={q} target={target}"
                    );
                }
            }
        }
    }
}

#[test]
fn closed_form_counts() {
    let cusp = poly("x^2+y^3", &["x", "y"]);
    for q in [3u64, 5, 7, 11, 13] {
        assert_eq!(count_points_xn1(&cusp, 2, q, &opts()).unwrap(), 2 * (q as u128).pow(3));
    }
    let node = poly("x*y", &["x", "y"]);
    for q in [3u64, 5, 7] {
        assert_eq!(count_points_xn1(&node, 2, q, &opts()).unwrap(), (q as u128 - 1) * (q as u128).pow(2));
    }
    let cube = poly("x^3", &["x"]);
    assert_eq!(count_points_xn1(&cube, 3, 7, &opts()).unwrap(), 147);
    assert_eq!(count_points_xn1(&cube, 2, 7, &opts()).unwrap(), 0);
}

#[test]
fn fixed_locus_examples() {
    let cusp = poly("x^2+y^3", &["x", "y"]);
    assert_eq!(count_fixed_locus(&cusp, 2, 1, 7, &opts()).unwrap(), 0);
    assert_eq!(count_fixed_locus(&cusp, 6, 2, 7, &opts()).unwrap(), 2 * 7u128.pow(3));
    assert_eq!(count_fixed_locus(&cusp, 6, 3, 7, &opts()).unwrap(), count_points_xn1(&cusp, 3, 7, &opts()).unwrap());
    assert!(matches!(count_fixed_locus(&cusp, 6, 2, 11, &opts()), Err(JetError::NotAdmissible { .. })));
    let tally = brute_force(&cusp, 4, 5, 2);
    assert_eq!(count_fixed_locus(&cusp, 4, 2, 5, &opts()).unwrap(), tally[1]);
}

#[test]
fn errors_and_bounds() {
    let cusp = poly("x^2+y^3", &["x", "y"]);
    assert!(matches!(
        count_points_xn1(&cusp, 6, 13, &CountOptions { work_bound: 100 }),
        Err(JetError::WorkBoundExceeded(100))
    ));
    assert!(matches!(
        count_points_xn1(&poly("x+1", &["x", "y"]), 2, 3, &opts()),
        Err(JetError::NotVanishingAtOrigin)
    ));
    assert!(count_points_xn1(&cusp, 2, 4, &opts()).is_err());
    assert!(count_points_xn1(&cusp, 0, 5, &opts()).is_err());
    assert!(count_fiber(&cusp, 2, 5, 5, &opts()).is_err());
    // n below the multiplicity: empty
    assert_eq!(count_points_xn1(&cusp, 1, 5, &opts()).unwrap(), 0);
}

#[test]
fn interpolation_recovers_euler_characteristics() {
    let problem = CountProblem {
        germ: "x^2+y^3".into(),
        n: 2,
        d: None,
    };
    let mut t = CountTable::new(problem.clone(), 3);
    for q in [3u64, 5, 7, 11] {
        t.push(q, 2 * (q as u128).pow(3)).unwrap();
    }
    let fit = interpolate_euler(&t).unwrap();
    assert_eq!(fit.chi, BigInt::from(2));
    assert_eq!(fit.render(), "2*q^3");

    let mut short = CountTable::new(problem.clone(), 3);
    short.push(3, 54).unwrap();
    assert!(matches!(interpolate_euler(&short), Err(JetError::Interpolation(_))));

    let mut noisy = CountTable::new(problem, 1);
    for (q, c) in [(3u64, 9u128), (5, 25), (7, 50)] {
        noisy.push(q, c).unwrap();
    }
    assert!(matches!(interpolate_euler(&noisy), Err(JetError::Interpolation(_))));
}

fn germ_text() -> impl Strategy<Value = String> {
    prop_oneof![
        (2u32..=4, 2u32..=4).prop_map(|(a, b)| format!("x^{a}+y^{b}")),
        (1u32..=3, 1u32..=3).prop_map(|(a, b)| format!("x^{a}*y^{b}")),
        (2u32..=3, 1i32..=2).prop_map(|(a, c)| format!("x^{a}-{c}*x*y^2+y^4")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fixed_locus_is_a_smaller_jet_space(f in germ_text(), g in 1u64..=3, e in 1u64..=2) {
        let p = poly(&f, &["x", "y"]);
        let n = g * e;
        let q = [7u64, 13].into_iter().find(|q| (q - 1) % n == 0).unwrap();
        // d with gcd(n, d) = g
        prop_assert_eq!(
            count_fixed_locus(&p, n, g, q, &opts()).unwrap(),
            count_points_xn1(&p, g, q, &opts()).unwrap()
        );
    }

    #[test]
    fn linear_changes_preserve_counts(f in germ_text(), n in 1u64..=3, q in prop::sample::select(vec![3u64, 5])) {
        let p = poly(&f, &["x", "y"]);
        let swapped = poly(&f, &["y", "x"]);
        let sheared = poly(&f.replace('x', "(x+y)"), &["x", "y"]);
        let base = count_points_xn1(&p, n, q, &opts()).unwrap();
        prop_assert_eq!(count_points_xn1(&swapped, n, q, &opts()).unwrap(), base);
        prop_assert_eq!(count_points_xn1(&sheared, n, q, &opts()).unwrap(), base);
    }

    #[test]
    fn rescaling_the_parameter_permutes_fibers(f in germ_text(), n in 2u64..=3, a in 2u64..=6) {
        let p = poly(&f, &["x", "y"]);
        let q = 7u64;
        let an = (1..=n).fold(1u64, |acc, _| acc * a % q);
        prop_assert_eq!(
            count_fiber(&p, n, q, an, &opts()).unwrap(),
            count_fiber(&p, n, q, 1, &opts()).unwrap()
        );
    }

    #[test]
    fn fibers_over_all_values_partition_the_order_locus(f in germ_text(), n in 1usize..=2, q in prop::sample::select(vec![2u64, 3])) {
        let p = poly(&f, &["x", "y"]);
        let tally = brute_force(&p, n, q, 1);
        let dfs: u128 = (1..q).map(|c| count_fiber(&p, n as u64, q, c, &opts()).unwrap()).sum();
        prop_assert_eq!(dfs, tally[1..].iter().sum::<u128>());
    }
}
