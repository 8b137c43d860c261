use arcmilnor::poly::parse_poly;
use arcmilnor::resolve::{
    load_resolution, resolve_germ, resolve_plane_curve, resolve_with, Chart, ResolutionData, ResolveError,
    ResolveOptions,
};
use num_rational::BigRational;

fn resolve(f: &str) -> ResolutionData {
    resolve_plane_curve(&parse_poly(f, &["x", "y"]).unwrap(), 20).unwrap()
}

fn triples(r: &ResolutionData) -> Vec<(u64, u64, i64)> {
    r.divisors.iter().map(|d| (d.n, d.nu, d.chi_open)).collect()
}

fn stratum_m(r: &ResolutionData, ids: &[u32]) -> Option<u64> {
    r.strata.iter().find(|s| s.ids == ids).map(|s| s.m)
}

#[test]
fn cusp() {
    let r = resolve("x^2+y^3");
    assert_eq!(triples(&r), vec![(2, 2, 1), (3, 3, 1), (6, 5, -1)]);
    assert_eq!(r.divisors[0].adjacent, vec![3]);
    assert_eq!(r.divisors[1].adjacent, vec![3]);
    assert_eq!(r.divisors[2].adjacent, vec![1, 2]);
    assert_eq!(r.divisors[2].strict_contacts, 1);
    assert_eq!(stratum_m(&r, &[1, 3]), Some(2));
    assert_eq!(stratum_m(&r, &[2, 3]), Some(3));
}

#[test]
fn node() {
    let r = resolve("x*y");
    assert_eq!(triples(&r), vec![(2, 2, 0)]);
    assert_eq!(r.divisors[0].strict_contacts, 2);
}

#[test]
fn three_lines() {
    let r = resolve("x^3+y^3");
    assert_eq!(triples(&r), vec![(3, 2, -1)]);
    assert_eq!(r.divisors[0].strict_contacts, 3);
    // one rational crossing and one conjugate pair
    let contacts: Vec<usize> = r
        .charts()
        .iter()
        .filter_map(|c| match c {
            Chart::Contact { roots, .. } => roots.degree(),
            _ => None,
        })
        .collect();
    let mut sorted = contacts.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 2]);
}

#[test]
fn smooth_germ() {
    let r = resolve("x");
    assert_eq!(triples(&r), vec![(1, 2, 1)]);
    assert_eq!(r.divisors[0].strict_contacts, 1);
}

#[test]
fn conjugate_tangents_are_counted_not_blown_up() {
    let r = resolve("x^2+y^2");
    assert_eq!(triples(&r), vec![(2, 2, 0)]);
    assert_eq!(r.divisors[0].strict_contacts, 2);
}

#[test]
fn non_reduced_germ() {
    // strict transform of the reduced curve x*y; N sees the doubled branch
    let r = resolve("x^2*y");
    assert_eq!(triples(&r), vec![(3, 2, 0)]);
    let branches: Vec<u64> = r
        .charts()
        .iter()
        .filter_map(|c| match c {
            Chart::Contact { branch_n, .. } => Some(*branch_n),
            _ => None,
        })
        .collect();
    let mut b = branches.clone();
    b.sort();
    assert_eq!(b, vec![1, 2]);
}

#[test]
fn higher_cusps_resolve() {
    for (f, last) in [("x^2+y^5", (10, 7, -1)), ("x^3+y^4", (12, 7, -1)), ("y^2-x^3-x^2", (2, 2, 0))] {
        let r = resolve(f);
        let d = r.divisors.last().unwrap();
        assert_eq!((d.n, d.nu, d.chi_open), last, "{f}");
        assert_eq!(r.divisors.iter().map(|d| d.chi_open).sum::<i64>() + r.pair_points() as i64
            + r.contact_points() as i64, 1 + r.divisors.len() as i64);
    }
}

#[test]
fn errors() {
    let p = |s: &str| parse_poly(s, &["x", "y"]).unwrap();
    assert_eq!(resolve_plane_curve(&p("x+1"), 5), Err(ResolveError::NotVanishingAtOrigin));
    assert_eq!(resolve_plane_curve(&p("0"), 5), Err(ResolveError::ZeroPolynomial));
    assert_eq!(resolve_plane_curve(&p("x^2+y^3"), 2), Err(ResolveError::MaxBlowupsExceeded(2)));
    // (x^2 - 2 y^2)^2 + y^5: the two tangent directions are conjugate and need further blowups
    assert!(matches!(
        resolve_plane_curve(&p("(x^2-2*y^2)^2+y^5"), 20),
        Err(ResolveError::NonRationalCenter(_))
    ));
    let one = parse_poly("x", &["x"]).unwrap();
    assert_eq!(resolve_plane_curve(&one, 5), Err(ResolveError::UnsupportedDimension(1)));
}

#[test]
fn one_variable_germs() {
    let r = resolve_germ(&parse_poly("x^3", &["x"]).unwrap(), 0).unwrap();
    assert_eq!(r.ambient_dim, 1);
    assert_eq!(triples(&r), vec![(3, 1, 1)]);
    assert_eq!(stratum_m(&r, &[1]), Some(3));
}

#[test]
fn extra_blowup_at_free_point() {
    let mut opts = ResolveOptions::new(20);
    opts.extra_centers.push((3, BigRational::from_integer(1.into())));
    let r = resolve_with(&parse_poly("x^2+y^3", &["x", "y"]).unwrap(), &opts).unwrap();
    assert_eq!(triples(&r), vec![(2, 2, 1), (3, 3, 1), (6, 5, -2), (6, 6, 1)]);
    assert_eq!(stratum_m(&r, &[3, 4]), Some(6));
    opts.extra_centers = vec![(3, BigRational::from_integer(0.into()))];
    assert!(matches!(
        resolve_with(&parse_poly("x^2+y^3", &["x", "y"]).unwrap(), &opts),
        Err(ResolveError::InvalidExtraCenter { .. })
    ));
}

#[test]
fn json_roundtrip_and_validation() {
    let r = resolve("x^2+y^3");
    let text = r.to_json();
    assert_eq!(load_resolution(text.as_bytes()).unwrap(), r);

    let bad = text.replacen("\"m\": 2", "\"m\": 4", 1);
    let err = load_resolution(bad.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("m_I mismatch"), "{err}");
    assert!(err.starts_with("strata["), "{err}");

    let smooth = r#"{"ambient_dim": 2,
        "divisors": [{"id": 1, "N": 1, "nu": 2, "chi_open": 1, "adjacent": [], "strict_contacts": 1}],
        "strata": [{"ids": [1], "chi_open": 1, "m": 1}]}"#;
    let s = load_resolution(smooth.as_bytes()).unwrap();
    assert!(s.charts.is_none());

    let asym = r#"{"ambient_dim": 2,
        "divisors": [{"id": 1, "N": 2, "nu": 2, "chi_open": 1, "adjacent": [2], "strict_contacts": 0},
                     {"id": 2, "N": 2, "nu": 3, "chi_open": 2, "adjacent": [], "strict_contacts": 0}],
        "strata": []}"#;
    let err = load_resolution(asym.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("divisors[0].adjacent") && err.contains("symmetric"), "{err}");

    let wrong_chi = smooth.replace("\"chi_open\": 1, \"adjacent\"", "\"chi_open\": 2, \"adjacent\"");
    let err = load_resolution(wrong_chi.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("chi_open"), "{err}");

    let junk = load_resolution(b"{\"ambient_dim\": 2}").unwrap_err();
    assert!(matches!(junk, ResolveError::Schema(_)));
}
