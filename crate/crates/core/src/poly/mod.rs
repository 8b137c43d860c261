//! Exact polynomial arithmetic, truncated arcs and the polynomial parser.

mod multipoly;
mod parse;
pub mod ring;
mod series;
mod univariate;

use thiserror::Error;

pub use multipoly::{default_var_names, Exponents, MultiPoly};
pub use parse::parse_poly;
pub use ring::{PrimeField, Rationals, Ring};
pub use series::{jet_compose, Jet, TruncSeries};
pub use univariate::{ModPoly, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("at least one variable name is required")]
    NoVariables,
    #[error("invalid or duplicate variable name '{0}'")]
    BadVariableName(String),
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error("coefficient {0} has no image in the coefficient ring")]
    NonReducible(String),
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("a jet needs at least one coordinate with at least one coefficient")]
    EmptyJet,
    #[error("jet coordinates have different orders")]
    RaggedJet,
}

#[cfg(test)]
mod props {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn small_poly(nv: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0u32..4, nv), -5i64..6), 0..5).prop_map(move |ts| {
            MultiPoly::from_terms(
                nv,
                ts.into_iter().map(|(e, c)| (e, BigRational::from_integer(c.into()))),
            )
            .unwrap()
        })
    }

    fn fq_jet(nv: usize, order: usize, p: u64) -> impl Strategy<Value = Jet<u64>> {
        prop::collection::vec(prop::collection::vec(0..p, order + 1), nv)
            .prop_map(|c| Jet::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn compose_is_a_ring_map(f in small_poly(2), g in small_poly(2), jet in fq_jet(2, 4, 7)) {
            let fq = PrimeField::new(7).unwrap();
            let fg = jet_compose(&fq, &(&f * &g), &jet).unwrap();
            let prod = jet_compose(&fq, &f, &jet).unwrap().mul(&fq, &jet_compose(&fq, &g, &jet).unwrap());
            prop_assert_eq!(fg, prod);
            let sum = jet_compose(&fq, &(&f + &g), &jet).unwrap();
            let parts = jet_compose(&fq, &f, &jet).unwrap().add(&fq, &jet_compose(&fq, &g, &jet).unwrap());
            prop_assert_eq!(sum, parts);
        }

        #[test]
        fn compose_respects_truncation(f in small_poly(2), jet in fq_jet(2, 5, 5), cut in 0usize..5) {
            let fq = PrimeField::new(5).unwrap();
            let full = jet_compose(&fq, &f, &jet).unwrap();
            let low = jet_compose(&fq, &f, &jet.truncate(cut)).unwrap();
            prop_assert_eq!(full.truncate(cut), low);
        }

        #[test]
        fn multiplicity_detects_vanishing(f in small_poly(2)) {
            let origin = [BigRational::from_integer(0.into()), BigRational::from_integer(0.into())];
            match f.mult_at_point(&origin) {
                None => prop_assert!(f.is_zero()),
                Some(m) => prop_assert_eq!(m >= 1, f.constant_term() == BigRational::from_integer(0.into())),
            }
        }

        #[test]
        fn print_parse_idempotent(f in small_poly(2)) {
            let s = f.to_string_with(&["x", "y"]);
            let back = parse_poly(&s, &["x", "y"]).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_string_with(&["x", "y"]), s);
        }
    }
}
