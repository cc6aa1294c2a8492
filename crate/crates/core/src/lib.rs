//! Symbolic Gysin push-forwards along flag bundles of types A, B, C and D.
//!
//! The engine models the base Chow ring by a truncated graded polynomial
//! ring with exact integer coefficients ([`ring`]), lifts integrands to
//! Laurent polynomials in auxiliary variables ([`laurent`], [`expr`]),
//! and evaluates push-forwards as single coefficient extractions against
//! universal kernel polynomials and Segre series ([`flag`]). Determinantal
//! fast paths in Schur classes live in [`schur`], and independent
//! verification machinery (fixed-point localization, brute-force
//! extraction, classical degrees) in [`oracle`].
//!
//! The degree of `G(2, 4)`, computed as the integral of the fourth power
//! of the hyperplane-like sum of Chern roots over a point:
//!
//! ```
//! use gysin_core::flag::{push, Family, FlagSpec, PushOptions};
//! use gysin_core::laurent::LaurentPoly;
//! use gysin_core::ring::{RingDescriptor, RingElement};
//! use gysin_core::bundle::VectorBundleData;
//!
//! let point = RingDescriptor::new(vec![], 0).unwrap();
//! let bundle = VectorBundleData::trivial("E", 4);
//! let spec = FlagSpec::new(point.clone(), Family::A, bundle, None, vec![2]).unwrap();
//! let t1 = LaurentPoly::variable(&point, 2, 0);
//! let t2 = LaurentPoly::variable(&point, 2, 1);
//! let degree = push(&spec, &(&t1 + &t2).pow(4), &PushOptions::default()).unwrap();
//! assert_eq!(degree, RingElement::constant(&point, 2));
//! ```

pub mod bundle;
mod det;
pub mod expr;
pub mod flag;
pub mod laurent;
pub mod oracle;
pub mod ring;
pub mod sample;
pub mod schur;
pub mod verify;

pub use bundle::{LineBundleClass, SegreTable, VectorBundleData};
pub use flag::{Family, FlagSpec, PushOptions, Variant};
pub use laurent::LaurentPoly;
pub use ring::{RingDescriptor, RingElement};
