//! Divisors of finitely generated modules over polynomial rings: Fitting
//! ideals, the order determinant, norm representatives, generic Bourbaki
//! ideals, and Rees-algebra invariants, all over exact coefficient fields.
//!
//! ```
//! use divmod::divisors::det0;
//! use divmod::presmod::EmbeddedModule;
//! use divmod::ring::{parse_poly, MonomialOrder, PolyMatrix, Ring};
//! use divmod::Rational;
//!
//! let r = Ring::new(["x", "y"], MonomialOrder::Grevlex);
//! let p = |s: &str| parse_poly::<Rational>(s, &r).unwrap();
//! let a = PolyMatrix::from_rows(&r, vec![vec![p("x"), p("y"), p("0")], vec![p("0"), p("0"), p("1")]]);
//! let d = det0(&EmbeddedModule::new(a)).unwrap();
//! assert_eq!(d.to_strings().unwrap(), ["x", "y"]);
//! ```

pub mod bourbaki;
pub mod corpus;
pub mod divisors;
pub mod error;
pub mod groebner;
pub mod job;
pub mod presmod;
pub mod rees;
pub mod ring;

pub use error::{Error, Result};
pub use groebner::{Ideal, Submodule};
pub use presmod::{EmbeddedModule, PresentedModule};
pub use ring::{Field, Fp, MonomialOrder, PolyMatrix, Polynomial, Rational, Ring, F32003};

pub type QPoly = Polynomial<Rational>;
pub type QIdeal = Ideal<Rational>;
pub type QMatrix = PolyMatrix<Rational>;
pub type QModule = EmbeddedModule<Rational>;
pub type FpPoly = Polynomial<F32003>;
pub type FpIdeal = Ideal<F32003>;
pub type FpMatrix = PolyMatrix<F32003>;
pub type FpModule = EmbeddedModule<F32003>;
