//! Exact computation of Hironaka characteristic polyhedra, blow-ups of affine charts and the
//! three-part CJS resolution invariant ι = (ι₀, ι_c, ι_poly) for surface singularities.
//!
//! The core is generic over the coefficient field [`Field`]; the aliases below name the
//! instantiations used in practice.

pub mod error;
pub mod exact_algebra;
pub mod local_frame;
pub mod char_polyhedron;
pub mod blowup_engine;
pub mod invariant;
pub mod cjs_driver;

pub use error::{Error, Result};
pub use char_polyhedron::{FPolyhedron, Point};
pub use exact_algebra::{Field, Fp, Fpt, Gf, Polynomial, QInf, Q};

/// Polynomials over ℚ.
pub type QPoly = Polynomial<Q>;
/// Polynomials over a prime field 𝔽p.
pub type FpPoly = Polynomial<Fp>;
/// Polynomials over the rational function field 𝔽p(t).
pub type FptPoly = Polynomial<Fpt>;
/// Polynomials over a finite extension 𝔽p[a]/(m).
pub type GfPoly = Polynomial<Gf>;
