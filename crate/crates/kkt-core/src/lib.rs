//! Exact combinatorial machinery for splitting formulas of the
//! Kontsevich-Kuperberg-Thurston invariant of rational homology spheres.
//!
//! The crate provides:
//!
//! * [`diagram`] — Jacobi diagrams (trivalent multigraphs without simple
//!   loops, with vertex orientations), canonical forms, enumeration and
//!   automorphism counting;
//! * [`algebra`] — the quotient space `A_n(∅)` of diagrams modulo the AS and
//!   IHX relations, with exact rational basis computation;
//! * [`clover`] — combinatorial data of rational generalised clovers
//!   (trilinear intersection forms plus cross-linking matrices);
//! * [`splitting`] — the contraction `ℓ(D;Γ;σ)`, its sum `ℓ(D;Γ)` over
//!   vertex assignments, and the degree-`n` splitting value `Z_n(D)`;
//! * [`casson`] — the degree-one specialization and Walker-normalization
//!   conversions;
//! * [`linkform`] — classification of nondegenerate `Q/Z`-valued linking
//!   forms on finite abelian groups;
//! * [`lens`] — realization of rational symmetric matrices as linking
//!   matrices of framed links in connected sums of lens spaces;
//! * [`files`] — the input file formats consumed by the `kkt` CLI.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod algebra;
pub mod casson;
pub mod clover;
pub mod diagram;
pub mod error;
pub mod files;
pub mod intmat;
pub mod lens;
pub mod linkform;
pub mod modular;
pub mod rat;
pub mod splitting;

pub use error::Error;
pub use rat::Rational;
