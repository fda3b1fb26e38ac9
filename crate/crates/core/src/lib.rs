//! Exact combinatorial models for SL3 skein algebras of punctured surfaces
//! at roots of unity.
//!
//! The crate is organized around a fixed ideal triangulation of a punctured
//! surface. From the triangulation we build the Fock-Goncharov quiver and its
//! antisymmetric pairing matrix ([`surface`]), the Knutson-Tao cone of web
//! coordinates together with its train-track model ([`cone`]), quantum tori
//! over exact cyclotomic scalars with Frobenius and splitting maps
//! ([`qtorus`]), the associated-graded model of the skein algebra
//! ([`gradedskein`]), and the lattice-index computations behind the
//! rank-over-center formula ([`rank`]). Supporting machinery lives in
//! [`lattice`] (Smith/Hermite normal forms, congruence kernels, point
//! enumeration), [`chebyshev`] (SL3 trace polynomials), and [`ptrace`]
//! (the triangle quantum trace network).
//!
//! Everything is exact: integers are arbitrary precision where overflow is
//! possible, and root-of-unity scalars live in `Z[x]/Phi_{2M}(x)`. No
//! floating point is used anywhere.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization and the command
//! line front end live in the companion `skein-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod chebyshev;
pub mod cone;
pub mod cyclotomic;
pub mod gradedskein;
pub mod lattice;
pub mod ptrace;
pub mod qtorus;
pub mod rank;
pub mod rng;
pub mod surface;
