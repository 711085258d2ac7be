//! Free monads on projective space over `Q` and `F_p`: graded polynomial
//! matrices, exact linear algebra, Hilbert polynomials, duality of monads,
//! their automorphism groups, and a `P^3` family of sheaves with Hilbert
//! polynomial `3m + 1`.
#![no_std]
extern crate alloc;

pub mod autgroup;
pub mod catalog;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod modp3;
pub mod monad;
pub mod polymat;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use hilbert::{bott_h, euler_poly, interpolate, line_bundle_hilb, IntPoly};
pub use linalg::DenseMatrix;
pub use monad::{beilinson_shape, dual_beilinson_table, CohTable, Monad, Violation};
pub use polymat::{monomial_basis, FreeSheaf, GradedMatrix, HomogPoly, Monomial};
pub use scalar::{Field, FieldElement};
