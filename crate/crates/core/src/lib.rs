//! Exact computation with symplectic modular symbols over euclidean rings of
//! integers.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`]: the rings `Z`, `Z[i]`, `Z[w]` and their fraction fields.
//! * [`linalg`]: exact matrices, determinants, Smith form, lattice index.
//! * [`symplectic`]: the standard alternating form, `Sp_{2n}` membership,
//!   depth and the symplectic Hermite form.
//! * [`symbol`]: symbols, their normalisation rules and the rank-two base case.
//! * [`subdivision`]: candidates and the subdivision relation.
//! * [`reduction`]: the full reduction to unimodular symbols.
//! * [`building`]: expansion of symbols into chamber chains, used as the
//!   correctness oracle for everything above.
//! * [`random`] and [`json`]: seeded instance generation and the wire format.

pub mod building;
pub mod error;
pub mod json;
pub mod linalg;
pub mod random;
pub mod reduction;
pub mod ring;
pub mod subdivision;
pub mod symbol;
pub mod symplectic;

pub use error::{Error, Result};
pub use linalg::{Lattice, Matrix, Vector};
pub use ring::{FieldElement, RingElement, RingId};
pub use symbol::{SignedRelation, Sl2Symbol, SymplecticSymbol};

pub use symplectic::{IndexName, IsotropicIndexSet, SymplecticSpace};
