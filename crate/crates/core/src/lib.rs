//! Comparison invariants of finite rings.
//!
//! The crate decides matrix subequivalence `a ≼₁ b` over finite rings, builds
//! truncated models of the ordered monoids `W(R)` and `V(R)`, works with
//! interval completions and Cu-type axioms, computes state polytopes in exact
//! arithmetic, and models the sequence semigroup `S(R)` together with its
//! bridge to idempotent column matrices.

pub mod cu;
pub mod dot;
pub mod error;
pub mod matrix;
pub mod ring;
pub mod seq;
pub mod shift;
pub mod states;
pub mod subequiv;
pub mod uniserial;
pub mod verdict;
pub mod wr;

pub use error::{Error, Result};
pub use matrix::{Idem, Mat};
pub use ring::{Elem, FiniteRing, Ring, RingSpec};
pub use verdict::{Certificate, Decision, Verdict};
