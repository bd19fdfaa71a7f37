//! Finite type invariants of Brunnian links through Milnor invariants.
//!
//! The crate builds pure-braid presentations of Brunnian string links,
//! computes their Milnor invariants through the Artin action and the Magnus
//! expansion, reduces labeled trees to the comb basis, evaluates Conway
//! coefficients by two independent algorithms and checks that degree-`2n`
//! invariants restrict to a quadratic form in the length-`n+1` invariants.

pub mod braid;
pub mod error;
pub mod freegroup;
pub mod generators;
pub mod magnus;
pub mod milnor;
pub mod pd;
pub mod polyinv;
pub mod perm;
pub mod quadratic;
pub mod treealg;

pub use braid::{BraidWord, BrunnianStatus, PureBraid, StringLinkPresentation};
pub use error::{Error, Result};
pub use freegroup::{FreeGroupEndo, FreeWord};
pub use magnus::NcPoly;
pub use pd::{PdCode, PdCrossing};
pub use perm::Permutation;
pub use polyinv::{ConwayPoly, InvariantFunctional};
pub use quadratic::{QuadraticFormMatrix, VerificationReport};
pub use treealg::{LabeledTree, SymSquareVector, TreeVector};
