//! Exact polymatroid toolkit for deriving and checking entropy inequalities.
//!
//! Rank vectors and inequalities are kept in exact rationals. The polyhedral
//! side offers a rational simplex with Farkas certificates and a double
//! description ray enumerator; the derivation side builds constraint systems
//! for copy steps, maximum-entropy instances and Ahlswede-Körner gadgets.
//! Distributions live in floating point in [`dist`].

pub mod catalog;
pub mod cone;
pub mod derive;
pub mod dist;
pub mod error;
pub mod expr;
pub mod functional;
pub mod ground;
pub mod linear;
pub mod lp;
pub mod num;
pub mod ops;
pub mod perm;
pub mod poly;
pub mod shannon;
pub mod text;

pub use error::{Error, Result};
pub use expr::{InfoExpr, Term};
pub use functional::LinearFunctional;
pub use ground::{GroundSet, Subset};
pub use num::Rational;
pub use perm::{PartialPermutation, Permutation};
pub use poly::{Polymatroid, SetFunction};
pub use shannon::ShannonInstance;
