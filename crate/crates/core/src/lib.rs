//! Exact computations with neighbourhood stabilisers of groups acting on the
//! Cantor space of infinite words.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`symbolic`]: words, cylinders and eventually periodic boundary points;
//! * [`elements`]: three computable families of homeomorphisms (tree
//!   automorphisms given by wreath recursion, prefix-exchange bijections and
//!   elements of the topological full group of the binary odometer);
//! * [`family`]: named groups with generators, rigid-stabiliser oracles and
//!   point classifiers, including the Grigorchuk, odometer and Thompson `V`
//!   presets;
//! * [`engine`]: stabilisers, neighbourhood stabilisers and germ classes;
//! * [`search`]: orbit certificates, minimality witnesses, rigid-stabiliser
//!   discovery and transporter search;
//! * [`conjugator`]: finite certificates for the limit homeomorphism that
//!   conjugates the neighbourhood stabiliser of one point onto another.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod conjugator;
pub mod elements;
pub mod engine;
mod error;
pub mod family;
pub mod search;
pub mod symbolic;
mod ternary;

pub use error::{Error, Result};
pub use ternary::Ternary;

pub use conjugator::{Budgets, ConjugatorCertificate, Stage};
pub use elements::{FullGroupTable, GroupElement, PrefixBijection, TreeElement, WreathTable};
pub use engine::GermVerdict;
pub use family::GroupFamily;
pub use search::SearchBudget;
pub use symbolic::{Alphabet, BoundaryPoint, Cylinder, CylinderRelation, DepthSchedule, Word};
