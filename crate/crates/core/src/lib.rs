//! Intuitionistic propositional and higher-order typed languages for
//! physical systems, with Heyting-valued and topos-valued representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`heyting`]: finite bounded lattices and Heyting algebras.
//! * [`category`]: finite posets, small categories and sieves.
//! * [`presheaf`]: the topos of presheaves on a finite category.
//! * [`pl`]: the propositional language, its proof checker, decision
//!   procedure and representations.
//! * [`ls`]: the typed higher-order local language.
//! * [`rep`]: representations of the local language in a presheaf topos.

pub mod bits;
pub mod category;
pub mod error;
pub mod heyting;
pub mod ls;
pub mod pl;
pub mod presheaf;
pub mod rep;

pub use error::{Error, Result};

/// Size caps shared by every enumeration in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier a lattice may be built on.
    pub carrier: usize,
    /// Largest family produced by sieve, lower-set or sub-object enumeration.
    pub sieves: usize,
    /// Largest number of elements a presheaf stage may have.
    pub stage: usize,
    /// Largest number of search nodes in an arrow enumeration.
    pub search: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            carrier: 4096,
            sieves: 1 << 20,
            stage: 1 << 16,
            search: 1 << 24,
        }
    }
}
