//! Crystals, Weyl group actions and linkage on higher level Fock spaces.

pub mod campaign;
pub mod conditions;
pub mod crystal;
pub mod error;
pub mod hierarchy;
pub mod k0;
pub mod multipartition;
pub mod order;
pub mod virtual_mp;
pub mod weyl;

pub use error::{FockError, Result};
pub use multipartition::{Cell, Multicharge, Multipartition, Partition};
