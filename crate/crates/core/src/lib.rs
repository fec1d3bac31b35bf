//! Algebraic identifiers: elements of the unitriangular matrix group
//! UT(4, p) used as predictable identifiers for multi-step, multi-valued
//! data processing.
//!
//! Identifiers combine with the group product, so the identity of a
//! pipeline's outcome is known before anything runs. Original values hash
//! into a commuting subgroup, functions into the order-sensitive remainder.

pub mod analysis;
pub mod codec;
pub mod error;
pub mod gen;
pub mod group;
pub mod plan;
pub mod store;
pub mod workflow;

pub use codec::{
    decode, encode, import_legacy, key_element, reserved, Digest, ImportMode, LegacyBase, Reserved,
};
pub use error::{Error, Result};
pub use gen::{gen_function_element, gen_value_element, ContentHash};
pub use group::{ElementClass, GroupParams, UtElement, Version};
pub use plan::{PlanFile, PlanReport, PlanStep};
pub use store::Store;
