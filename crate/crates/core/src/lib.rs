// SPDX-License-Identifier: Apache-2.0

//! p-primary structure of even K-groups of `Z` and of rings of integers of
//! quadratic fields, via class groups and via zeta values at negative
//! integers.

pub mod abgroup;
pub mod arith;
pub mod cohomlab;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod krank;
pub mod kummer;
pub mod lattice;
pub mod qforms;
pub mod zeta;

pub use abgroup::{ActedGroup, CharacterValue, FinAbGroup, GroupRingElt};
pub use arith::{ExactRational, ModUnit};
pub use cyclo::{CycloProfile, Level};
pub use error::{Error, Result};
pub use field::{Field, QuadFieldData, Splitting};
pub use krank::{ClassData, RankReport};
pub use kummer::KummerVerdict;
pub use qforms::QuadForm;
