//! Algebra constructors and the JSON interchange format.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, Automorphism, Grading};
use crate::frobenius::FrobeniusData;

pub mod dnr;
pub mod file;
pub mod small;

pub use dnr::{build_dnr, Dnr};
pub use file::{load_algebra, parse_algebra, save_algebra, to_json};
pub use small::{nakayama_cycle, truncated_poly};

/// An algebra with its optional attached structure.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub alg: Arc<Algebra>,
    pub frobenius: Option<FrobeniusData>,
    pub automorphisms: BTreeMap<String, Automorphism>,
    pub gradings: BTreeMap<String, Grading>,
}

impl Bundle {
    pub fn bare(alg: Arc<Algebra>) -> Self {
        Bundle { alg, frobenius: None, automorphisms: BTreeMap::new(), gradings: BTreeMap::new() }
    }
}
