//! Reaction networks, generalized mass-action systems and the search for
//! weakly reversible split translations.

pub mod dynamics;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod network;
pub mod parse;
pub mod translation;

pub use graph::{analyze, analyze_network, StructuralReport};
pub use network::{Complex, GeneralizedNetwork, MultiGraph, ReactionNetwork};
pub use parse::{parse_generalized, parse_network, ParseError, ParseErrorKind};
