//! Koszul duals of linear quivers with relations, as strictly unital
//! A∞-categories on explicit bases.

pub mod ainf;
pub mod combinatorics;
pub mod diagram;
pub mod dual;
pub mod ext;
pub mod linalg;
pub mod pattern;
pub mod service;

pub use ainf::{CategoryBuilder, GradedBasisCategory, MorphismId, ObjectId, SignedTerm};
pub use combinatorics::{
    ext_sequence, ext_sequence_dual, ExtIndexSequence, ExtendedVertex, SequenceTable,
};
pub use dual::{build_dual, DualCategory, SignConvention};
pub use pattern::{normalize, Relation, RelationPattern};
