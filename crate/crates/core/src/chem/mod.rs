//! SMILES parsing, canonicalization and UNIFAC group assignment.

mod canon;
mod groups;
mod smiles;

pub use canon::{canonicalize, write_with_ranks};
pub use groups::{decompose_groups, pattern_atom_count, DecompositionError};
pub use smiles::{
    parse_smiles, Atom, Bond, BondOrder, Element, MolecularGraph, ParseError, ParseErrorKind,
    ParsedSmiles, SmilesWarning,
};

/// Parses and canonicalizes in one step.
pub fn canonical_smiles(s: &str) -> Result<String, ParseError> {
    parse_smiles(s).map(|p| canonicalize(&p.graph))
}
