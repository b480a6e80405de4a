//! Built-in counting families bundling a defining sentence (where one
//! exists), an independent oracle, and machine-checkable facts used as test
//! targets.

mod entries;
pub mod formulas;
pub mod oracles;
mod verify;

pub use entries::{
    chebyshev_rec, fibonacci_poly_rec, get_entry, list_entries, CatalogEntry, CatalogError,
    EntryKind, EntryMeta, Fact, Oracle,
};
pub use verify::{entry_residues, touchard_polynomial, verify_entry, LaneReport, VerifyReport};
