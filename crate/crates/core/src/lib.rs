pub mod blowup;
pub mod cli;
pub mod error;
pub mod field;
pub mod implicit;
pub mod involution;
pub mod kummer;
pub mod lattice;
pub mod linalg;
pub mod localring;
pub mod rdp;
pub mod report;
pub mod series;
pub mod serre;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Elem, GaloisField};
pub use localring::{Length, LocalIdeal};
pub use series::{Monomial, TruncatedSeries, EXACT};
