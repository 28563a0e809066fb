pub mod coherence;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod groups;
pub mod io;
pub mod partition;
pub mod poly;
pub mod sandwich;
pub mod search;
pub mod subset;
pub mod union_find;
pub mod vector;

pub use error::{Error, Result};
pub use groups::{PermGroup, Permutation};
pub use partition::{CanonicalForm, SetPartition};
pub use poly::{IntPolynomial, Polynomial, RationalPolynomial};
pub use subset::{Subset, TripleType};
