//! Dimension-specific tools: Smale names and the Sasaki–Einstein table in
//! dimension 5, Casson invariants and tight contact counts in dimension 3,
//! and monomial counts for moduli.

pub mod casson;
pub mod contact;
pub mod moduli;
pub mod smale;

pub use casson::{casson, milnor_signature, CassonInput};
pub use contact::{negative_continued_fraction, tight_contact_count};
pub use moduli::{count_monomials, moduli_dimension, moduli_from_weights, ModuliReport};
pub use smale::{smale_name, table1_lookup, SmaleManifold, Table1Status};
