//! First-order paraconsistent logic with three truth values, a sequent
//! calculus for it, relational databases described by relational theories,
//! and consistent query answering over such databases.
//!
//! - [`syntax`]: terms, formulas, signatures, parsing and printing.
//! - [`semantics`]: truth values, structures, valuation and a brute-force oracle.
//! - [`entailment`]: deciding consequence over relational languages.
//! - [`sequent`]: proof checking and bounded proof search.
//! - [`relational`]: relational theories, their models and database consistency.
//! - [`cqa`]: answers, consistent answers, repairs and strongly consistent answers.

pub mod cqa;
pub mod entailment;
pub mod relational;
pub mod semantics;
pub mod sequent;
pub mod syntax;
