//! Species of structures and analytic functors between presheaf categories
//! over finite categories, computed exactly.

pub mod fincat;
pub mod freesmc;
pub mod presheaf;
pub mod species;
pub mod unary;
pub mod classical;
pub mod generic;
pub mod random;
pub mod suites;
