//! Acceptance battery for `hf-frege`, plus the brute-force oracles and
//! seeded formula corpora it checks the library against.

pub mod acceptance;
pub mod corpus;
pub mod oracle;
