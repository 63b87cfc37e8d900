//! Exact combinatorics for horospherical varieties: root systems, coloured
//! fans, divisors, Mori cones, contractions, flips and a Mori program driver.

pub mod app;
pub mod arith;
pub mod cone;
pub mod corpus;
pub mod divisors;
pub mod fan;
pub mod io;
pub mod ledger;
pub mod linalg;
pub mod mmp;
pub mod mori;
pub mod par;
pub mod rootsys;
