//! Exact-arithmetic fair and efficient allocation of indivisible chores.
//!
//! The crate covers the data model ([`model`]), fairness and equilibrium
//! checks ([`certify`]), brute-force and LP ground truth ([`oracle`]), and
//! the solvers: three agents ([`three`]), two agent types ([`twotype`]) and
//! bivalued / 2-ary costs ([`bivalued`]). File formats, instance generators
//! and the command-line front end live in [`io`] and [`cli`].

pub mod bivalued;
pub mod certify;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod repro;
pub mod three;
pub mod twotype;

pub use error::{Error, Result};
pub use model::{Allocation, Instance, PaymentVector};
pub use rational::Rational;
