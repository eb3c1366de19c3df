//! Finite, exact-arithmetic truncations of ample groupoid constructions:
//! the tail-equivalence groupoid of the full shift, its twisted semidirect
//! products over a non-amenable group, and odometers — together with
//! auditors that machine-check invariant-measure uniqueness, Følner
//! boundary bounds, almost-finiteness violations, minimality and
//! effectiveness witnesses, and pure-infiniteness obstructions.

pub mod cantor;
pub mod error;
pub mod rational;
pub mod audit;
pub mod auditors;
pub mod cert;
pub mod config;
pub mod measure;
pub mod odometer;
pub mod sft;
pub mod twisted;
pub mod words;

pub use error::{Error, Result};
pub use rational::Rational;
