//! Finite commutative quantales, Q-sets over them, functional and relational
//! morphisms, and the two completion functors (gluing and Scott) together
//! with decision procedures for extensionality, gluing-completeness, and
//! Scott-completeness on concrete finite instances.
//!
//! Everything in this crate is pure table algebra over index-addressed
//! carriers: no IO, no floating point, no global state. Values are immutable
//! after construction and safe to share across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constructors;
pub mod fixtures;
pub mod gluing;
pub mod limits;
pub mod morphism;
pub mod qset;
pub mod quantale;
pub mod scott;

pub use qset::{QSet, QSetError};
pub use quantale::{Props, Quantale, QuantaleError};
