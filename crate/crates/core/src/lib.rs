//! Finite-algebra engine for matrix powers, compatible-equation subalgebras,
//! contextual translations and adjoint verification.
//!
//! Everything in this crate works over explicit operation tables on universes
//! `{0..n-1}` and is fully deterministic: all collections are ordered and all
//! search routines fix an enumeration order.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adjoint;
pub mod classes;
pub mod finalg;
pub mod matpow;
pub mod terms;
pub mod thetasub;
pub mod xlate;
