//! Prototypes, Butterfly moves and exact flat-surface geometry for Prym
//! eigenforms in genus 3 and 4.

pub mod butterfly;
pub mod components;
pub mod cusps;
pub mod error;
pub mod exactnum;
pub mod geometry;
pub mod prototypes;
pub mod reference;
pub mod verify;

pub use error::{PrymError, Result};
