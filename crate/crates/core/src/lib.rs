//! Design and scheduling of a local PV, wind and battery system for a
//! flexible production process trading on day-ahead and intraday markets.
//!
//! The pipeline runs from weather data ([`weather`]) over a clustered
//! scenario tree ([`scenarios`]) to a deterministic-equivalent linear program
//! ([`model`]) solved by the built-in simplex ([`lp`]); [`studies`] drives
//! the parameter studies on top.

pub mod domain;
pub mod lp;
pub mod model;
pub mod scenarios;
pub mod studies;
pub mod synthetic;
pub mod weather;

pub use domain::*;
