//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

pub mod dense;
pub mod imaginary_time;
pub mod poly;
