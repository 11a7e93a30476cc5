//! Exact verification of Frobenius-splitting and vanishing-order claims for
//! sections built from products of minors on classical flag varieties.

pub mod charts;
pub mod exactpoly;
pub mod linalg;
pub mod polymatrix;
pub mod rootdata;
pub mod sections;
pub mod vanishing;
pub mod splitting;
pub mod suite;
