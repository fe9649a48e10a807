//! Heterogeneous Cournot duopoly maps with exact stability certificates.

pub mod dynamics;
pub mod model;
pub mod stability;
pub mod sym;
