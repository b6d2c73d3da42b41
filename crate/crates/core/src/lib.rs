//! Divisible design graphs and strongly regular graphs from affine designs
//! and symmetric Latin squares, with exhaustive certification.

pub mod algebra;
pub mod construct;
pub mod designs;
pub mod gf;
pub mod graph;
pub mod iso;
pub mod latin;
