pub mod cli;
pub mod error;
pub mod physics;
pub mod quadrature;
pub mod racah;
pub mod special;
pub mod wilson;
