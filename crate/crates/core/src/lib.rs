pub mod error;
pub mod kink;
pub mod numerics;
pub mod susy;
pub mod darboux;
pub mod spectral;
pub mod app;
