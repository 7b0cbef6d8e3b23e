pub mod specfun;
pub mod quadrature;
pub mod geometry;
pub mod exprlang;
pub mod besselpair;
pub mod profile;
pub mod identities;
pub mod sharpness;
