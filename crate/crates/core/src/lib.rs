pub mod error;
pub mod matrix;
pub mod numtheory;
pub mod poly;
pub mod ring;
pub(crate) mod lattice;
pub mod pi;
pub mod algebra;
pub mod classes;
pub mod module;
pub mod special;
pub mod kinv;
pub mod coherence;
pub mod bivariate;
pub mod par;
