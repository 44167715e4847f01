//! Distance monoids, metric spaces over them, and extension property
//! witnesses for partial isometries.

pub mod canon;
pub mod eppa;
pub mod fraisse;
pub mod graph;
pub mod json;
pub mod monoid;
pub mod omission;
pub mod random;
pub mod space;
