//! Conjugacy classes of the general linear groups GL_n(q) and the general
//! affine groups GA_n(q), and structure constants of their class algebras.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod field;
pub mod matrix;
pub mod partition;
pub mod poly;
pub mod types;
pub mod verify;
