//! Exact construction and verification engine for pointed Hopf algebras
//! attached to linking data of type `A_{n_1} × … × A_{n_t}`.

pub mod datum;
pub mod group;
pub mod scalars;
pub mod syntax;
pub mod ncalg;
pub mod par;
pub mod hopf;
pub mod cocycle;
pub mod report;
