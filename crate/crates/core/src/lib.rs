//! Fusion systems of finite groups, infinite group models realizing them
//! (iterated amalgams and HNN quotients), Bass–Serre normal forms for the
//! models, and mod-p cohomology checks in degrees ≤ 2: stable elements,
//! Mayer–Vietoris dimension reports, and the degree-1 splitting of the
//! restriction to the Sylow subgroup.

pub mod alperin;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod fusion;
pub mod group;
pub mod hom;
pub mod models;
pub mod perm;
pub mod presentation;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use group::{PermGroup, SubgroupRef};
pub use hom::GroupHom;
pub use perm::Perm;
