//! Mod-p cohomology in degrees ≤ 2: linear algebra over 𝔽_p, normalized bar
//! cochains, characters, induced maps, stable elements, and Mayer–Vietoris
//! dimension reports for graph-of-groups models.

pub mod bar;
pub mod chars;
pub mod fp;
