//! Critical polygons, Cerf diagrams, and homology for the two constrained
//! extremal problems on spaces of planar n-gons.
//!
//! An n-gon here is an ordered tuple of planar points, considered up to
//! orientation-preserving isometry. Two functionals compete on that space:
//! the oriented area and the perimeter. This crate generates and certifies
//! the critical configurations of each functional restricted to a level
//! set of the other (regular stars and complete folds), stratifies the
//! (perimeter, area) half-plane by the discriminant parabolas those
//! families sweep out, computes the homology of the fibers with both
//! quantities fixed by two independent routes, and realizes the scaling
//! duality that exchanges the two problems.
//!
//! ```
//! use polydual::{criticality, Tolerances};
//! use polydual::geometry::Functional;
//!
//! // the positively wound pentagon star is a Morse point of the area
//! // on the fixed-perimeter space, with top index 2n - 4 = 6
//! let star = criticality::make_star(&criticality::StarSpec::winding(5, 1, 1.0)?);
//! let report = criticality::certify_critical(
//!     &star,
//!     Functional::Area,
//!     Functional::Perimeter,
//!     &Tolerances::default(),
//! )?;
//! assert!(report.certified_morse());
//! assert_eq!(report.morse_index, 6);
//! # Ok::<(), polydual::Error>(())
//! ```
//!
//! The `polydual` binary exposes the same machinery as subcommands
//! (`stars`, `certify`, `homology`, `cerf`, `report`); the book under
//! `book/` walks through the concepts chapter by chapter, and its code
//! snippets run as doctests of this crate.

// `!(v > 0.0)` guards reject NaN, which `v <= 0.0` would accept; parity
// tests stay as `% 2` to read like the index arithmetic around them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of, clippy::manual_div_ceil)]

pub mod cli;
pub mod config;
pub mod criticality;
pub mod duality;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod stratification;
pub mod svg;
pub mod topology;

pub use config::Tolerances;
pub use criticality::{StarKind, StarSpec};
pub use error::{Error, Result};
pub use geometry::{CerfPoint, Polygon};
pub use stratification::RegionLabel;
pub use topology::HomologyTable;

use serde::{Deserialize, Serialize};

/// Side of the zero-area locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

// Every fenced Rust block in the book runs under `cargo test --doc`,
// which keeps the guide and the library in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub struct Geometry;
    #[doc = include_str!("../../../book/src/critical-points.md")]
    pub struct CriticalPoints;
    #[doc = include_str!("../../../book/src/cerf-diagram.md")]
    pub struct CerfDiagram;
    #[doc = include_str!("../../../book/src/homology.md")]
    pub struct Homology;
    #[doc = include_str!("../../../book/src/duality.md")]
    pub struct Duality;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
