//! Construction and verification of hyperbolic pants decompositions on
//! infinite-type surfaces of finite genus.
//!
//! The pipeline: a [`tree::CoreTree`] (a finite truncation of a rooted
//! degree-≤3 tree) is normalized by [`surgery::normalize`], turned into a
//! [`pants::PantsComplex`], given factorial cuff lengths by
//! [`metric::label_lengths`], and finally checked by the certificate layer,
//! which verifies — by exact big-integer arithmetic and log-space hyperbolic
//! estimates — that quasiconformal maps of bounded distortion cannot move
//! the exhaustion subsurfaces off themselves.
//!
//! ```
//! use std::collections::BTreeMap;
//! use pantograph::certificate::verify_non_wandering;
//!
//! let spec = pantograph::preset("flute", None)?;
//! let tree = pantograph::truncate(spec, 20);
//! let (tree, _trace) = pantograph::normalize(&tree)?;
//! let complex = pantograph::build(&tree)?;
//! let lengths: BTreeMap<_, _> = complex.cuffs.keys().map(|&c| (c, 1.0)).collect();
//! let mc = pantograph::label_lengths(&complex, &lengths)?;
//!
//! let cert = verify_non_wandering(&mc, 5.0, 15, 2.0)?;
//! assert!(cert.is_valid());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod certificate;
pub mod geom;
pub mod metric;
pub mod numeric;
pub mod pants;
pub mod surgery;
pub mod testing;
pub mod tree;

pub use metric::{compare, factorial_gap, label_lengths, Length, LogLength, MetricComplex};
pub use pants::{
    build, euler_characteristic, euler_from_topology, exhaustion, Cuff, CuffId, ExhaustionSlice,
    PantsComplex, Piece, PieceId, PieceKind,
};
pub use surgery::{find_exterior_trees, normalize, ExteriorTree, SurgeryTrace};
pub use tree::{
    classify_ends, preset, truncate, validate, CoreTree, EndsSummary, TreeSpec, ValidationReport,
    Vertex, VertexId, VertexKind,
};
