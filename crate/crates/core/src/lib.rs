//! Commuting involution graphs of general linear groups over small finite
//! fields, computed exactly.
//!
//! Fix a conjugacy class `X_k` of involutions in `GL_n(GF(q))` — the
//! invertible `n x n` matrices `x` with `x^2 = I` and `rank(x - I) = k`.
//! The commuting involution graph on `X_k` has the class members as
//! vertices and an edge between two distinct members whenever they commute.
//! This crate materializes those graphs without ever storing an edge list:
//! it enumerates classes, runs breadth-first searches that recompute
//! adjacency on the fly, certifies distances with explicit commuting walks,
//! and cross-checks the observed censuses against closed-form counts.
//!
//! All arithmetic is exact. Field elements are table-driven integers, so
//! results are reproducible bit for bit across platforms.
//!
//! # Modules
//!
//! - [`gf`] — arithmetic in `GF(p^e)` for orders up to 16.
//! - [`matrix`] — dense exact matrices: products, rank, inverses,
//!   nullspaces, and canonical forms of involutions.
//! - [`involutions`] — conjugacy classes of involutions: enumeration,
//!   commuting neighbourhoods, and conjugators between members.
//! - [`graph`] — breadth-first distance censuses, diameters, pairwise
//!   distances, and validated path certificates.
//! - [`census`] — closed-form class sizes, predicted diameters and shell
//!   counts, and reports comparing them with observation.
//! - [`witnesses`] — constructive distance bounds: short commuting walks
//!   and exhaustively verified lower bounds.
//! - [`format`] — plain-text matrix and certificate files plus JSON and
//!   CSV reports.
//!
//! # Quick start
//!
//! Census the rank-2 involution class of `GL_4(GF(2))`: 210 vertices,
//! diameter 3.
//!
//! ```
//! use cigraph::gf::field;
//! use cigraph::graph::bfs_census;
//! use cigraph::involutions::{canonical_t, ClassSpec, DEFAULT_CLASS_CAP};
//!
//! let f = field(2, 1)?;
//! let spec = ClassSpec::new(&f, 4, 2)?;
//! let census = bfs_census(&spec, &canonical_t(&spec), false, DEFAULT_CLASS_CAP)?;
//!
//! assert_eq!(census.vertex_count(), 210);
//! assert_eq!(census.eccentricity, 3);
//! assert_eq!(census.counts[&1], 17); // members commuting with the base point
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod census;
pub mod format;
pub mod gf;
pub mod graph;
pub mod involutions;
pub mod matrix;
pub mod witnesses;
