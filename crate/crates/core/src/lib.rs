//! Temporal re-ranking of language-grounding box proposals, box and mask
//! evaluation for video object segmentation, and seeded synthetic data for
//! exercising both without any neural model.
//!
//! Module map:
//!
//! - [`geom`]: boxes, binary masks, affine warps, boundaries and mask codecs.
//! - [`rerank`]: temporal-consistency rescoring and track selection.
//! - [`metrics`]: box mIoU, J/F/T mask metrics, AUC, attribute breakdowns.
//! - [`datagen`]: box jitter, synthetic flow, guidance channels, scene and
//!   proposal simulation.
//! - [`exprstats`]: referring-expression tokenization, tagging and corpus statistics.
//! - [`io`]: JSON Lines records and mask directories.

pub mod datagen;
pub mod error;
pub mod exprstats;
pub mod geom;
pub mod io;
pub mod metrics;
pub mod rerank;

pub use error::{Error, Result};
pub use geom::{AffineTransform, BBox, Mask, RleMask};
pub use rerank::{Proposal, QueryKey, ScoredProposal, ScoredVideo, Track, VideoProposals};
