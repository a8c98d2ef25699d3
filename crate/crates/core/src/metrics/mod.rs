//! Evaluation protocol: box-track mIoU and AUC, region (J) and boundary (F)
//! mask metrics with mean/recall/decay statistics, a temporal-stability
//! proxy, and attribute breakdowns.

mod boxes;
mod breakdown;
mod masks;
pub mod report;
mod series;

pub use boxes::{auc_success, track_iou_series, track_miou};
pub use breakdown::{
    attribute_breakdown, AnnotationType, AttributeValue, LengthBin, NumObjectsBin, QueryAttributes,
};
pub use masks::{
    boundary_f, default_boundary_tolerance, evaluate_masks, temporal_stability_proxy, EvalReport,
};
pub use series::{mean, series_stats, MetricSeries, SeriesStats};
