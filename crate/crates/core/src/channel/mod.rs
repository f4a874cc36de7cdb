//! Synthetic indoor CIR fingerprints.

mod dataset;
mod layout;
mod propagation;

pub use dataset::{Dataset, DatasetMeta};
pub use layout::{build_layout, LayoutConfig, Obstacles, OfficeLayout, Point};
pub use propagation::{large_scale_gain_db, Channel, CirSample, PropagationParams, SmallScaleMode};
