//! Data preparation and simulation: box jitter, synthetic flow and guidance
//! channels, and a seeded video simulator that produces ground truth plus
//! corrupted grounding proposals.

mod flow;
mod jitter;
mod proposals;
pub mod rng;
mod scene;
pub mod specfile;
mod suite;

pub use flow::{
    flow_magnitude_image, guidance_channels, synth_flow, FlowField, GrayImage, Grid, GuidanceImage,
    RgbImage,
};
pub use jitter::{jitter_box, ImageBounds};
pub use proposals::{generate_proposals, CorruptionSpec};
pub use rng::DrawStream;
pub use scene::{generate_scene, scene_flow, ObjectGt, ObjectSpec, SceneGt, SceneSpec};
pub use specfile::{parse_corruption, SimulationSpec};
pub use suite::{object_query_id, scene_video_id, simulate_scene, SimulatedScene};
