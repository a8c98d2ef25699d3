use super::jitter::ImageBounds;
use super::proposals::{generate_proposals, CorruptionSpec};
use super::rng::{child_seed, domain};
use super::scene::{generate_scene, SceneGt, SceneSpec};
use super::specfile::SimulationSpec;
use crate::error::Result;
use crate::rerank::VideoProposals;

/// One scene of a sweep with its ground truth and one corrupted proposal set
/// per object.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedScene {
    pub video_id: String,
    pub spec: SceneSpec,
    pub gt: SceneGt,
    /// Indexed like `gt.objects`; query ids are `obj{k}`.
    pub proposals: Vec<VideoProposals>,
}

pub fn scene_video_id(index: usize) -> String {
    format!("scene{index:03}")
}

pub fn object_query_id(k: usize) -> String {
    format!("obj{k}")
}

/// Scene `index` of `sim`. Each object's corruption stream is seeded from
/// `corruption.seed`, the scene index and the object index.
pub fn simulate_scene(
    sim: &SimulationSpec,
    corruption: &CorruptionSpec,
    index: usize,
) -> Result<SimulatedScene> {
    let spec = sim.scene(index)?;
    let gt = generate_scene(&spec)?;
    let video_id = scene_video_id(index);
    let bounds = ImageBounds::new(spec.width as f64, spec.height as f64);
    let proposals = gt
        .objects
        .iter()
        .enumerate()
        .map(|(k, obj)| {
            let c = CorruptionSpec {
                seed: child_seed(corruption.seed, &[domain::SEED, index as u64, k as u64]),
                ..corruption.clone()
            };
            generate_proposals(&video_id, &object_query_id(k), &obj.boxes, bounds, &c)
        })
        .collect::<Result<_>>()?;
    Ok(SimulatedScene {
        video_id,
        spec,
        gt,
        proposals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_and_shapes() {
        let sim = SimulationSpec {
            num_frames: 6,
            random_objects: 2,
            ..SimulationSpec::default()
        };
        let s = simulate_scene(&sim, &CorruptionSpec::default(), 7).unwrap();
        assert_eq!(s.video_id, "scene007");
        assert_eq!(s.proposals.len(), 2);
        assert_eq!(s.proposals[1].query_id, "obj1");
        assert_eq!(s.proposals[0].num_frames(), 6);
        assert_ne!(s.proposals[0], s.proposals[1]);
        assert_eq!(
            s,
            simulate_scene(&sim, &CorruptionSpec::default(), 7).unwrap()
        );
    }
}
