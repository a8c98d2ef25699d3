use super::jitter::{jitter_box, ImageBounds};
use super::rng::{domain, DrawStream};
use crate::error::{Error, Result};
use crate::geom::BBox;
use crate::rerank::{Proposal, VideoProposals};

const TARGET_SCORE: f64 = 0.8;
const DISTRACTOR_SCORE: f64 = 0.3;
const OBJECTNESS: f64 = 0.9;

/// How a simulated grounding model corrupts the true target.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionSpec {
    pub distractors_per_frame: usize,
    pub score_noise_sd: f64,
    /// Per-frame probability that the target's score is swapped with a distractor's.
    pub id_switch_prob: f64,
    pub box_jitter_fraction: f64,
    /// Distractor boxes drawn once per video instead of once per frame.
    pub fixed_distractors: bool,
    pub seed: u64,
}

impl Default for CorruptionSpec {
    fn default() -> Self {
        Self {
            distractors_per_frame: 3,
            score_noise_sd: 0.05,
            id_switch_prob: 0.3,
            box_jitter_fraction: 0.1,
            fixed_distractors: false,
            seed: 0,
        }
    }
}

impl CorruptionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.id_switch_prob) {
            return Err(Error::Invalid(format!(
                "id_switch_prob must lie in [0, 1], got {}",
                self.id_switch_prob
            )));
        }
        if !(self.score_noise_sd >= 0.0 && self.score_noise_sd.is_finite()) {
            return Err(Error::Invalid(format!(
                "score_noise_sd must be finite and non-negative, got {}",
                self.score_noise_sd
            )));
        }
        if !(self.box_jitter_fraction >= 0.0 && self.box_jitter_fraction.is_finite()) {
            return Err(Error::Invalid(format!(
                "box_jitter_fraction must be finite and non-negative, got {}",
                self.box_jitter_fraction
            )));
        }
        Ok(())
    }
}

fn distractor_box(
    stream: &mut DrawStream,
    target: Option<&BBox>,
    bounds: ImageBounds,
) -> Result<BBox> {
    let (tw, th) = target.map_or((0.25 * bounds.width, 0.25 * bounds.height), |t| {
        (t.w(), t.h())
    });
    let w = (tw * stream.uniform(0.5, 1.5)).clamp(1.0, bounds.width);
    let h = (th * stream.uniform(0.5, 1.5)).clamp(1.0, bounds.height);
    let x = stream.uniform(0.0, bounds.width - w);
    let y = stream.uniform(0.0, bounds.height - h);
    BBox::new(x, y, w, h)
}

fn noisy(base: f64, sd: f64, stream: &mut DrawStream) -> f64 {
    if sd == 0.0 {
        return base;
    }
    (base + sd * stream.normal()).clamp(0.0, 1.0)
}

/// Simulated grounding output for one target.
///
/// Per frame: the jittered true box (score around 0.8) plus random distractor
/// boxes (score around 0.3), all with objectness 0.9. With probability
/// `id_switch_prob` the target swaps scores with one distractor. The target's
/// slot among the frame's proposal ids is random. Frames where the target is
/// absent carry distractors only.
pub fn generate_proposals(
    video_id: &str,
    query_id: &str,
    gt: &[Option<BBox>],
    bounds: ImageBounds,
    c: &CorruptionSpec,
) -> Result<VideoProposals> {
    c.validate()?;
    let first_target = gt.iter().flatten().next();
    let fixed: Vec<BBox> = if c.fixed_distractors {
        (0..c.distractors_per_frame)
            .map(|k| {
                let mut s = DrawStream::new(c.seed, &[domain::DISTRACTOR, 0, k as u64]);
                distractor_box(&mut s, first_target, bounds)
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut proposals = Vec::new();
    for (i, target) in gt.iter().enumerate() {
        let frame = i as u32 + 1;
        let f = frame as u64;
        let mut boxes: Vec<BBox> = if c.fixed_distractors {
            fixed.clone()
        } else {
            (0..c.distractors_per_frame)
                .map(|k| {
                    let mut s = DrawStream::new(c.seed, &[domain::DISTRACTOR, f, k as u64]);
                    distractor_box(&mut s, target.as_ref(), bounds)
                })
                .collect::<Result<_>>()?
        };
        let mut score_stream = DrawStream::new(c.seed, &[domain::SCORE, f]);
        let mut scores: Vec<f64> = (0..boxes.len())
            .map(|_| noisy(DISTRACTOR_SCORE, c.score_noise_sd, &mut score_stream))
            .collect();

        if let Some(t) = target {
            let mut jitter_stream = DrawStream::new(c.seed, &[domain::JITTER, f]);
            let jittered = jitter_box(t, c.box_jitter_fraction, bounds, &mut jitter_stream);
            let mut target_score = noisy(TARGET_SCORE, c.score_noise_sd, &mut score_stream);

            let mut switch = DrawStream::new(c.seed, &[domain::SWITCH, f]);
            let flip = switch.next_f64() < c.id_switch_prob;
            if flip && !scores.is_empty() {
                let k = switch.below(scores.len() as u64) as usize;
                std::mem::swap(&mut target_score, &mut scores[k]);
            }

            let slot =
                DrawStream::new(c.seed, &[domain::SLOT, f]).peek(0) % (boxes.len() as u64 + 1);
            boxes.insert(slot as usize, jittered);
            scores.insert(slot as usize, target_score);
        }

        for (id, (b, s)) in boxes.into_iter().zip(scores).enumerate() {
            proposals.push(Proposal::new(frame, b, s, OBJECTNESS, id as u32)?);
        }
    }
    VideoProposals::new(video_id, query_id, gt.len() as u32, proposals)
}
