//! Temporal-consistency re-ranking of per-frame grounding proposals.
//!
//! Each proposal `i` in frame `f_i` with matching score `s_i` gets a new score
//!
//! ```text
//! new_i = s_i * Σ_j  iou(i, j) * d_j * s_j / |f_i - f_j|
//! ```
//!
//! where `j` ranges over the proposals of every *other* frame and `d_j` is the
//! objectness of `j`. Per frame the proposal with the highest new score is
//! kept. Ties are broken by raw score, then objectness, then lower id.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{box_iou, BBox};

/// Identifies one (video, query) evaluation unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryKey {
    pub video: String,
    pub query: String,
}

impl QueryKey {
    pub fn new(video: impl Into<String>, query: impl Into<String>) -> Self {
        Self {
            video: video.into(),
            query: query.into(),
        }
    }
}

impl fmt::Display for QueryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.video, self.query)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    /// 1-based frame index.
    pub frame: u32,
    pub bbox: BBox,
    /// Matching score from the grounding model.
    pub score: f64,
    pub objectness: f64,
    /// Stable within a frame.
    pub id: u32,
}

impl Proposal {
    pub fn new(frame: u32, bbox: BBox, score: f64, objectness: f64, id: u32) -> Result<Self> {
        if frame == 0 {
            return Err(Error::Invalid("frame indices start at 1".into()));
        }
        for (name, v) in [("score", score), ("objectness", objectness)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            frame,
            bbox,
            score,
            objectness,
            id,
        })
    }
}

/// All proposals of one video for one query, grouped by frame.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoProposals {
    pub video_id: String,
    pub query_id: String,
    num_frames: u32,
    frames: BTreeMap<u32, Vec<Proposal>>,
}

impl VideoProposals {
    pub fn new(
        video_id: impl Into<String>,
        query_id: impl Into<String>,
        num_frames: u32,
        proposals: impl IntoIterator<Item = Proposal>,
    ) -> Result<Self> {
        let mut frames: BTreeMap<u32, Vec<Proposal>> = BTreeMap::new();
        for p in proposals {
            if p.frame == 0 || p.frame > num_frames {
                return Err(Error::Invalid(format!(
                    "proposal frame {} outside 1..={num_frames}",
                    p.frame
                )));
            }
            let slot = frames.entry(p.frame).or_default();
            if slot.iter().any(|q| q.id == p.id) {
                return Err(Error::Invalid(format!(
                    "duplicate proposal id {} in frame {}",
                    p.id, p.frame
                )));
            }
            slot.push(p);
        }
        Ok(Self {
            video_id: video_id.into(),
            query_id: query_id.into(),
            num_frames,
            frames,
        })
    }

    pub fn key(&self) -> QueryKey {
        QueryKey::new(&self.video_id, &self.query_id)
    }

    pub fn num_frames(&self) -> u32 {
        self.num_frames
    }

    /// Non-empty frames in ascending order.
    pub fn frames(&self) -> &BTreeMap<u32, Vec<Proposal>> {
        &self.frames
    }

    pub fn frame(&self, frame: u32) -> &[Proposal] {
        self.frames.get(&frame).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.frames.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn proposals(&self) -> impl Iterator<Item = &Proposal> {
        self.frames.values().flatten()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredProposal {
    pub proposal: Proposal,
    pub new_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredVideo {
    pub video_id: String,
    pub query_id: String,
    pub num_frames: u32,
    pub frames: BTreeMap<u32, Vec<ScoredProposal>>,
}

/// One box (or none) per frame for a single query.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub video_id: String,
    pub query_id: String,
    entries: Vec<Option<BBox>>,
}

impl Track {
    pub fn empty(
        video_id: impl Into<String>,
        query_id: impl Into<String>,
        num_frames: u32,
    ) -> Self {
        Self {
            video_id: video_id.into(),
            query_id: query_id.into(),
            entries: vec![None; num_frames as usize],
        }
    }

    pub fn from_entries(
        video_id: impl Into<String>,
        query_id: impl Into<String>,
        entries: Vec<Option<BBox>>,
    ) -> Self {
        Self {
            video_id: video_id.into(),
            query_id: query_id.into(),
            entries,
        }
    }

    pub fn key(&self) -> QueryKey {
        QueryKey::new(&self.video_id, &self.query_id)
    }

    pub fn num_frames(&self) -> u32 {
        self.entries.len() as u32
    }

    /// Box at 1-based `frame`; `None` outside the track or where unset.
    pub fn get(&self, frame: u32) -> Option<BBox> {
        frame
            .checked_sub(1)
            .and_then(|i| self.entries.get(i as usize))
            .copied()
            .flatten()
    }

    /// Sets the box at 1-based `frame`, growing the track if needed.
    pub fn set(&mut self, frame: u32, b: Option<BBox>) {
        assert!(frame >= 1, "frame indices start at 1");
        let i = frame as usize - 1;
        if i >= self.entries.len() {
            self.entries.resize(i + 1, None);
        }
        self.entries[i] = b;
    }

    pub fn entries(&self) -> &[Option<BBox>] {
        &self.entries
    }
}

/// Cost controls. The defaults reproduce the exact, unbounded formula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RerankOptions {
    /// Only pairs with `|f_i - f_j| <= window` contribute.
    pub window: Option<u32>,
    /// Keep only the best `top_k` proposals per frame (by raw score) before
    /// rescoring; dropped proposals neither receive nor contribute scores.
    pub top_k: Option<usize>,
}

fn raw_order(a: &Proposal, b: &Proposal) -> Ordering {
    a.score
        .total_cmp(&b.score)
        .then(a.objectness.total_cmp(&b.objectness))
        .then(b.id.cmp(&a.id))
}

fn scored_order(a: &ScoredProposal, b: &ScoredProposal) -> Ordering {
    a.new_score
        .total_cmp(&b.new_score)
        .then_with(|| raw_order(&a.proposal, &b.proposal))
}

fn truncated_pool(vp: &VideoProposals, top_k: Option<usize>) -> BTreeMap<u32, Vec<Proposal>> {
    vp.frames
        .iter()
        .filter(|(_, ps)| !ps.is_empty())
        .map(|(&f, ps)| {
            let mut ps = ps.clone();
            if let Some(k) = top_k {
                if ps.len() > k {
                    ps.sort_by(|a, b| raw_order(b, a));
                    ps.truncate(k);
                    ps.sort_by_key(|p| p.id);
                }
            }
            (f, ps)
        })
        .collect()
}

/// Computes the temporal-consistency score of every proposal.
pub fn rerank_scores(vp: &VideoProposals, opts: &RerankOptions) -> ScoredVideo {
    let pool = truncated_pool(vp, opts.top_k);
    let window = opts.window.unwrap_or(u32::MAX);

    let frames = pool
        .iter()
        .map(|(&fi, props)| {
            let lo = fi.saturating_sub(window);
            let hi = fi.saturating_add(window);
            let scored = props
                .iter()
                .map(|p| {
                    let mut support = 0.0;
                    for (&fj, others) in pool.range(lo..=hi) {
                        if fj == fi {
                            continue;
                        }
                        let dt = fi.abs_diff(fj) as f64;
                        for q in others {
                            let r = box_iou(&p.bbox, &q.bbox);
                            if r > 0.0 {
                                support += r * q.objectness * q.score / dt;
                            }
                        }
                    }
                    ScoredProposal {
                        proposal: p.clone(),
                        new_score: p.score * support,
                    }
                })
                .collect();
            (fi, scored)
        })
        .collect();

    ScoredVideo {
        video_id: vp.video_id.clone(),
        query_id: vp.query_id.clone(),
        num_frames: vp.num_frames,
        frames,
    }
}

/// Keeps the highest re-ranked proposal in each frame.
pub fn select_track(scored: &ScoredVideo) -> Track {
    let mut track = Track::empty(&scored.video_id, &scored.query_id, scored.num_frames);
    for (&f, props) in &scored.frames {
        if let Some(best) = props.iter().max_by(|a, b| scored_order(a, b)) {
            track.set(f, Some(best.proposal.bbox));
        }
    }
    track
}

/// Baseline: highest raw matching score per frame.
pub fn raw_select(vp: &VideoProposals) -> Track {
    let mut track = Track::empty(&vp.video_id, &vp.query_id, vp.num_frames);
    for (&f, props) in &vp.frames {
        if let Some(best) = props.iter().max_by(|a, b| raw_order(a, b)) {
            track.set(f, Some(best.bbox));
        }
    }
    track
}

/// Per frame, the proposal with the highest IoU against the ground-truth box
/// (`gt[f - 1]`); ties go to the lower id.
pub fn oracle_assign(vp: &VideoProposals, gt: &[Option<BBox>]) -> Track {
    let mut track = Track::empty(&vp.video_id, &vp.query_id, vp.num_frames);
    for (&f, props) in &vp.frames {
        let Some(Some(g)) = gt.get(f as usize - 1) else {
            continue;
        };
        let best = props.iter().max_by(|a, b| {
            box_iou(&a.bbox, g)
                .total_cmp(&box_iou(&b.bbox, g))
                .then(b.id.cmp(&a.id))
        });
        if let Some(best) = best {
            track.set(f, Some(best.bbox));
        }
    }
    track
}

/// Replaces the first-frame entry with a known box.
pub fn hybrid_track(gt_first: BBox, reranked: &Track) -> Track {
    let mut track = reranked.clone();
    track.set(1, Some(gt_first));
    track
}

/// Ground-truth boxes as the sole proposal pool (score and objectness 1).
pub fn gt_as_proposals(
    video_id: impl Into<String>,
    query_id: impl Into<String>,
    gt: &[Option<BBox>],
) -> VideoProposals {
    let proposals = gt.iter().enumerate().filter_map(|(i, b)| {
        b.map(|b| Proposal {
            frame: i as u32 + 1,
            bbox: b,
            score: 1.0,
            objectness: 1.0,
            id: 0,
        })
    });
    VideoProposals::new(video_id, query_id, gt.len() as u32, proposals)
        .expect("one proposal per in-range frame")
}
