use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::bail;
use rayon::prelude::*;
use vosground::io::{read_proposals, read_tracks, write_scores, write_track};
use vosground::rerank::{hybrid_track, raw_select, rerank_scores, select_track, RerankOptions};
use vosground::{QueryKey, Track};

use super::{read_text, require_paths, usage, warn_all, Outputs};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Proposals JSON Lines file.
    #[arg(long)]
    pub proposals: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub options: RerankFlags,
    /// Also write the raw-score baseline tracks.
    #[arg(long)]
    pub raw: bool,
    /// Ground-truth boxes, used with `--first-frame-gt`.
    #[arg(long)]
    pub gt_boxes: Option<PathBuf>,
    /// Replace each track's first frame with the ground-truth box.
    #[arg(long, requires = "gt_boxes")]
    pub first_frame_gt: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RerankFlags {
    /// Only frames at most this far apart support each other.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub window: Option<u32>,
    /// Keep the best K proposals per frame (by raw score) before re-ranking.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub top_k: Option<u64>,
}

impl RerankFlags {
    pub fn options(&self) -> RerankOptions {
        RerankOptions {
            window: self.window,
            top_k: self.top_k.map(|k| k as usize),
        }
    }
}

pub fn run(a: Args) -> anyhow::Result<()> {
    require_paths(
        [a.proposals.as_path()]
            .into_iter()
            .chain(a.gt_boxes.as_deref()),
    )?;
    if a.gt_boxes.is_some() && !a.first_frame_gt {
        return Err(usage(
            "--gt-boxes is only used together with --first-frame-gt",
        ));
    }
    let (videos, warnings) = read_proposals(&read_text(&a.proposals)?)?;
    warn_all(&a.proposals, &warnings);
    let gt: Option<BTreeMap<QueryKey, Track>> = match &a.gt_boxes {
        Some(p) => {
            let (gt, w) = read_tracks(&read_text(p)?)?;
            warn_all(p, &w);
            Some(gt)
        }
        None => None,
    };

    let opts = a.options.options();
    let results: Vec<_> = videos
        .par_iter()
        .map(|vp| {
            let scored = rerank_scores(vp, &opts);
            let track = select_track(&scored);
            (write_scores(&scored), track, a.raw.then(|| raw_select(vp)))
        })
        .collect();

    let mut tracks = String::new();
    let mut scores = String::new();
    let mut raw = String::new();
    for (s, mut track, r) in results {
        if let Some(gt) = &gt {
            let key = track.key();
            let Some(first) = gt.get(&key).and_then(|g| g.get(1)) else {
                bail!("{key}: no ground-truth box in frame 1");
            };
            track = hybrid_track(first, &track);
        }
        scores.push_str(&s);
        tracks.push_str(&write_track(&track));
        if let Some(r) = r {
            raw.push_str(&write_track(&r));
        }
    }

    let mut out = Outputs::default();
    out.add("tracks.jsonl", tracks);
    out.add("scores.jsonl", scores);
    if a.raw {
        out.add("raw_tracks.jsonl", raw);
    }
    out.commit(&a.out)?;
    println!("{} queries re-ranked", videos.len());
    Ok(())
}
