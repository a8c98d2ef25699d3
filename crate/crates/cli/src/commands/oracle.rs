use std::path::PathBuf;

use anyhow::bail;
use clap::ValueEnum;
use rayon::prelude::*;
use vosground::io::{read_proposals, read_tracks, write_scores, write_track};
use vosground::rerank::{gt_as_proposals, oracle_assign, rerank_scores, select_track};

use super::rerank::RerankFlags;
use super::{read_text, require_paths, usage, warn_all, Outputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    /// Pick, per frame, the proposal that best overlaps the ground truth.
    Grounding,
    /// Use the ground-truth boxes as the only proposals, then re-rank.
    Boxes,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    pub oracle: OracleMode,
    #[arg(long)]
    pub gt_boxes: PathBuf,
    /// Proposals JSON Lines file (grounding mode).
    #[arg(long)]
    pub proposals: Option<PathBuf>,
    #[command(flatten)]
    pub options: RerankFlags,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(a: Args) -> anyhow::Result<()> {
    require_paths(
        [a.gt_boxes.as_path()]
            .into_iter()
            .chain(a.proposals.as_deref()),
    )?;
    let (gt, w) = read_tracks(&read_text(&a.gt_boxes)?)?;
    warn_all(&a.gt_boxes, &w);
    if gt.is_empty() {
        bail!("no ground-truth boxes");
    }

    let mut out = Outputs::default();
    match a.oracle {
        OracleMode::Boxes => {
            if a.proposals.is_some() {
                return Err(usage("--proposals is not used with --oracle boxes"));
            }
            let opts = a.options.options();
            let results: Vec<_> = gt
                .par_iter()
                .map(|(key, g)| {
                    let vp = gt_as_proposals(&key.video, &key.query, g.entries());
                    let scored = rerank_scores(&vp, &opts);
                    (write_track(&select_track(&scored)), write_scores(&scored))
                })
                .collect();
            out.add(
                "tracks.jsonl",
                results.iter().map(|r| r.0.as_str()).collect::<String>(),
            );
            out.add(
                "scores.jsonl",
                results.iter().map(|r| r.1.as_str()).collect::<String>(),
            );
        }
        OracleMode::Grounding => {
            let Some(path) = &a.proposals else {
                return Err(usage("--oracle grounding needs --proposals"));
            };
            let (videos, w) = read_proposals(&read_text(path)?)?;
            warn_all(path, &w);
            if let Some(vp) = videos.iter().find(|vp| !gt.contains_key(&vp.key())) {
                bail!("no ground truth for {}", vp.key());
            }
            let tracks: Vec<String> = videos
                .par_iter()
                .map(|vp| write_track(&oracle_assign(vp, gt[&vp.key()].entries())))
                .collect();
            out.add("tracks.jsonl", tracks.concat());
        }
    }
    out.commit(&a.out)?;
    println!("oracle tracks written for {} queries", gt.len());
    Ok(())
}
