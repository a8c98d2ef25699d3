use std::path::PathBuf;

use vosground::datagen::rng::domain;
use vosground::datagen::{jitter_box, DrawStream, ImageBounds};
use vosground::io::{read_tracks, write_track};

use super::{read_text, require_paths, stable_id, usage, warn_all, Outputs};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Box JSON Lines file (same layout as tracks).
    #[arg(long)]
    pub gt_boxes: PathBuf,
    /// Maximum per-edge offset as a fraction of the box side.
    #[arg(long)]
    pub fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Image width for clamping; boxes are unbounded without it.
    #[arg(long, requires = "height")]
    pub width: Option<f64>,
    #[arg(long, requires = "width")]
    pub height: Option<f64>,
    /// Output directory for jittered_boxes.jsonl.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(a: Args) -> anyhow::Result<()> {
    require_paths([a.gt_boxes.as_path()])?;
    if !(a.fraction >= 0.0 && a.fraction.is_finite()) {
        return Err(usage(format!(
            "--fraction must be finite and non-negative, got {}",
            a.fraction
        )));
    }
    let bounds = match (a.width, a.height) {
        (Some(w), Some(h)) if w > 0.0 && h > 0.0 => ImageBounds::new(w, h),
        (Some(_), Some(_)) => return Err(usage("--width and --height must be positive")),
        _ => ImageBounds::unbounded(),
    };
    let (tracks, w) = read_tracks(&read_text(&a.gt_boxes)?)?;
    warn_all(&a.gt_boxes, &w);

    let mut text = String::new();
    for (key, track) in &tracks {
        let id = stable_id(&key.to_string());
        let mut out = track.clone();
        for f in 1..=track.num_frames() {
            if let Some(b) = track.get(f) {
                let mut stream = DrawStream::new(a.seed, &[domain::JITTER, id, f as u64]);
                out.set(f, Some(jitter_box(&b, a.fraction, bounds, &mut stream)));
            }
        }
        text.push_str(&write_track(&out));
    }
    let mut out = Outputs::default();
    out.add("jittered_boxes.jsonl", text);
    out.commit(&a.out)?;
    println!("{} tracks jittered", tracks.len());
    Ok(())
}
