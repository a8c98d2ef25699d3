use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use rayon::prelude::*;
use vosground::datagen::{parse_corruption, simulate_scene, CorruptionSpec, SimulationSpec};
use vosground::io::{encode_mask_set, write_proposals, write_track, MaskFormat, MaskSet};
use vosground::{QueryKey, Track};

use super::{read_text, require_paths, Outputs};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MaskFormatArg {
    Rle,
    Pbm,
}

impl From<MaskFormatArg> for MaskFormat {
    fn from(f: MaskFormatArg) -> Self {
        match f {
            MaskFormatArg::Rle => MaskFormat::Rle,
            MaskFormatArg::Pbm => MaskFormat::Pbm,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Scene spec file (`key = value`); built-in defaults when absent.
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Corruption spec file; built-in defaults when absent.
    #[arg(long)]
    pub corruption: Option<PathBuf>,
    /// Master seed; overrides the `seed` keys of both spec files.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "rle")]
    pub mask_format: MaskFormatArg,
}

pub fn run(a: Args) -> anyhow::Result<()> {
    require_paths(a.scene.iter().chain(&a.corruption).map(|p| p.as_path()))?;
    let mut sim = match &a.scene {
        Some(p) => SimulationSpec::parse(&read_text(p)?)?,
        None => SimulationSpec::default(),
    };
    let mut corruption = match &a.corruption {
        Some(p) => parse_corruption(&read_text(p)?)?,
        None => CorruptionSpec::default(),
    };
    if let Some(seed) = a.seed {
        sim.seed = seed;
        corruption.seed = seed;
    }

    let scenes = (0..sim.scenes)
        .into_par_iter()
        .map(|i| simulate_scene(&sim, &corruption, i))
        .collect::<Result<Vec<_>, _>>()?;

    let mut proposals = String::new();
    let mut gt_boxes = String::new();
    let mut masks = MaskSet::new();
    for s in &scenes {
        for (obj, vp) in s.gt.objects.iter().zip(&s.proposals) {
            proposals.push_str(&write_proposals(vp));
            gt_boxes.push_str(&write_track(&Track::from_entries(
                &s.video_id,
                &vp.query_id,
                obj.boxes.clone(),
            )));
            let frames: BTreeMap<u32, _> = obj
                .masks
                .iter()
                .enumerate()
                .map(|(i, m)| (i as u32 + 1, m.clone()))
                .collect();
            masks.insert(QueryKey::new(&s.video_id, &vp.query_id), frames);
        }
    }

    let mut out = Outputs::default();
    out.add("proposals.jsonl", proposals);
    out.add("gt_boxes.jsonl", gt_boxes);
    for (path, text) in encode_mask_set(&masks, a.mask_format.into()) {
        out.add(PathBuf::from("masks").join(path), text);
    }
    let manifest = out.manifest();
    out.add("manifest.txt", manifest.clone());
    out.commit(&a.out)?;
    print!("{manifest}");
    Ok(())
}
