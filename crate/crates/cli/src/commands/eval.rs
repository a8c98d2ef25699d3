use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rayon::prelude::*;
use vosground::io::{read_attributes, read_mask_set, read_tracks, MaskSet};
use vosground::metrics::report::{round_real, ReportDocument, ReportValue};
use vosground::metrics::{
    attribute_breakdown, auc_success, evaluate_masks, mean, track_iou_series, EvalReport,
};
use vosground::{Mask, QueryKey, Track};

use super::{read_text, require_paths, usage, warn_all, Outputs};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Ground-truth boxes (box mode).
    #[arg(long, requires = "tracks")]
    pub gt_boxes: Option<PathBuf>,
    /// Predicted tracks (box mode).
    #[arg(long, requires = "gt_boxes")]
    pub tracks: Option<PathBuf>,
    /// Ground-truth mask directory (mask mode).
    #[arg(long, requires = "pred_masks")]
    pub gt_masks: Option<PathBuf>,
    /// Predicted mask directory (mask mode).
    #[arg(long, requires = "gt_masks")]
    pub pred_masks: Option<PathBuf>,
    /// Query attributes for the breakdown tables.
    #[arg(long)]
    pub attrs: Option<PathBuf>,
    /// Boundary tolerance in pixels (default: 0.8% of the image diagonal).
    #[arg(long)]
    pub f_tol: Option<usize>,
    /// Output directory for report.txt and report.json.
    #[arg(long)]
    pub out: PathBuf,
}

type Row = Vec<(&'static str, ReportValue)>;

/// Per-query rows plus the value fed into the attribute breakdown.
struct QueryResult {
    key: QueryKey,
    rows: Row,
    headline: f64,
}

fn box_results(gt_path: &Path, pred_path: &Path) -> anyhow::Result<Vec<QueryResult>> {
    let (gt, w) = read_tracks(&read_text(gt_path)?)?;
    warn_all(gt_path, &w);
    let (pred, w) = read_tracks(&read_text(pred_path)?)?;
    warn_all(pred_path, &w);
    if let Some(k) = pred.keys().find(|k| !gt.contains_key(k)) {
        bail!("no ground truth for predicted query {k}");
    }
    for k in gt.keys().filter(|k| !pred.contains_key(k)) {
        eprintln!("warning: no prediction for {k}; scored as an empty track");
    }
    gt.par_iter()
        .map(|(key, g)| {
            let p = pred
                .get(key)
                .cloned()
                .unwrap_or_else(|| Track::empty(&key.video, &key.query, g.num_frames()));
            let ious = track_iou_series(&p, g.entries()).with_context(|| key.to_string())?;
            let miou = round_real(mean(ious.values()));
            let auc = round_real(auc_success(&ious)?);
            Ok(QueryResult {
                key: key.clone(),
                rows: vec![
                    ("frames", ious.len().into()),
                    ("miou", miou.into()),
                    ("auc", auc.into()),
                ],
                headline: miou,
            })
        })
        .collect()
}

fn aligned(
    key: &QueryKey,
    gt: &BTreeMap<u32, Mask>,
    pred: Option<&BTreeMap<u32, Mask>>,
) -> anyhow::Result<Vec<Mask>> {
    if let Some(p) = pred {
        if let Some(f) = p.keys().find(|f| !gt.contains_key(f)) {
            bail!("{key}: predicted frame {f} has no ground truth");
        }
    }
    gt.iter()
        .map(|(f, g)| match pred.and_then(|p| p.get(f)) {
            Some(m) => Ok(m.clone()),
            None => {
                if pred.is_some() {
                    eprintln!("warning: {key}: no prediction for frame {f}; using an empty mask");
                }
                Ok(Mask::empty(g.height(), g.width())?)
            }
        })
        .collect()
}

fn mask_rows(r: &EvalReport) -> Row {
    vec![
        ("frames", r.j_series.len().into()),
        ("j_mean", round_real(r.j.mean).into()),
        ("j_recall", round_real(r.j.recall).into()),
        ("j_decay", round_real(r.j.decay).into()),
        ("f_mean", round_real(r.f.mean).into()),
        ("f_recall", round_real(r.f.recall).into()),
        ("f_decay", round_real(r.f.decay).into()),
        ("t_proxy", r.t_proxy.map(round_real).into()),
        ("jf", round_real(r.jf).into()),
    ]
}

fn mask_results(
    gt: &MaskSet,
    pred: &MaskSet,
    tol: Option<usize>,
) -> anyhow::Result<Vec<QueryResult>> {
    if let Some(k) = pred.keys().find(|k| !gt.contains_key(k)) {
        bail!("no ground truth for predicted query {k}");
    }
    for k in gt.keys().filter(|k| !pred.contains_key(k)) {
        eprintln!("warning: no prediction for {k}; scored as empty masks");
    }
    gt.par_iter()
        .map(|(key, g)| {
            let p = aligned(key, g, pred.get(key))?;
            let g: Vec<Mask> = g.values().cloned().collect();
            let r = evaluate_masks(&p, &g, tol).with_context(|| key.to_string())?;
            Ok(QueryResult {
                key: key.clone(),
                headline: round_real(r.jf),
                rows: mask_rows(&r),
            })
        })
        .collect()
}

/// Aggregate of each per-query row: counts are summed, reals averaged over
/// the queries that have them.
fn aggregate(results: &[QueryResult]) -> Row {
    let Some(first) = results.first() else {
        return Vec::new();
    };
    first
        .rows
        .iter()
        .enumerate()
        .map(|(i, (name, v))| {
            let column = results.iter().map(|r| &r.rows[i].1);
            let value = match v {
                ReportValue::Count(_) => ReportValue::Count(
                    column
                        .map(|v| if let ReportValue::Count(n) = v { *n } else { 0 })
                        .sum(),
                ),
                _ => {
                    let xs: Vec<f64> = column
                        .filter_map(|v| {
                            if let ReportValue::Real(x) = v {
                                Some(*x)
                            } else {
                                None
                            }
                        })
                        .collect();
                    if xs.is_empty() {
                        ReportValue::Missing
                    } else {
                        ReportValue::Real(mean(&xs))
                    }
                }
            };
            (*name, value)
        })
        .collect()
}

pub fn run(a: Args) -> anyhow::Result<()> {
    let inputs = [&a.gt_boxes, &a.tracks, &a.gt_masks, &a.pred_masks, &a.attrs];
    require_paths(inputs.iter().filter_map(|p| p.as_deref()))?;

    let (mode, headline, results) = match (&a.gt_boxes, &a.tracks, &a.gt_masks, &a.pred_masks) {
        (Some(g), Some(p), None, None) => ("boxes", "miou", box_results(g, p)?),
        (None, None, Some(g), Some(p)) => {
            let gt = read_mask_set(g).with_context(|| format!("reading {}", g.display()))?;
            let pred = read_mask_set(p).with_context(|| format!("reading {}", p.display()))?;
            ("masks", "jf", mask_results(&gt, &pred, a.f_tol)?)
        }
        (None, None, None, None) => {
            return Err(usage(
                "give --gt-boxes with --tracks, or --gt-masks with --pred-masks",
            ))
        }
        _ => return Err(usage("box mode and mask mode cannot be combined")),
    };
    if results.is_empty() {
        bail!("no ground-truth queries to evaluate");
    }

    let mut doc = ReportDocument::new();
    {
        let s = doc.section("aggregate");
        s.put("mode", mode).put("queries", results.len());
        for (name, v) in aggregate(&results) {
            s.put(name, v);
        }
    }
    if let Some(path) = &a.attrs {
        let (attrs, w) = read_attributes(&read_text(path)?)?;
        warn_all(path, &w);
        let metric: BTreeMap<QueryKey, f64> = results
            .iter()
            .map(|r| (r.key.clone(), r.headline))
            .collect();
        let table = attribute_breakdown(&metric, &attrs)?;
        let s = doc.section(format!("breakdown {headline}"));
        for (value, m) in table {
            s.put(value.to_string(), m);
        }
    }
    for r in &results {
        let s = doc.section(format!("query {}", r.key));
        for (name, v) in &r.rows {
            s.put(*name, v.clone());
        }
    }

    let mut out = Outputs::default();
    out.add("report.txt", doc.to_text());
    out.add("report.json", doc.to_json());
    out.commit(&a.out)?;
    let agg = doc.find("aggregate").and_then(|s| s.get(headline)).cloned();
    if let Some(ReportValue::Real(x)) = agg {
        println!("{headline} = {}", vosground::metrics::report::fmt_real(x));
    }
    Ok(())
}
