//! File formats: JSON Lines records (proposals, tracks, scores, corpora,
//! attributes) and on-disk mask sets.
//!
//! Readers return the parsed data together with warnings for fields they do
//! not recognise. Malformed lines are errors carrying the 1-based line number.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exprstats::QueryRecord;
use crate::geom::{read_pbm, rle_decode, rle_encode, write_pbm, BBox, Mask, RleMask};
use crate::metrics::QueryAttributes;
use crate::rerank::{Proposal, QueryKey, ScoredVideo, Track, VideoProposals};

/// Parsed rows with their line numbers, plus warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Jsonl<T> {
    pub rows: Vec<(usize, T)>,
    pub warnings: Vec<String>,
}

/// Parses one JSON object per non-blank line. Keys outside `known` produce a
/// warning and are dropped before deserialization.
pub fn parse_jsonl<T: DeserializeOwned>(text: &str, known: &[&str]) -> Result<Jsonl<T>> {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw)
            .map_err(|e| Error::parse(line, format!("malformed JSON: {e}")))?;
        let Value::Object(mut obj) = value else {
            return Err(Error::parse(line, "expected a JSON object"));
        };
        let unknown: Vec<String> = obj
            .keys()
            .filter(|k| !known.contains(&k.as_str()))
            .cloned()
            .collect();
        for k in unknown {
            warnings.push(format!("line {line}: unknown field `{k}` ignored"));
            obj.remove(&k);
        }
        let row = serde_json::from_value(Value::Object(obj))
            .map_err(|e| Error::parse(line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(Jsonl { rows, warnings })
}

fn to_line<T: Serialize>(row: &T) -> String {
    let mut s = serde_json::to_string(row).expect("record serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProposalRow {
    pub video: String,
    pub query: String,
    pub frame: u32,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub score: f64,
    pub objectness: f64,
    pub id: u32,
}

const PROPOSAL_FIELDS: &[&str] = &[
    "video",
    "query",
    "frame",
    "x",
    "y",
    "w",
    "h",
    "score",
    "objectness",
    "id",
];

/// Groups proposals by (video, query). A video's frame count is the largest
/// frame index seen for that query.
pub fn read_proposals(text: &str) -> Result<(Vec<VideoProposals>, Vec<String>)> {
    let parsed: Jsonl<ProposalRow> = parse_jsonl(text, PROPOSAL_FIELDS)?;
    if parsed.rows.is_empty() {
        return Err(Error::Invalid("no proposals".into()));
    }
    let mut groups: BTreeMap<QueryKey, Vec<Proposal>> = BTreeMap::new();
    for (line, r) in parsed.rows {
        let bbox = BBox::new(r.x, r.y, r.w, r.h).map_err(|e| Error::parse(line, e.to_string()))?;
        let p = Proposal::new(r.frame, bbox, r.score, r.objectness, r.id)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        groups
            .entry(QueryKey::new(r.video, r.query))
            .or_default()
            .push(p);
    }
    let videos = groups
        .into_iter()
        .map(|(key, ps)| {
            let n = ps.iter().map(|p| p.frame).max().unwrap_or(0);
            VideoProposals::new(&key.video, &key.query, n, ps)
                .map_err(|e| Error::Invalid(format!("{key}: {e}")))
        })
        .collect::<Result<_>>()?;
    Ok((videos, parsed.warnings))
}

pub fn write_proposals(vp: &VideoProposals) -> String {
    vp.proposals()
        .map(|p| {
            to_line(&ProposalRow {
                video: vp.video_id.clone(),
                query: vp.query_id.clone(),
                frame: p.frame,
                x: p.bbox.x(),
                y: p.bbox.y(),
                w: p.bbox.w(),
                h: p.bbox.h(),
                score: p.score,
                objectness: p.objectness,
                id: p.id,
            })
        })
        .collect()
}

/// One frame of a track or of a ground-truth box sequence. Absent boxes have
/// all four coordinates `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRow {
    pub video: String,
    pub query: String,
    pub frame: u32,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub w: Option<f64>,
    pub h: Option<f64>,
}

const BOX_FIELDS: &[&str] = &["video", "query", "frame", "x", "y", "w", "h"];

/// Reads tracks or ground-truth boxes. Frames without a row are absent; a
/// track's length is its largest frame index.
pub fn read_tracks(text: &str) -> Result<(BTreeMap<QueryKey, Track>, Vec<String>)> {
    let parsed: Jsonl<BoxRow> = parse_jsonl(text, BOX_FIELDS)?;
    let mut tracks: BTreeMap<QueryKey, Track> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (line, r) in parsed.rows {
        if r.frame == 0 {
            return Err(Error::parse(line, "frame indices start at 1"));
        }
        let key = QueryKey::new(&r.video, &r.query);
        if !seen.insert((key.clone(), r.frame)) {
            return Err(Error::parse(
                line,
                format!("duplicate frame {} for {key}", r.frame),
            ));
        }
        let b = match (r.x, r.y, r.w, r.h) {
            (Some(x), Some(y), Some(w), Some(h)) => {
                Some(BBox::new(x, y, w, h).map_err(|e| Error::parse(line, e.to_string()))?)
            }
            (None, None, None, None) => None,
            _ => {
                return Err(Error::parse(
                    line,
                    "box coordinates must be all present or all null",
                ))
            }
        };
        tracks
            .entry(key)
            .or_insert_with(|| Track::empty(r.video, r.query, 0))
            .set(r.frame, b);
    }
    Ok((tracks, parsed.warnings))
}

/// One row per frame, absent frames included.
pub fn write_track(t: &Track) -> String {
    t.entries()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            to_line(&BoxRow {
                video: t.video_id.clone(),
                query: t.query_id.clone(),
                frame: i as u32 + 1,
                x: b.map(|b| b.x()),
                y: b.map(|b| b.y()),
                w: b.map(|b| b.w()),
                h: b.map(|b| b.h()),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub video: String,
    pub query: String,
    pub frame: u32,
    pub id: u32,
    pub score: f64,
    pub objectness: f64,
    pub new_score: f64,
}

pub fn write_scores(sv: &ScoredVideo) -> String {
    sv.frames
        .values()
        .flatten()
        .map(|p| {
            to_line(&ScoreRow {
                video: sv.video_id.clone(),
                query: sv.query_id.clone(),
                frame: p.proposal.frame,
                id: p.proposal.id,
                score: p.proposal.score,
                objectness: p.proposal.objectness,
                new_score: p.new_score,
            })
        })
        .collect()
}

const CORPUS_FIELDS: &[&str] = &[
    "video",
    "object",
    "annotator",
    "type",
    "text",
    "coco",
    "query",
    "invalid_over_time",
];

pub fn read_corpus(text: &str) -> Result<(Vec<QueryRecord>, Vec<String>)> {
    let parsed: Jsonl<QueryRecord> = parse_jsonl(text, CORPUS_FIELDS)?;
    let mut out = Vec::with_capacity(parsed.rows.len());
    for (line, r) in parsed.rows {
        r.validate()
            .map_err(|e| Error::parse(line, e.to_string()))?;
        out.push(r);
    }
    Ok((out, parsed.warnings))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRow {
    pub video: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator: Option<String>,
    pub query: String,
    #[serde(flatten)]
    pub attributes: QueryAttributes,
}

const ATTRIBUTE_FIELDS: &[&str] = &[
    "video",
    "object",
    "annotator",
    "query",
    "is_coco",
    "has_spatial",
    "has_verb",
    "length_bin",
    "num_objects_bin",
    "annotation_type",
];

pub fn write_attributes(rows: &[(QueryRecord, QueryAttributes)]) -> String {
    rows.iter()
        .map(|(q, a)| {
            to_line(&AttributeRow {
                video: q.video_id.clone(),
                object: Some(q.object_id.clone()),
                annotator: Some(q.annotator_id.clone()),
                query: q.query_id(),
                attributes: *a,
            })
        })
        .collect()
}

pub fn read_attributes(text: &str) -> Result<(BTreeMap<QueryKey, QueryAttributes>, Vec<String>)> {
    let parsed: Jsonl<AttributeRow> = parse_jsonl(text, ATTRIBUTE_FIELDS)?;
    let mut out = BTreeMap::new();
    for (line, r) in parsed.rows {
        let key = QueryKey::new(r.video, r.query);
        if out.contains_key(&key) {
            return Err(Error::parse(
                line,
                format!("duplicate attributes for {key}"),
            ));
        }
        out.insert(key, r.attributes);
    }
    Ok((out, parsed.warnings))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskFormat {
    Rle,
    Pbm,
}

impl MaskFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            MaskFormat::Rle => "rle",
            MaskFormat::Pbm => "pbm",
        }
    }

    pub fn encode(&self, m: &Mask) -> String {
        match self {
            MaskFormat::Rle => {
                let mut s = rle_encode(m).to_line();
                s.push('\n');
                s
            }
            MaskFormat::Pbm => write_pbm(m),
        }
    }

    pub fn decode(&self, text: &str) -> Result<Mask> {
        match self {
            MaskFormat::Rle => {
                let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
                rle_decode(&RleMask::parse_line(line)?)
            }
            MaskFormat::Pbm => read_pbm(text),
        }
    }
}

/// Masks keyed by query, then 1-based frame.
pub type MaskSet = BTreeMap<QueryKey, BTreeMap<u32, Mask>>;

/// Relative paths `<video>/<query>/<frame:05>.<ext>` and file contents.
pub fn encode_mask_set(set: &MaskSet, format: MaskFormat) -> Vec<(PathBuf, String)> {
    set.iter()
        .flat_map(|(key, frames)| {
            frames.iter().map(move |(f, m)| {
                let path = Path::new(&key.video)
                    .join(&key.query)
                    .join(format!("{f:05}.{}", format.extension()));
                (path, format.encode(m))
            })
        })
        .collect()
}

fn sorted_entries(dir: &Path) -> Result<Vec<fs::DirEntry>> {
    let mut entries = fs::read_dir(dir)?.collect::<std::io::Result<Vec<_>>>()?;
    entries.sort_by_key(|e| e.file_name());
    Ok(entries)
}

/// Reads a mask set laid out as by [`encode_mask_set`]. Files with other
/// extensions are skipped.
pub fn read_mask_set(root: &Path) -> Result<MaskSet> {
    let mut set = MaskSet::new();
    for video in sorted_entries(root)? {
        if !video.file_type()?.is_dir() {
            continue;
        }
        for query in sorted_entries(&video.path())? {
            if !query.file_type()?.is_dir() {
                continue;
            }
            let key = QueryKey::new(
                video.file_name().to_string_lossy(),
                query.file_name().to_string_lossy(),
            );
            let mut frames = BTreeMap::new();
            for file in sorted_entries(&query.path())? {
                let path = file.path();
                let format = match path.extension().and_then(|e| e.to_str()) {
                    Some("rle") => MaskFormat::Rle,
                    Some("pbm") => MaskFormat::Pbm,
                    _ => continue,
                };
                let frame: u32 = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .and_then(|s| s.parse().ok())
                    .filter(|&f| f >= 1)
                    .ok_or_else(|| {
                        Error::Invalid(format!(
                            "{}: file name is not a frame number",
                            path.display()
                        ))
                    })?;
                let text = fs::read_to_string(&path)?;
                let mask = format
                    .decode(&text)
                    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                if frames.insert(frame, mask).is_some() {
                    return Err(Error::Invalid(format!("{key}: frame {frame} stored twice")));
                }
            }
            if !frames.is_empty() {
                set.insert(key, frames);
            }
        }
    }
    Ok(set)
}

/// Writes `files` below `root`, creating directories as needed.
pub fn write_files<P: AsRef<Path>, C: AsRef<[u8]>>(root: &Path, files: &[(P, C)]) -> Result<()> {
    for (rel, contents) in files {
        let path = root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, contents)?;
    }
    Ok(())
}
