//! Referring-expression corpora: tokenization, attribute tagging and
//! per-annotation-type statistics.
//!
//! Verb and spatial detection is a plain lexicon lookup. The bundled word
//! lists live in `lexicons/spatial.txt` and `lexicons/verbs.txt` next to this
//! crate and can be replaced at run time.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{AnnotationType, LengthBin, NumObjectsBin, QueryAttributes};
use crate::rerank::QueryKey;

const BUNDLED_SPATIAL: &str = include_str!("../lexicons/spatial.txt");
const BUNDLED_VERBS: &str = include_str!("../lexicons/verbs.txt");

/// Small invented corpus used by the `stats` examples and tests.
pub const SAMPLE_CORPUS: &str = include_str!("../data/sample_corpus.jsonl");

/// Mean expression length in words reported for the full annotated dataset.
/// Only for side-by-side display; local corpora are not expected to match.
pub const REFERENCE_MEAN_TOKENS: [(AnnotationType, f64); 2] = [
    (AnnotationType::FirstFrame, 5.5),
    (AnnotationType::FullVideo, 6.3),
];

/// Lowercased alphanumeric runs.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// One referring expression as stored in a corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    #[serde(rename = "video")]
    pub video_id: String,
    #[serde(rename = "object")]
    pub object_id: String,
    #[serde(rename = "annotator")]
    pub annotator_id: String,
    #[serde(rename = "type")]
    pub annotation_type: AnnotationType,
    pub text: String,
    #[serde(rename = "coco", default)]
    pub is_coco: bool,
    /// Explicit query id; derived from object, annotator and type when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    /// Carried through untouched; never inferred.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invalid_over_time: Option<bool>,
}

impl QueryRecord {
    pub fn new(
        video_id: impl Into<String>,
        object_id: impl Into<String>,
        annotator_id: impl Into<String>,
        annotation_type: AnnotationType,
        text: impl Into<String>,
    ) -> Result<Self> {
        let r = Self {
            video_id: video_id.into(),
            object_id: object_id.into(),
            annotator_id: annotator_id.into(),
            annotation_type,
            text: text.into(),
            is_coco: false,
            query: None,
            invalid_over_time: None,
        };
        r.validate()?;
        Ok(r)
    }

    /// Text must contain at least one token.
    pub fn validate(&self) -> Result<()> {
        if tokenize(&self.text).is_empty() {
            return Err(Error::Invalid(format!(
                "expression for {} has no words",
                self.key()
            )));
        }
        Ok(())
    }

    pub fn query_id(&self) -> String {
        match &self.query {
            Some(q) => q.clone(),
            None => format!(
                "{}-{}-{}",
                self.object_id,
                self.annotator_id,
                self.annotation_type.as_str()
            ),
        }
    }

    pub fn key(&self) -> QueryKey {
        QueryKey::new(&self.video_id, self.query_id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicons {
    spatial_words: BTreeSet<String>,
    verb_words: BTreeSet<String>,
}

fn word_list(text: &str, what: &str) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks = tokenize(line);
        if toks.len() != 1 {
            return Err(Error::parse(
                i + 1,
                format!("{what} lexicon entries must be single words, found `{line}`"),
            ));
        }
        out.extend(toks);
    }
    if out.is_empty() {
        return Err(Error::Invalid(format!("{what} lexicon is empty")));
    }
    Ok(out)
}

impl Lexicons {
    /// One word per line, `#` comments allowed; entries are lowercased.
    pub fn from_texts(spatial: &str, verbs: &str) -> Result<Self> {
        Ok(Self {
            spatial_words: word_list(spatial, "spatial")?,
            verb_words: word_list(verbs, "verb")?,
        })
    }

    pub fn bundled() -> Self {
        Self::from_texts(BUNDLED_SPATIAL, BUNDLED_VERBS).expect("bundled lexicons are valid")
    }

    pub fn spatial_words(&self) -> &BTreeSet<String> {
        &self.spatial_words
    }

    pub fn verb_words(&self) -> &BTreeSet<String> {
        &self.verb_words
    }

    pub fn is_spatial(&self, token: &str) -> bool {
        self.spatial_words.contains(token)
    }

    pub fn is_verb(&self, token: &str) -> bool {
        self.verb_words.contains(token)
    }
}

impl Default for Lexicons {
    fn default() -> Self {
        Self::bundled()
    }
}

pub fn tag_query(
    q: &QueryRecord,
    lex: &Lexicons,
    num_objects_in_video: usize,
) -> Result<QueryAttributes> {
    let tokens = tokenize(&q.text);
    if tokens.is_empty() {
        return Err(Error::Invalid(format!(
            "expression for {} has no words",
            q.key()
        )));
    }
    Ok(QueryAttributes {
        is_coco: q.is_coco,
        has_spatial: tokens.iter().any(|t| lex.is_spatial(t)),
        has_verb: tokens.iter().any(|t| lex.is_verb(t)),
        length_bin: LengthBin::from_token_count(tokens.len()),
        num_objects_bin: NumObjectsBin::from_count(num_objects_in_video),
        annotation_type: q.annotation_type,
    })
}

/// Distinct object ids per video.
pub fn objects_per_video(qs: &[QueryRecord]) -> BTreeMap<String, usize> {
    let mut sets: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for q in qs {
        sets.entry(&q.video_id).or_default().insert(&q.object_id);
    }
    sets.into_iter()
        .map(|(v, s)| (v.to_string(), s.len()))
        .collect()
}

/// Tags every record, counting objects per video over the whole corpus.
/// Duplicate query keys are rejected.
pub fn tag_corpus(
    qs: &[QueryRecord],
    lex: &Lexicons,
) -> Result<BTreeMap<QueryKey, QueryAttributes>> {
    let counts = objects_per_video(qs);
    let mut out = BTreeMap::new();
    for q in qs {
        let attrs = tag_query(q, lex, counts[&q.video_id])?;
        let key = q.key();
        if out.insert(key.clone(), attrs).is_some() {
            return Err(Error::Invalid(format!("duplicate query {key}")));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupStats {
    pub count: usize,
    pub mean_tokens: f64,
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub verb_fraction: f64,
    pub spatial_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    /// Only annotation types present in the corpus appear.
    pub groups: BTreeMap<AnnotationType, GroupStats>,
    pub total: usize,
    pub spatial_fraction: f64,
}

pub fn corpus_stats(qs: &[QueryRecord], lex: &Lexicons) -> Result<CorpusStats> {
    if qs.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let mut by_type: BTreeMap<AnnotationType, Vec<(usize, bool, bool)>> = BTreeMap::new();
    for q in qs {
        let tokens = tokenize(&q.text);
        if tokens.is_empty() {
            return Err(Error::Invalid(format!(
                "expression for {} has no words",
                q.key()
            )));
        }
        let verb = tokens.iter().any(|t| lex.is_verb(t));
        let spatial = tokens.iter().any(|t| lex.is_spatial(t));
        by_type
            .entry(q.annotation_type)
            .or_default()
            .push((tokens.len(), verb, spatial));
    }
    let frac = |n: usize, d: usize| n as f64 / d as f64;
    let mut spatial_total = 0;
    let groups = by_type
        .into_iter()
        .map(|(t, rows)| {
            let n = rows.len();
            let verbs = rows.iter().filter(|r| r.1).count();
            let spatial = rows.iter().filter(|r| r.2).count();
            spatial_total += spatial;
            let stats = GroupStats {
                count: n,
                mean_tokens: frac(rows.iter().map(|r| r.0).sum(), n),
                min_tokens: rows.iter().map(|r| r.0).min().unwrap_or(0),
                max_tokens: rows.iter().map(|r| r.0).max().unwrap_or(0),
                verb_fraction: frac(verbs, n),
                spatial_fraction: frac(spatial, n),
            };
            (t, stats)
        })
        .collect();
    Ok(CorpusStats {
        groups,
        total: qs.len(),
        spatial_fraction: frac(spatial_total, qs.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(video: &str, object: &str, t: AnnotationType, text: &str) -> QueryRecord {
        QueryRecord::new(video, object, "a1", t, text).unwrap()
    }

    #[test]
    fn tokenizer_examples() {
        assert_eq!(
            tokenize("A man in a red sweatshirt"),
            ["a", "man", "in", "a", "red", "sweatshirt"]
        );
        assert_eq!(
            tokenize("black-and-white dog"),
            ["black", "and", "white", "dog"]
        );
        assert!(tokenize("  --  ").is_empty());
        assert!(QueryRecord::new("v", "1", "a", AnnotationType::FirstFrame, "").is_err());
    }

    #[test]
    fn length_bins() {
        let lex = Lexicons::bundled();
        let short = rec("v", "1", AnnotationType::FirstFrame, "a red car");
        assert_eq!(
            tag_query(&short, &lex, 1).unwrap().length_bin,
            LengthBin::Short
        );
        let long = rec(
            "v",
            "1",
            AnnotationType::FullVideo,
            "a man in a red sweatshirt performing breakdance",
        );
        let a = tag_query(&long, &lex, 4).unwrap();
        assert_eq!(a.length_bin, LengthBin::Long);
        assert!(a.has_verb);
        assert_eq!(a.num_objects_bin, NumObjectsBin::MoreThanThree);
    }

    #[test]
    fn spatial_flag() {
        let lex = Lexicons::from_texts("left\nright", "walking").unwrap();
        let q = rec("v", "1", AnnotationType::FirstFrame, "a woman on the left");
        let a = tag_query(&q, &lex, 2).unwrap();
        assert!(a.has_spatial);
        assert!(!a.has_verb);
        assert_eq!(a.length_bin, LengthBin::Medium);
        assert_eq!(a.num_objects_bin, NumObjectsBin::TwoToThree);
    }

    #[test]
    fn lexicon_parsing() {
        let lex = Lexicons::from_texts("# words\nLeft\n\nright # trailing\n", "Run").unwrap();
        assert!(lex.is_spatial("left"));
        assert!(lex.is_verb("run"));
        assert_eq!(lex.spatial_words().len(), 2);
        assert!(Lexicons::from_texts("# nothing\n", "run").is_err());
        assert!(Lexicons::from_texts("left of", "run").is_err());
    }

    #[test]
    fn stats_single_query() {
        let lex = Lexicons::bundled();
        let s = corpus_stats(
            &[rec(
                "v",
                "1",
                AnnotationType::FirstFrame,
                "one two three four five",
            )],
            &lex,
        )
        .unwrap();
        let g = &s.groups[&AnnotationType::FirstFrame];
        assert_eq!((g.count, g.mean_tokens), (1, 5.0));
        assert!(!s.groups.contains_key(&AnnotationType::FullVideo));
    }

    #[test]
    fn verb_fraction_half() {
        let lex = Lexicons::bundled();
        let s = corpus_stats(
            &[
                rec("v", "1", AnnotationType::FullVideo, "dog running"),
                rec("v", "2", AnnotationType::FullVideo, "brown dog"),
            ],
            &lex,
        )
        .unwrap();
        assert_eq!(s.groups[&AnnotationType::FullVideo].verb_fraction, 0.5);
        assert!(corpus_stats(&[], &lex).is_err());
    }

    #[test]
    fn query_ids_and_object_counts() {
        let mut a = rec("v", "1", AnnotationType::FirstFrame, "x");
        assert_eq!(a.query_id(), "1-a1-first_frame");
        a.query = Some("q7".into());
        assert_eq!(a.key(), QueryKey::new("v", "q7"));
        let qs = vec![
            rec("v", "1", AnnotationType::FirstFrame, "x"),
            rec("v", "2", AnnotationType::FirstFrame, "y"),
            rec("v", "2", AnnotationType::FullVideo, "y z"),
            rec("w", "1", AnnotationType::FirstFrame, "z"),
        ];
        let counts = objects_per_video(&qs);
        assert_eq!((counts["v"], counts["w"]), (2, 1));
        let tags = tag_corpus(&qs, &Lexicons::bundled()).unwrap();
        assert_eq!(tags.len(), 4);
        let dup = vec![qs[0].clone(), qs[0].clone()];
        assert!(tag_corpus(&dup, &Lexicons::bundled()).is_err());
    }

    #[test]
    fn bundled_sample_corpus_parses() {
        let qs: Vec<QueryRecord> = SAMPLE_CORPUS
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        let s = corpus_stats(&qs, &Lexicons::bundled()).unwrap();
        assert_eq!(s.total, qs.len());
        let ff = &s.groups[&AnnotationType::FirstFrame];
        let fv = &s.groups[&AnnotationType::FullVideo];
        assert_eq!(ff.count + fv.count, s.total);
        assert!(fv.mean_tokens > ff.mean_tokens);
        assert!(fv.verb_fraction > ff.verb_fraction);
    }

    proptest! {
        #[test]
        fn tokenize_idempotent(text in "\\PC{0,40}") {
            let once = tokenize(&text);
            prop_assert_eq!(tokenize(&once.join(" ")), once);
        }

        #[test]
        fn group_mean_within_range(lens in prop::collection::vec((1usize..12, any::<bool>()), 1..30)) {
            let qs: Vec<QueryRecord> = lens
                .iter()
                .enumerate()
                .map(|(i, &(n, ff))| {
                    let t = if ff { AnnotationType::FirstFrame } else { AnnotationType::FullVideo };
                    rec("v", &i.to_string(), t, &vec!["w"; n].join(" "))
                })
                .collect();
            let s = corpus_stats(&qs, &Lexicons::bundled()).unwrap();
            for g in s.groups.values() {
                prop_assert!(g.min_tokens as f64 <= g.mean_tokens + 1e-12);
                prop_assert!(g.mean_tokens <= g.max_tokens as f64 + 1e-12);
            }
        }

        #[test]
        fn tagging_is_pure(text in "[a-z ]{1,40}", n in 1usize..6) {
            prop_assume!(!tokenize(&text).is_empty());
            let lex = Lexicons::bundled();
            let q = rec("v", "1", AnnotationType::FullVideo, &text);
            prop_assert_eq!(tag_query(&q, &lex, n).unwrap(), tag_query(&q.clone(), &lex, n).unwrap());
        }
    }
}
