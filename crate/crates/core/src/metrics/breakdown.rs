use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rerank::QueryKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationType {
    FirstFrame,
    FullVideo,
}

impl AnnotationType {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnnotationType::FirstFrame => "first_frame",
            AnnotationType::FullVideo => "full_video",
        }
    }
}

/// Expression length in tokens: Short `< 4`, Medium `4..=6`, Long `> 6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthBin {
    Short,
    Medium,
    Long,
}

impl LengthBin {
    pub fn from_token_count(n: usize) -> Self {
        match n {
            0..=3 => LengthBin::Short,
            4..=6 => LengthBin::Medium,
            _ => LengthBin::Long,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LengthBin::Short => "short",
            LengthBin::Medium => "medium",
            LengthBin::Long => "long",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NumObjectsBin {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2-3")]
    TwoToThree,
    #[serde(rename = ">3")]
    MoreThanThree,
}

impl NumObjectsBin {
    pub fn from_count(n: usize) -> Self {
        match n {
            0 | 1 => NumObjectsBin::One,
            2 | 3 => NumObjectsBin::TwoToThree,
            _ => NumObjectsBin::MoreThanThree,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            NumObjectsBin::One => "1",
            NumObjectsBin::TwoToThree => "2-3",
            NumObjectsBin::MoreThanThree => ">3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryAttributes {
    pub is_coco: bool,
    pub has_spatial: bool,
    pub has_verb: bool,
    pub length_bin: LengthBin,
    pub num_objects_bin: NumObjectsBin,
    pub annotation_type: AnnotationType,
}

impl QueryAttributes {
    /// Every attribute value this query carries, one per attribute.
    pub fn values(&self) -> [AttributeValue; 6] {
        [
            AttributeValue::Coco(self.is_coco),
            AttributeValue::Spatial(self.has_spatial),
            AttributeValue::Verb(self.has_verb),
            AttributeValue::Length(self.length_bin),
            AttributeValue::NumObjects(self.num_objects_bin),
            AttributeValue::Annotation(self.annotation_type),
        ]
    }
}

/// One cell of a breakdown table, e.g. "spatial" or "length:short".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttributeValue {
    Coco(bool),
    Spatial(bool),
    Verb(bool),
    Length(LengthBin),
    NumObjects(NumObjectsBin),
    Annotation(AnnotationType),
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Coco(true) => f.write_str("coco"),
            AttributeValue::Coco(false) => f.write_str("non_coco"),
            AttributeValue::Spatial(true) => f.write_str("spatial"),
            AttributeValue::Spatial(false) => f.write_str("non_spatial"),
            AttributeValue::Verb(true) => f.write_str("verb"),
            AttributeValue::Verb(false) => f.write_str("no_verb"),
            AttributeValue::Length(b) => write!(f, "length_{}", b.as_str()),
            AttributeValue::NumObjects(b) => write!(f, "objects_{}", b.as_str()),
            AttributeValue::Annotation(a) => write!(f, "annotation_{}", a.as_str()),
        }
    }
}

/// Mean metric per attribute value; values carried by no query are omitted.
/// Queries are folded in sorted key order.
pub fn attribute_breakdown(
    metrics: &BTreeMap<QueryKey, f64>,
    attrs: &BTreeMap<QueryKey, QueryAttributes>,
) -> Result<BTreeMap<AttributeValue, f64>> {
    let mut acc: BTreeMap<AttributeValue, (f64, usize)> = BTreeMap::new();
    for (key, &value) in metrics {
        let a = attrs
            .get(key)
            .ok_or_else(|| Error::MissingAttributes(key.to_string()))?;
        for v in a.values() {
            let slot = acc.entry(v).or_insert((0.0, 0));
            slot.0 += value;
            slot.1 += 1;
        }
    }
    Ok(acc
        .into_iter()
        .map(|(k, (sum, n))| (k, sum / n as f64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn attrs(coco: bool, len: LengthBin) -> QueryAttributes {
        QueryAttributes {
            is_coco: coco,
            has_spatial: false,
            has_verb: false,
            length_bin: len,
            num_objects_bin: NumObjectsBin::One,
            annotation_type: AnnotationType::FirstFrame,
        }
    }

    #[test]
    fn grouping() {
        let k1 = QueryKey::new("v", "a");
        let k2 = QueryKey::new("v", "b");
        let metrics = BTreeMap::from([(k1.clone(), 0.4), (k2.clone(), 0.6)]);
        let a = BTreeMap::from([
            (k1.clone(), attrs(true, LengthBin::Short)),
            (k2.clone(), attrs(true, LengthBin::Short)),
        ]);
        let out = attribute_breakdown(&metrics, &a).unwrap();
        assert!((out[&AttributeValue::Length(LengthBin::Short)] - 0.5).abs() < 1e-15);
        assert!(!out.contains_key(&AttributeValue::Length(LengthBin::Long)));
    }

    #[test]
    fn coco_split() {
        let k1 = QueryKey::new("v", "a");
        let k2 = QueryKey::new("w", "a");
        let metrics = BTreeMap::from([(k1.clone(), 0.8), (k2.clone(), 0.2)]);
        let a = BTreeMap::from([
            (k1, attrs(true, LengthBin::Short)),
            (k2, attrs(false, LengthBin::Long)),
        ]);
        let out = attribute_breakdown(&metrics, &a).unwrap();
        assert_eq!(out[&AttributeValue::Coco(true)], 0.8);
        assert_eq!(out[&AttributeValue::Coco(false)], 0.2);
        assert_eq!(out[&AttributeValue::Length(LengthBin::Long)], 0.2);
    }

    #[test]
    fn missing_attributes_names_query() {
        let metrics = BTreeMap::from([(QueryKey::new("vid", "q9"), 0.5)]);
        let err = attribute_breakdown(&metrics, &BTreeMap::new()).unwrap_err();
        assert!(err.to_string().contains("vid/q9"));
    }

    #[test]
    fn bins_are_exhaustive() {
        for n in 1..=20 {
            let expected = if n < 4 {
                LengthBin::Short
            } else if n <= 6 {
                LengthBin::Medium
            } else {
                LengthBin::Long
            };
            assert_eq!(LengthBin::from_token_count(n), expected);
        }
        assert_eq!(NumObjectsBin::from_count(1), NumObjectsBin::One);
        assert_eq!(NumObjectsBin::from_count(3), NumObjectsBin::TwoToThree);
        assert_eq!(NumObjectsBin::from_count(4), NumObjectsBin::MoreThanThree);
    }

    proptest! {
        #[test]
        fn means_are_convex(entries in proptest::collection::vec((0.0..=1.0f64, any::<bool>(), 0usize..10), 1..30)) {
            let mut metrics = BTreeMap::new();
            let mut a = BTreeMap::new();
            for (i, (m, coco, len)) in entries.iter().enumerate() {
                let k = QueryKey::new("v", format!("q{i}"));
                metrics.insert(k.clone(), *m);
                a.insert(k, attrs(*coco, LengthBin::from_token_count(*len)));
            }
            let out = attribute_breakdown(&metrics, &a).unwrap();
            for (value, mean) in out {
                let group: Vec<f64> = metrics.iter()
                    .filter(|(k, _)| a[*k].values().contains(&value))
                    .map(|(_, &m)| m)
                    .collect();
                let lo = group.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = group.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12);
            }
        }
    }
}
