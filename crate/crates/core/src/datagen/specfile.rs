//! Flat `key = value` spec files (`#` starts a comment).
//!
//! Scene keys: `width`, `height`, `num_frames`, `scenes`, `seed`,
//! `random_objects`, `max_translation`, `background` (six affine
//! coefficients `a b tx c d ty`) and the repeatable `object`
//! (`x y w h`, optionally followed by `dx dy` or by six affine coefficients).
//!
//! Corruption keys: `distractors_per_frame`, `score_noise_sd`,
//! `id_switch_prob`, `box_jitter_fraction`, `fixed_distractors`, `seed`.

use std::str::FromStr;

use super::proposals::CorruptionSpec;
use super::rng::child_seed;
use super::scene::{ObjectSpec, SceneSpec};
use crate::error::{Error, Result};
use crate::geom::{AffineTransform, BBox};

/// `(line number, key, value)` triples in file order.
pub fn parse_kv(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::parse(i + 1, format!("expected `key = value`, found `{line}`"))
        })?;
        let key = k.trim();
        if key.is_empty() {
            return Err(Error::parse(i + 1, "empty key"));
        }
        out.push((i + 1, key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::spec_key(key, format!("cannot parse `{v}`")))
}

fn numbers(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split_whitespace().map(|t| value::<f64>(key, t)).collect()
}

fn affine(key: &str, c: &[f64]) -> Result<AffineTransform> {
    AffineTransform::new(c[0], c[1], c[2], c[3], c[4], c[5])
        .map_err(|e| Error::spec_key(key, e.to_string()))
}

/// Scene template plus sweep parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub width: usize,
    pub height: usize,
    pub num_frames: u32,
    pub scenes: usize,
    pub seed: u64,
    /// Used when no explicit `object` lines are given.
    pub random_objects: usize,
    pub max_translation: f64,
    pub background: AffineTransform,
    pub objects: Vec<ObjectSpec>,
}

impl Default for SimulationSpec {
    fn default() -> Self {
        Self {
            width: 128,
            height: 96,
            num_frames: 30,
            scenes: 1,
            seed: 0,
            random_objects: 1,
            max_translation: 0.02,
            background: AffineTransform::identity(),
            objects: Vec::new(),
        }
    }
}

impl SimulationSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (_, key, v) in parse_kv(text)? {
            match key.as_str() {
                "width" => spec.width = value(&key, &v)?,
                "height" => spec.height = value(&key, &v)?,
                "num_frames" => spec.num_frames = value(&key, &v)?,
                "scenes" => spec.scenes = value(&key, &v)?,
                "seed" => spec.seed = value(&key, &v)?,
                "random_objects" => spec.random_objects = value(&key, &v)?,
                "max_translation" => spec.max_translation = value(&key, &v)?,
                "background" => {
                    let c = numbers(&key, &v)?;
                    if c.len() != 6 {
                        return Err(Error::spec_key(&key, "expected six coefficients"));
                    }
                    spec.background = affine(&key, &c)?;
                }
                "object" => {
                    let c = numbers(&key, &v)?;
                    let motion = match c.len() {
                        4 => AffineTransform::identity(),
                        6 => AffineTransform::translation(c[4], c[5]),
                        10 => affine(&key, &c[4..])?,
                        n => {
                            return Err(Error::spec_key(
                                &key,
                                format!("expected 4, 6 or 10 numbers, found {n}"),
                            ))
                        }
                    };
                    let initial = BBox::new(c[0], c[1], c[2], c[3])
                        .map_err(|e| Error::spec_key(&key, e.to_string()))?;
                    spec.objects.push(ObjectSpec { initial, motion });
                }
                _ => return Err(Error::spec_key(&key, "unknown key")),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::spec_key(
                "width",
                "image dimensions must be positive",
            ));
        }
        if self.num_frames == 0 {
            return Err(Error::spec_key("num_frames", "must be at least 1"));
        }
        if self.scenes == 0 {
            return Err(Error::spec_key("scenes", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.max_translation) {
            return Err(Error::spec_key("max_translation", "must lie in [0, 1]"));
        }
        if self.objects.is_empty() && self.random_objects == 0 {
            return Err(Error::spec_key("random_objects", "scene has no objects"));
        }
        self.scene(0).map(|_| ())
    }

    /// Concrete scene `index` of the sweep. Explicit objects are shared by all
    /// scenes; otherwise objects are drawn from a per-scene seed.
    pub fn scene(&self, index: usize) -> Result<SceneSpec> {
        let seed = child_seed(self.seed, &[index as u64]);
        let spec = if self.objects.is_empty() {
            let mut s = SceneSpec::random(
                self.width,
                self.height,
                self.num_frames,
                self.random_objects,
                self.max_translation,
                seed,
            )?;
            s.background = self.background;
            s
        } else {
            SceneSpec {
                width: self.width,
                height: self.height,
                num_frames: self.num_frames,
                objects: self.objects.clone(),
                background: self.background,
                seed,
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn parse_corruption(text: &str) -> Result<CorruptionSpec> {
    let mut c = CorruptionSpec::default();
    for (_, key, v) in parse_kv(text)? {
        match key.as_str() {
            "distractors_per_frame" => c.distractors_per_frame = value(&key, &v)?,
            "score_noise_sd" => c.score_noise_sd = value(&key, &v)?,
            "id_switch_prob" => c.id_switch_prob = value(&key, &v)?,
            "box_jitter_fraction" => c.box_jitter_fraction = value(&key, &v)?,
            "fixed_distractors" => c.fixed_distractors = value(&key, &v)?,
            "seed" => c.seed = value(&key, &v)?,
            _ => return Err(Error::spec_key(&key, "unknown key")),
        }
    }
    c.validate()
        .map_err(|e| Error::spec_key("corruption", e.to_string()))?;
    Ok(c)
}
