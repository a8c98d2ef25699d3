use super::flow::{synth_flow, FlowField};
use super::rng::{domain, DrawStream};
use crate::error::{Error, Result};
use crate::geom::{box_from_mask, warp_mask, AffineTransform, BBox, Mask};

/// One rectangle and the affine motion applied to it between frames.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSpec {
    pub initial: BBox,
    pub motion: AffineTransform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub num_frames: u32,
    pub objects: Vec<ObjectSpec>,
    pub background: AffineTransform,
    pub seed: u64,
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Invalid("scene dimensions must be positive".into()));
        }
        if self.num_frames == 0 {
            return Err(Error::Invalid("num_frames must be at least 1".into()));
        }
        for (k, o) in self.objects.iter().enumerate() {
            let b = o.initial;
            if b.x() < 0.0
                || b.y() < 0.0
                || b.right() > self.width as f64
                || b.bottom() > self.height as f64
            {
                return Err(Error::Invalid(format!(
                    "object {k}: initial box ({}, {}, {}, {}) leaves the {}x{} image",
                    b.x(),
                    b.y(),
                    b.w(),
                    b.h(),
                    self.width,
                    self.height
                )));
            }
        }
        Ok(())
    }

    /// Random translating rectangles: sides 15–35% of the image, per-frame
    /// translation up to `max_translation` times the image size per axis.
    pub fn random(
        width: usize,
        height: usize,
        num_frames: u32,
        num_objects: usize,
        max_translation: f64,
        seed: u64,
    ) -> Result<Self> {
        let (fw, fh) = (width as f64, height as f64);
        let objects = (0..num_objects)
            .map(|k| {
                let mut s = DrawStream::new(seed, &[domain::SCENE, k as u64]);
                let w = (s.uniform(0.15, 0.35) * fw).round().max(1.0).min(fw);
                let h = (s.uniform(0.15, 0.35) * fh).round().max(1.0).min(fh);
                let x = s.uniform(0.0, fw - w).round();
                let y = s.uniform(0.0, fh - h).round();
                let dx = s.uniform(-max_translation, max_translation) * fw;
                let dy = s.uniform(-max_translation, max_translation) * fh;
                Ok(ObjectSpec {
                    initial: BBox::new(x, y, w, h)?,
                    motion: AffineTransform::translation(dx, dy),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = Self {
            width,
            height,
            num_frames,
            objects,
            background: AffineTransform::identity(),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Ground truth of one object over the whole scene.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectGt {
    /// One mask per frame, frame 1 first.
    pub masks: Vec<Mask>,
    /// `None` where the object has left the image.
    pub boxes: Vec<Option<BBox>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneGt {
    pub width: usize,
    pub height: usize,
    pub num_frames: u32,
    pub objects: Vec<ObjectGt>,
}

/// Rasterizes every object and warps it by its cumulative motion; frame 1 is
/// the initial rectangle.
pub fn generate_scene(spec: &SceneSpec) -> Result<SceneGt> {
    spec.validate()?;
    let objects = spec
        .objects
        .iter()
        .map(|o| {
            let initial = Mask::from_box(spec.height, spec.width, &o.initial)?;
            let mut masks = Vec::with_capacity(spec.num_frames as usize);
            let mut acc = AffineTransform::identity();
            for t in 0..spec.num_frames {
                if t > 0 {
                    acc = acc.then(&o.motion);
                }
                masks.push(warp_mask(&initial, &acc)?);
            }
            let boxes = masks.iter().map(box_from_mask).collect();
            Ok(ObjectGt { masks, boxes })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SceneGt {
        width: spec.width,
        height: spec.height,
        num_frames: spec.num_frames,
        objects,
    })
}

/// Forward flow from 1-based `frame` to the next: each object's pixels move
/// with its motion, the rest with the background motion.
pub fn scene_flow(spec: &SceneSpec, gt: &SceneGt, frame: u32) -> Result<FlowField> {
    let idx = frame
        .checked_sub(1)
        .filter(|&i| i < gt.num_frames)
        .ok_or_else(|| Error::Invalid(format!("frame {frame} outside 1..={}", gt.num_frames)))?
        as usize;
    let mut flow = synth_flow(
        &Mask::empty(spec.height, spec.width)?,
        &AffineTransform::identity(),
        &spec.background,
    );
    for (o, g) in spec.objects.iter().zip(&gt.objects) {
        let obj = synth_flow(&g.masks[idx], &o.motion, &spec.background);
        let merged = flow
            .data()
            .iter()
            .zip(obj.data())
            .zip(g.masks[idx].bits())
            .map(|((bg, fg), &inside)| if inside { *fg } else { *bg })
            .collect();
        flow = FlowField::from_vec(spec.width, spec.height, merged)?;
    }
    Ok(flow)
}
