//! Geometric substrate: continuous boxes, discrete binary masks, affine
//! transforms and the two mask text formats (PBM and RLE).

mod affine;
mod bbox;
pub mod codec;
mod mask;

pub use affine::AffineTransform;
pub use bbox::{box_iou, BBox};
pub use codec::{read_pbm, rle_decode, rle_encode, write_pbm, RleMask};
pub use mask::{boundary_pixels, box_from_mask, dilate_chebyshev, mask_iou, warp_mask, Mask};
