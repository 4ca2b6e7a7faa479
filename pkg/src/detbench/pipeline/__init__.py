"""Image-modification pipeline: scaling, lossless recompression, tiling."""

from .raster import RasterImage, decode_png, drop_alpha, encode_png, load_image, recompress_lossless, save_image
from .resample import KERNEL_BACKEND, ScaleSpec, available_backends, scale_image, scaled_dim, scaled_dims
from .tiling import TileSpec, clip_annotations_to_tile, split_into_squares, tile_offsets
from .transforms import transform_annotations_scale

__all__ = [
    "RasterImage",
    "decode_png",
    "drop_alpha",
    "encode_png",
    "load_image",
    "recompress_lossless",
    "save_image",
    "KERNEL_BACKEND",
    "ScaleSpec",
    "available_backends",
    "scale_image",
    "scaled_dim",
    "scaled_dims",
    "TileSpec",
    "clip_annotations_to_tile",
    "split_into_squares",
    "tile_offsets",
    "transform_annotations_scale",
]
