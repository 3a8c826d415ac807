"""Grayscale rendering of sample groups and binary PGM output.

Both groups of a pair must be drawn on one shared :class:`RenderScale`.  The
default scale is the generator's theoretical ``mean +/- 3 sd``, not the data's
min/max: stretching each image to its own range would erase exactly the mean
shift the pictures are meant to show.
"""

import io
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError
from .ttest import SampleGroup

__all__ = [
    "GrayImage",
    "RenderScale",
    "render_group",
    "render_pair",
    "compose_pair",
    "encode_pgm",
    "write_pgm",
    "read_pgm",
]


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit row-major raster; 0 is black, 255 white."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ShapeError(f"image dimensions must be positive, got {self.width}x{self.height}")
        pixels = np.ascontiguousarray(self.pixels, dtype=np.uint8).reshape(-1)
        if pixels.shape[0] != self.width * self.height:
            raise ShapeError(
                f"{pixels.shape[0]} pixels do not fill a {self.width}x{self.height} image"
            )
        object.__setattr__(self, "pixels", pixels)

    def as_array(self):
        return self.pixels.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.pixels, other.pixels
        )


@dataclass(frozen=True)
class RenderScale:
    center: float = 0.0
    half_range: float = 3.0

    def __post_init__(self):
        if not self.half_range > 0:
            raise DomainError(f"half_range must be positive, got {self.half_range!r}")

    @classmethod
    def for_generator(cls, mean, sd):
        return cls(center=mean, half_range=3.0 * sd)


def _round_half_away(x):
    # x is already clamped to [0, 255]; np.rint would round half to even.
    lower = np.floor(x)
    return np.where(x - lower >= 0.5, lower + 1.0, lower)


def render_group(samples, width, height, scale=RenderScale()):
    """Map samples linearly onto 0..255 over ``center +/- half_range``, clamping outside."""
    values = samples.values if isinstance(samples, SampleGroup) else np.asarray(samples, float)
    if values.ndim != 1 or values.shape[0] != width * height:
        raise ShapeError(f"{values.size} samples cannot fill a {width}x{height} image")
    low = scale.center - scale.half_range
    levels = 255.0 * (values - low) / (2.0 * scale.half_range)
    levels = _round_half_away(np.clip(levels, 0.0, 255.0))
    return GrayImage(width, height, levels.astype(np.uint8))


def render_pair(a, b, width, height, scale=RenderScale()):
    """Render both groups of a pair on the same scale."""
    return render_group(a, width, height, scale), render_group(b, width, height, scale)


def compose_pair(left, right, separator_width=4):
    """Place two images side by side with a white gap between them."""
    if left.height != right.height:
        raise ShapeError(f"heights differ: {left.height} vs {right.height}")
    if separator_width < 0:
        raise ShapeError(f"separator_width must be >= 0, got {separator_width}")
    gap = np.full((left.height, separator_width), 255, dtype=np.uint8)
    canvas = np.hstack([left.as_array(), gap, right.as_array()])
    return GrayImage(canvas.shape[1], canvas.shape[0], canvas)


def encode_pgm(image):
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def write_pgm(image, destination):
    """Write ``image`` as binary PGM to a path or binary file object.

    Returns the number of bytes written.
    """
    data = encode_pgm(image)
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "wb") as fh:
            fh.write(data)
    else:
        destination.write(data)
    return len(data)


def read_pgm(source):
    """Read a binary PGM (P5, maxval 255) written by :func:`write_pgm`."""
    if isinstance(source, (bytes, bytearray)):
        fh = io.BytesIO(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            fh = io.BytesIO(f.read())
    else:
        fh = source
    magic = fh.readline().strip()
    if magic != b"P5":
        raise ValueError(f"not a binary PGM: magic {magic!r}")
    width, height = (int(v) for v in fh.readline().split())
    maxval = int(fh.readline())
    if maxval != 255:
        raise ValueError(f"only 8-bit PGM is supported, maxval={maxval}")
    raw = fh.read(width * height)
    if len(raw) != width * height:
        raise ValueError("truncated PGM pixel data")
    return GrayImage(width, height, np.frombuffer(raw, dtype=np.uint8))
