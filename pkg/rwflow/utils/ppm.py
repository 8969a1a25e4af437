"""
Binary PPM (P6) reader and writer.

Only 8-bit RGB images are accepted: the header is the magic ``P6`` followed by
width, height and a max value of 255, separated by whitespace, with ``#``
comments allowed anywhere in the header. Comments are consumed on read and
never written back, so a comment-free file round-trips byte for byte.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import ParameterError, PpmFormatError
from .rng import SeededRNG

MAGIC = b"P6"
MAX_VALUE = 255
_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(frozen=True)
class PpmImage:
    """RGB image; ``pixels`` has shape (height, width, 3) and dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ParameterError(f"expected (height, width, 3) pixels, got shape {pixels.shape}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ParameterError("image must have at least one pixel")
        pixels = pixels.astype(np.uint8, copy=True)
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def channel(self, index: int) -> np.ndarray:
        return self.pixels[:, :, index]

    @classmethod
    def from_channels(cls, red: np.ndarray, green: np.ndarray, blue: np.ndarray) -> "PpmImage":
        return cls(np.stack([red, green, blue], axis=-1))


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    """Skip whitespace and comments; return the next header token and the position after it."""
    while pos < len(data):
        byte = data[pos:pos + 1]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise PpmFormatError("truncated header", offset=start)
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, name: str) -> Tuple[int, int]:
    token, end = _next_token(data, pos)
    if not token.isdigit():
        raise PpmFormatError(f"{name} is not a decimal integer: {token!r}", offset=end - len(token))
    return int(token), end


def decode_ppm(data: bytes) -> PpmImage:
    """
    Parse P6 bytes.

    Raises:
        PpmFormatError: bad magic, non-numeric or zero dimensions, max value
            other than 255, missing separator, or too few pixel bytes.
    """
    if data[:2] != MAGIC:
        raise PpmFormatError(f"bad magic {data[:2]!r}, expected {MAGIC!r}", offset=0)
    pos = 2
    if pos >= len(data) or (data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#"):
        raise PpmFormatError("magic must be followed by whitespace", offset=pos)

    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    if width < 1 or height < 1:
        raise PpmFormatError(f"image dimensions must be positive, got {width}x{height}", offset=pos)
    max_value, pos = _header_int(data, pos, "max value")
    if max_value != MAX_VALUE:
        raise PpmFormatError(
            f"only max value {MAX_VALUE} is supported, got {max_value}", offset=pos
        )
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise PpmFormatError("max value must be followed by a single whitespace byte", offset=pos)
    pos += 1

    expected = width * height * 3
    raster = data[pos:pos + expected]
    if len(raster) < expected:
        raise PpmFormatError(
            f"expected {expected} pixel bytes, found {len(raster)}", offset=pos + len(raster)
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return PpmImage(pixels)


def encode_ppm(image: PpmImage) -> bytes:
    header = f"P6\n{image.width} {image.height}\n{MAX_VALUE}\n".encode("ascii")
    return header + image.pixels.tobytes()


def read_ppm(path: Union[str, Path]) -> PpmImage:
    """Load a P6 file from disk."""
    return decode_ppm(Path(path).read_bytes())


def write_ppm(image: PpmImage, path: Union[str, Path]) -> Path:
    """Write ``image`` as P6 and return the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_ppm(image))
    return path


def synthetic_image(width: int, height: int, seed: int) -> PpmImage:
    """
    Deterministic test card: horizontal and vertical ramps on red and green,
    random blocks on blue.
    """
    if width < 1 or height < 1:
        raise ParameterError(f"image dimensions must be positive, got {width}x{height}")
    rng = SeededRNG(seed)
    cols = np.arange(width, dtype=float)
    rows = np.arange(height, dtype=float)
    red = np.tile(np.round(255.0 * (cols + 1) / width), (height, 1))
    green = np.tile(np.round(255.0 * (rows + 1) / height)[:, None], (1, width))
    blocks = rng.integers(256, ((height + 1) // 2, (width + 1) // 2))
    blue = np.kron(blocks, np.ones((2, 2)))[:height, :width]
    return PpmImage.from_channels(red, green, blue)
