"""8-bit grayscale images and the Netpbm PGM format (P5 binary, P2 ASCII)."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

WHITESPACE = b" \t\n\r\v\f"


class PGMError(ValueError):
    """Malformed or unsupported PGM data."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Row-major ``(height, width)`` array of ``k``-bit gray levels.

    The pixel array is copied and frozen on construction.
    """

    pixels: np.ndarray
    k: int = 8

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"pixels must be 2-D, got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("image must have positive width and height")
        if arr.min() < 0 or arr.max() > (1 << self.k) - 1:
            raise ValueError(f"pixel values must lie in [0, {(1 << self.k) - 1}]")
        arr = arr.astype(np.uint8 if self.k <= 8 else np.uint16)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def max_value(self):
        return (1 << self.k) - 1

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height}, k={self.k})"


class _Tokens:
    """Header tokenizer that skips whitespace and ``#`` comments."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def skip(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in WHITESPACE:
                self.pos += 1
            else:
                break

    def next(self, what):
        self.skip()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1] not in WHITESPACE + b"#":
            self.pos += 1
        if start == self.pos:
            raise PGMError(f"unexpected end of data reading {what}", start)
        return self.data[start:self.pos], start

    def int(self, what):
        token, offset = self.next(what)
        if not token.isdigit():
            raise PGMError(f"expected {what}, found {token[:16]!r}", offset)
        return int(token)


def read_pgm(data):
    """Parse P5 or P2 bytes into a :class:`GrayImage` (maxval <= 255)."""
    data = bytes(data)
    if data[:2] not in (b"P5", b"P2"):
        raise PGMError(f"bad magic number {data[:2]!r}, expected P5 or P2", 0)
    binary = data[:2] == b"P5"
    tokens = _Tokens(data)
    tokens.pos = 2
    if binary and len(data) > 2 and data[2:3] not in WHITESPACE + b"#":
        raise PGMError("missing whitespace after magic number", 2)
    width = tokens.int("width")
    height = tokens.int("height")
    maxval = tokens.int("maxval")
    if width == 0 or height == 0:
        raise PGMError(f"zero image dimension {width}x{height}")
    if not 0 < maxval <= 255:
        raise PGMError(f"unsupported maxval {maxval}; only 1..255 is supported")
    count = width * height

    if binary:
        # exactly one whitespace byte separates maxval from the raster
        start = tokens.pos
        if start >= len(data) or data[start:start + 1] not in WHITESPACE:
            raise PGMError("missing whitespace before raster", start)
        start += 1
        body = data[start:start + count]
        if len(body) < count:
            raise PGMError(f"truncated raster: expected {count} bytes, got {len(body)}",
                           start + len(body))
        pixels = np.frombuffer(body, dtype=np.uint8)
        if pixels.max() > maxval:
            bad = int(np.argmax(pixels > maxval))
            raise PGMError(f"pixel value exceeds maxval {maxval}", start + bad)
    else:
        values = []
        for _ in range(count):
            try:
                token, offset = tokens.next("pixel")
            except PGMError as exc:
                raise PGMError(f"truncated raster: expected {count} values, got {len(values)}",
                               exc.offset) from None
            if not token.isdigit() or int(token) > maxval:
                raise PGMError(f"bad pixel value {token[:16]!r}", offset)
            values.append(int(token))
        pixels = np.array(values, dtype=np.uint8)
    return GrayImage(pixels.reshape(height, width))


def write_pgm(image):
    """Serialize to binary P5 with maxval 255."""
    if image.k != 8:
        raise ValueError("only 8-bit images can be written as PGM")
    header = b"P5\n%d %d\n255\n" % (image.width, image.height)
    return header + image.pixels.astype(np.uint8).tobytes()


def load(path):
    with open(path, "rb") as f:
        return read_pgm(f.read())


def save(image, path):
    with open(path, "wb") as f:
        f.write(write_pgm(image))


class Pattern(enum.Enum):
    GRADIENT = "gradient"
    CONSTANT = "constant"
    CHECKER = "checker"
    RANDOM = "random"


def synthesize(pattern, width, height, value=0, seed=0, k=8):
    """Deterministic test image.

    gradient
        ``(x + width * y) mod 2**k``
    constant
        every pixel equals `value`
    checker
        alternating 0 and ``2**k - 1``, starting with 0 at the origin
    random
        uniform levels from ``numpy.random.default_rng(seed)``
    """
    pattern = Pattern(pattern)
    if width <= 0 or height <= 0:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    levels = 1 << k
    y, x = np.mgrid[0:height, 0:width]
    if pattern is Pattern.GRADIENT:
        pixels = (x + width * y) % levels
    elif pattern is Pattern.CONSTANT:
        pixels = np.full((height, width), value)
    elif pattern is Pattern.CHECKER:
        pixels = ((x + y) % 2) * (levels - 1)
    else:
        pixels = np.random.default_rng(seed).integers(0, levels, size=(height, width))
    return GrayImage(pixels, k=k)
