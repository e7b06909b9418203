"""Hiding message bits in one virtual bit-plane of a grayscale image.

A pixel carries a bit at plane ``p`` only if its canonical representation
stays canonical (and in range) with that plane's bit forced to 0 *and* to
1.  Because the rule does not depend on the bit being hidden, the stego
pixel is eligible exactly when the cover pixel was, and the extractor can
retrace the embedder's path without side information.

Pixels are scanned row-major from the top-left corner.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .numeral import NumeralSystem, canonical_encode, check_plane, is_canonical
from .pgm import GrayImage

PREFIX_BITS = 32


class CapacityError(ValueError):
    def __init__(self, required, available):
        super().__init__(f"message needs {required} eligible pixels, cover has {available}")
        self.required = required
        self.available = available


class CorruptStreamError(ValueError):
    """The stego image does not hold a well-formed message for this plan."""


# ---------------------------------------------------------------------------
# single pixels
# ---------------------------------------------------------------------------

def _variant(system, pixel, plane, bit):
    bits = list(canonical_encode(system, pixel).bits)
    bits[plane] = bit
    return bits


def pixel_eligible(system, plane, pixel):
    check_plane(system, plane)
    if not 0 <= pixel <= system.max_value:
        raise ValueError(f"pixel {pixel} outside [0, {system.max_value}]")
    return all(is_canonical(system, _variant(system, pixel, plane, b)) for b in (0, 1))


def embed_bit(system, plane, pixel, bit):
    """Returns ``(new_pixel, embedded)``; ineligible pixels come back unchanged."""
    if not pixel_eligible(system, plane, pixel):
        return pixel, False
    bits = _variant(system, pixel, plane, int(bit))
    return sum(w for w, b in zip(system.weights, bits) if b), True


def extract_bit(system, plane, pixel):
    """The plane bit of an eligible pixel, or ``None`` to mark a skipped pixel."""
    if not pixel_eligible(system, plane, pixel):
        return None
    return canonical_encode(system, pixel).bits[plane]


# ---------------------------------------------------------------------------
# whole images
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneTable:
    """Per-value lookup for one plane: eligibility, current bit, both variants."""

    eligible: np.ndarray
    bit: np.ndarray
    with_bit: np.ndarray  # shape (2, max_value + 1): value after forcing the bit to 0 / 1


@lru_cache(maxsize=256)
def plane_table(system: NumeralSystem, plane: int) -> PlaneTable:
    check_plane(system, plane)
    codes = system.canonical_codes
    values = np.arange(system.max_value + 1)
    w = system.weights[plane]
    bit = codes[:, plane].astype(np.int64)
    other = values + w * (1 - 2 * bit)
    in_range = (other >= 0) & (other <= system.max_value)
    flipped = codes.copy()
    flipped[:, plane] ^= 1
    other_codes = codes[np.clip(other, 0, system.max_value)]
    eligible = in_range & np.all(other_codes == flipped, axis=1)
    with_bit = np.where(bit == 0, [values, other], [other, values])
    for arr in (eligible, bit, with_bit):
        arr.setflags(write=False)
    return PlaneTable(eligible, bit.astype(np.uint8), with_bit)


@dataclass(frozen=True)
class EmbedPlan:
    """Where and how a message is hidden.

    ``length=None`` frames the message with a 32-bit big-endian bit count;
    an integer means the extractor is told the length out of band.
    """

    system: NumeralSystem
    plane: int
    length: Optional[int] = None

    def __post_init__(self):
        check_plane(self.system, self.plane)
        if self.length is not None and self.length < 0:
            raise ValueError("explicit length must be non-negative")

    @property
    def prefixed(self):
        return self.length is None


@dataclass(frozen=True)
class EmbedReport:
    bits_embedded: int
    pixels_visited: int
    pixels_skipped: int
    capacity_at_plane: int
    bits_flipped: int


def _eligible_positions(image, system, plane):
    _check_depth(image, system)
    table = plane_table(system, plane)
    return np.flatnonzero(table.eligible[image.pixels.ravel()])


def _check_depth(image, system):
    if image.k != system.k:
        raise ValueError(f"{system!r} is sized for {system.k}-bit pixels, image has k={image.k}")


def capacity(cover, system, plane):
    """Number of pixels able to carry a bit at `plane`."""
    return int(_eligible_positions(cover, system, plane).size)


def _as_bit_array(message):
    bits = np.asarray(message, dtype=np.int64).ravel()
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("message must consist of 0/1 values")
    return bits.astype(np.uint8)


def length_prefix(count):
    if not 0 <= count < 1 << PREFIX_BITS:
        raise ValueError(f"message of {count} bits cannot be framed in {PREFIX_BITS} bits")
    return np.array([(count >> (PREFIX_BITS - 1 - i)) & 1 for i in range(PREFIX_BITS)],
                    dtype=np.uint8)


def embed_message(cover, plan, message):
    """Hide `message` (a sequence of 0/1) in `cover`; returns ``(stego, report)``.

    Raises :class:`CapacityError` before touching any pixel when the
    framed message does not fit.
    """
    payload = _as_bit_array(message)
    if plan.prefixed:
        stream = np.concatenate([length_prefix(payload.size), payload])
    else:
        if payload.size != plan.length:
            raise ValueError(f"plan expects {plan.length} bits, message has {payload.size}")
        stream = payload
    positions = _eligible_positions(cover, plan.system, plan.plane)
    if stream.size > positions.size:
        raise CapacityError(stream.size, positions.size)

    table = plane_table(plan.system, plan.plane)
    flat = cover.pixels.ravel().astype(np.int64)
    used = positions[:stream.size]
    old = flat[used]
    flat[used] = table.with_bit[stream, old]
    stego = GrayImage(flat.reshape(cover.pixels.shape), k=cover.k)

    visited = int(used[-1]) + 1 if used.size else 0
    report = EmbedReport(
        bits_embedded=int(stream.size),
        pixels_visited=visited,
        pixels_skipped=visited - int(stream.size),
        capacity_at_plane=int(positions.size),
        bits_flipped=int(np.count_nonzero(table.bit[old] != stream)),
    )
    return stego, report


def extract_message(stego, plan):
    """Recover the bits hidden by :func:`embed_message` under the same plan."""
    positions = _eligible_positions(stego, plan.system, plan.plane)
    table = plane_table(plan.system, plan.plane)
    channel = table.bit[stego.pixels.ravel()[positions]]
    if plan.prefixed:
        if channel.size < PREFIX_BITS:
            raise CorruptStreamError(
                f"only {channel.size} eligible pixels, too few for a {PREFIX_BITS}-bit length prefix")
        count = int("".join(map(str, channel[:PREFIX_BITS])), 2)
        if count > channel.size - PREFIX_BITS:
            raise CorruptStreamError(
                f"declared length {count} exceeds the {channel.size - PREFIX_BITS} bits available")
        return channel[PREFIX_BITS:PREFIX_BITS + count].copy()
    if plan.length > channel.size:
        raise CorruptStreamError(
            f"requested {plan.length} bits but only {channel.size} pixels are eligible")
    return channel[:plan.length].copy()


# ---------------------------------------------------------------------------
# byte <-> bit helpers
# ---------------------------------------------------------------------------

def bytes_to_bits(data):
    """Most significant bit of each byte first."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bits_to_bytes(bits):
    """Inverse of :func:`bytes_to_bits`; a ragged tail is zero-padded."""
    return np.packbits(_as_bit_array(bits)).tobytes()


def fill_bits(data, count):
    """`data` repeated end to end until exactly `count` bits."""
    bits = bytes_to_bits(data)
    if bits.size == 0:
        raise ValueError("cannot fill with an empty message")
    return np.resize(bits, count)
