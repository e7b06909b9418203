"""Distortion statistics for virtual bit-plane embedding.

Theoretical figures are worst cases: every carrying pixel has its plane
bit flipped, so each one moves by exactly the plane weight.  WMSE values
are stored per pixel; multiply by ``width * height`` for the image total.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .numeral import make_system
from .stego import EmbedPlan, capacity, embed_message

CSV_COLUMNS = (
    "system", "plane", "weight", "wmse_per_pixel", "psnr_worst_db",
    "mse_empirical", "psnr_empirical_db", "kl_nats", "capacity_fraction",
)


def wmse_theoretical(system, plane, width=1, height=1):
    """``width * height * W(plane)**2``."""
    return width * height * system.weight(plane) ** 2


def psnr_worst(system, plane, k=None):
    """``10 log10((2**k - 1)**2 / W(plane)**2)`` in dB."""
    k = system.k if k is None else k
    peak = (1 << k) - 1
    return 10 * math.log10(peak ** 2 / system.weight(plane) ** 2)


def _check_pair(cover, stego):
    if cover.pixels.shape != stego.pixels.shape:
        raise ValueError(f"dimension mismatch: {cover!r} vs {stego!r}")


def mse_empirical(cover, stego):
    _check_pair(cover, stego)
    diff = cover.pixels.astype(np.float64) - stego.pixels.astype(np.float64)
    return float(np.mean(diff ** 2))


def psnr_from_mse(mse, k=8):
    if mse == 0:
        return math.inf
    return 10 * math.log10(((1 << k) - 1) ** 2 / mse)


def psnr_empirical(cover, stego, k=None):
    """PSNR in dB; ``math.inf`` for identical images."""
    return psnr_from_mse(mse_empirical(cover, stego), cover.k if k is None else k)


def histogram(image):
    """Gray-level counts, one bin per level ``0..2**k - 1``."""
    return np.bincount(image.pixels.ravel(), minlength=1 << image.k)


def kl_divergence(hist_p, hist_q, smoothing=1.0):
    """Relative entropy KL(p || q) in nats between two count histograms.

    `smoothing` counts are added to every bin of both histograms before
    normalizing, which keeps q positive wherever p is.
    """
    p = np.asarray(hist_p, dtype=np.float64)
    q = np.asarray(hist_q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"histograms differ in shape: {p.shape} vs {q.shape}")
    if p.sum() <= 0 or q.sum() <= 0:
        raise ValueError("histogram of an empty image")
    p = p + smoothing
    q = q + smoothing
    p /= p.sum()
    q /= q.sum()
    mask = p > 0
    if np.any(q[mask] == 0):
        return math.inf
    return max(0.0, float(np.sum(p[mask] * np.log(p[mask] / q[mask]))))


@dataclass(frozen=True)
class DistortionReport:
    system: str
    plane: int
    weight: int
    wmse_per_pixel: int
    psnr_worst_db: float
    mse_empirical: float
    psnr_empirical_db: float
    kl_nats: float
    capacity_fraction: float
    bits_embedded: int = 0
    max_abs_change: int = 0
    truncated: bool = False

    def wmse_total(self, width, height):
        return self.wmse_per_pixel * width * height

    def row(self):
        d = asdict(self)
        return [d[c] for c in CSV_COLUMNS]


def distortion_report(cover, stego, system, plane, bits_embedded=0, truncated=False):
    """Theoretical and measured distortion for one embedding run."""
    mse = mse_empirical(cover, stego)
    change = np.abs(cover.pixels.astype(np.int64) - stego.pixels.astype(np.int64))
    return DistortionReport(
        system=system.name,
        plane=plane,
        weight=system.weight(plane),
        wmse_per_pixel=wmse_theoretical(system, plane),
        psnr_worst_db=psnr_worst(system, plane),
        mse_empirical=mse,
        psnr_empirical_db=psnr_from_mse(mse, cover.k),
        kl_nats=kl_divergence(histogram(cover), histogram(stego)),
        capacity_fraction=capacity(cover, system, plane) / cover.pixels.size,
        bits_embedded=bits_embedded,
        max_abs_change=int(change.max()),
        truncated=truncated,
    )


def sweep(cover, message, systems, planes=None):
    """Embed `message` at every requested plane of every system.

    `systems` are :class:`NumeralSystem` objects or names; `planes` defaults
    to every plane of each system (planes beyond a system's count are
    skipped).  The message is embedded raw, without a length prefix, and
    cut to the plane's capacity when it does not fit; such reports carry
    ``truncated=True``.
    """
    message = np.asarray(message, dtype=np.uint8).ravel()
    reports = []
    for system in systems:
        if isinstance(system, str):
            system = make_system(system, cover.k)
        wanted = range(system.n) if planes is None else [p for p in planes if 0 <= p < system.n]
        for plane in wanted:
            room = capacity(cover, system, plane)
            bits = message[:room]
            plan = EmbedPlan(system, plane, length=bits.size)
            stego, report = embed_message(cover, plan, bits)
            reports.append(distortion_report(
                cover, stego, system, plane,
                bits_embedded=report.bits_embedded,
                truncated=bits.size < message.size,
            ))
    return reports


def _format(value):
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


def reports_to_csv(reports, out=None):
    """Write reports as CSV (kl in nats, distortion in squared gray levels).

    Returns the text when `out` is None, else writes to the file object.
    """
    buf = out if out is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow([_format(v) for v in r.row()])
    if out is None:
        return buf.getvalue()


def weight_curves(systems, planes):
    """Plane weights side by side: ``{name: [W(0), ..., W(planes-1)]}``."""
    curves = {}
    for system in systems:
        if isinstance(system, str):
            system = make_system(system)
        curves[system.name] = list(system.weight_function.weights(planes))
    return curves


def weight_curves_csv(curves, out=None):
    buf = out if out is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(curves)
    writer.writerow(["plane"] + names)
    for plane in range(max(len(v) for v in curves.values())):
        writer.writerow([plane] + [curves[n][plane] for n in names])
    if out is None:
        return buf.getvalue()
