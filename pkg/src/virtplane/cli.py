"""Command-line interface: ``virtplane {plan,table,embed,extract,analyze,sweep}``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import metrics, pgm
from .numeral import decomposition_table, make_system, natural_plane_count, representable_range
from .stego import (
    PREFIX_BITS, CapacityError, CorruptStreamError, EmbedPlan, bits_to_bytes, bytes_to_bits,
    capacity, embed_message, extract_message, fill_bits,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_PARSE = 4
EXIT_IO = 5
EXIT_CORRUPT = 6

DEFAULT_SYSTEMS = "binary,fib:1,prime,natural"
DEFAULT_TEXT = "sandipan"


class UsageError(Exception):
    pass


def _system(args):
    try:
        return make_system(args.system, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_out(path, force):
    if path and path != "-" and os.path.exists(path) and not force:
        raise UsageError(f"{path} exists; pass --force to overwrite")


def _write_bytes(path, data):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as f:
            f.write(data)


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as f:
            f.write(text)


def _check_plane(system, plane):
    if not 0 <= plane < system.n:
        raise UsageError(f"--plane must be in [0, {system.n - 1}] for {system.name}")


def _plan(system, args):
    _check_plane(system, args.plane)
    return EmbedPlan(system, args.plane, length=args.length)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_plan(args):
    system = _system(args)
    info = {
        "system": system.name,
        "k": system.k,
        "n": system.n,
        "weights": list(system.weights),
        "representable_range": list(representable_range(system)),
        "max_value": system.max_value,
    }
    if system.name == "natural":
        info["closed_form_n"] = natural_plane_count(system.k)
    print(json.dumps(info))
    return EXIT_OK


def cmd_table(args):
    system = _system(args)
    hi = system.max_value if args.hi is None else args.hi
    if not 0 <= args.lo <= hi <= system.max_value:
        raise UsageError(f"need 0 <= --lo <= --hi <= {system.max_value}")
    _check_out(args.csv, args.force)
    rows = decomposition_table(system, args.lo, hi)
    lines = ["value,decomposition"] + [f"{v},{s}" for v, s in rows]
    _write_text(args.csv, "\n".join(lines) + "\n")
    return EXIT_OK


def _message_bits(args, room):
    """Bits to hide, honouring --text/--message-file/--random and --fill."""
    if args.random is not None:
        if args.seed is None:
            raise UsageError("--random requires an explicit --seed")
        count = args.random
        if args.fill:
            count = room
        return np.random.default_rng(args.seed).integers(0, 2, size=count, dtype=np.uint8)
    if args.message_file is not None:
        with open(args.message_file, "rb") as f:
            data = f.read()
    else:
        data = (args.text if args.text is not None else DEFAULT_TEXT).encode("utf-8")
    if args.fill:
        return fill_bits(data, room)
    return bytes_to_bits(data)


def cmd_embed(args):
    system = _system(args)
    plan = _plan(system, args)
    _check_out(args.out, args.force)
    _check_out(args.report, args.force)
    cover = pgm.load(args.cover)
    if plan.prefixed:
        # --fill stops at a whole byte so the extracted message is clean text
        room = max(capacity(cover, system, plan.plane) - PREFIX_BITS, 0)
        room -= room % 8
    else:
        room = plan.length
    bits = _message_bits(args, room)
    if not plan.prefixed and bits.size != plan.length:
        raise UsageError(f"--length {plan.length} but message has {bits.size} bits")
    stego, report = embed_message(cover, plan, bits)
    pgm.save(stego, args.out)
    summary = {
        "system": system.name,
        "plane": plan.plane,
        "weight": system.weight(plan.plane),
        "message_bits": int(bits.size),
        "length_mode": "prefix" if plan.prefixed else "explicit",
        "bits_embedded": report.bits_embedded,
        "pixels_visited": report.pixels_visited,
        "pixels_skipped": report.pixels_skipped,
        "capacity_at_plane": report.capacity_at_plane,
        "bits_flipped": report.bits_flipped,
        "mse": metrics.mse_empirical(cover, stego),
        "psnr_db": _json_float(metrics.psnr_empirical(cover, stego)),
        "kl_nats": metrics.kl_divergence(metrics.histogram(cover), metrics.histogram(stego)),
        "wmse_per_pixel": metrics.wmse_theoretical(system, plan.plane),
        "psnr_worst_db": metrics.psnr_worst(system, plan.plane),
    }
    _write_text(args.report, json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def _json_float(x):
    return "inf" if math.isinf(x) else x


def cmd_extract(args):
    system = _system(args)
    plan = _plan(system, args)
    _check_out(args.out, args.force)
    stego = pgm.load(args.stego)
    bits = extract_message(stego, plan)
    _write_bytes(args.out, bits_to_bytes(bits))
    return EXIT_OK


def cmd_analyze(args):
    _check_out(args.csv, args.force)
    cover = pgm.load(args.cover)
    stego = pgm.load(args.stego)
    if cover.pixels.shape != stego.pixels.shape:
        raise UsageError(f"cover is {cover.width}x{cover.height}, stego is {stego.width}x{stego.height}")
    h_cover = metrics.histogram(cover)
    h_stego = metrics.histogram(stego)
    change = np.abs(cover.pixels.astype(int) - stego.pixels.astype(int))
    summary = {
        "width": cover.width,
        "height": cover.height,
        "pixels_changed": int(np.count_nonzero(change)),
        "max_abs_change": int(change.max()),
        "mse": metrics.mse_empirical(cover, stego),
        "psnr_db": _json_float(metrics.psnr_empirical(cover, stego)),
        "kl_nats": metrics.kl_divergence(h_cover, h_stego),
    }
    if args.system is not None:
        system = _system(args)
        if args.plane is not None:
            _check_plane(system, args.plane)
            summary.update(
                system=system.name,
                plane=args.plane,
                wmse_per_pixel=metrics.wmse_theoretical(system, args.plane),
                wmse_total=metrics.wmse_theoretical(system, args.plane, cover.width, cover.height),
                psnr_worst_db=metrics.psnr_worst(system, args.plane),
                capacity=capacity(cover, system, args.plane),
            )
    if args.csv:
        lines = ["level,cover,stego"] + [
            f"{i},{a},{b}" for i, (a, b) in enumerate(zip(h_cover, h_stego))]
        _write_text(args.csv, "\n".join(lines) + "\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_sweep(args):
    _check_out(args.csv, args.force)
    _check_out(args.weights_csv, args.force)
    try:
        systems = [make_system(s, args.k) for s in args.systems.split(",") if s]
        planes = [int(p) for p in args.planes.split(",")] if args.planes else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cover = pgm.load(args.cover)
    if args.random is not None:
        if args.seed is None:
            raise UsageError("--random requires an explicit --seed")
        bits = np.random.default_rng(args.seed).integers(0, 2, size=args.random, dtype=np.uint8)
    else:
        text = args.text if args.text is not None else DEFAULT_TEXT
        bits = fill_bits(text.encode("utf-8"), cover.pixels.size)
    reports = metrics.sweep(cover, bits, systems, planes)
    _write_text(args.csv, metrics.reports_to_csv(reports))
    if args.weights_csv:
        depth = max(s.n for s in systems)
        curves = metrics.weight_curves([s.weight_function.name for s in systems], depth)
        _write_text(args.weights_csv, metrics.weight_curves_csv(curves))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _nonneg(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _add_system(p, required=True):
    p.add_argument("--system", required=required,
                   help="binary, natural, prime or fib:p")
    p.add_argument("--k", type=int, default=8, help="pixel bit depth (default 8)")


def _add_length(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--length", type=_nonneg, default=None,
                   help="message length in bits, agreed out of band (no prefix)")
    g.add_argument("--prefix", dest="length", action="store_const", const=None,
                   help="frame with a 32-bit length prefix (default)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="virtplane",
        description="Hide data in virtual bit-planes of grayscale PGM images.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plane count and weights of a numeral system")
    _add_system(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("table", help="canonical decomposition table")
    _add_system(p)
    p.add_argument("--lo", type=_nonneg, default=0)
    p.add_argument("--hi", type=_nonneg, default=None)
    p.add_argument("--csv", help="write here instead of stdout")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("embed", help="hide a message in a cover image")
    p.add_argument("cover")
    _add_system(p)
    p.add_argument("--plane", type=_nonneg, required=True)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--text", help=f"message text (default {DEFAULT_TEXT!r})")
    src.add_argument("--message-file")
    src.add_argument("--random", type=_nonneg, metavar="NBITS", help="random bits; needs --seed")
    p.add_argument("--seed", type=int)
    p.add_argument("--fill", action="store_true",
                   help="repeat the message until the plane is full")
    _add_length(p)
    p.add_argument("--out", required=True, help="stego PGM path")
    p.add_argument("--report", help="JSON report path (default stdout)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a hidden message")
    p.add_argument("stego")
    _add_system(p)
    p.add_argument("--plane", type=_nonneg, required=True)
    _add_length(p)
    p.add_argument("--out", help="message output path (default stdout)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("analyze", help="compare a cover and a stego image")
    p.add_argument("cover")
    p.add_argument("stego")
    _add_system(p, required=False)
    p.add_argument("--plane", type=_nonneg)
    p.add_argument("--csv", help="write both gray-level histograms here")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="distortion table over systems and planes")
    p.add_argument("cover")
    p.add_argument("--systems", default=DEFAULT_SYSTEMS)
    p.add_argument("--planes", help="comma-separated plane indices (default: all)")
    p.add_argument("--k", type=int, default=8)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--text", help=f"repeated to fill the image (default {DEFAULT_TEXT!r})")
    src.add_argument("--random", type=_nonneg, metavar="NBITS")
    p.add_argument("--seed", type=int)
    p.add_argument("--csv", help="report CSV path (default stdout)")
    p.add_argument("--weights-csv", help="also write per-plane weight curves here")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"virtplane: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"virtplane: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except pgm.PGMError as exc:
        print(f"virtplane: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CorruptStreamError as exc:
        print(f"virtplane: corrupt stream: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as exc:
        print(f"virtplane: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
