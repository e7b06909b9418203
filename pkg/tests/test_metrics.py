import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_eligible, kl_from_pixels

from virtplane import make_system, synthesize
from virtplane.metrics import (
    CSV_COLUMNS, histogram, kl_divergence, mse_empirical, psnr_empirical, psnr_from_mse,
    psnr_worst, reports_to_csv, sweep, weight_curves, weight_curves_csv, wmse_theoretical,
)
from virtplane.stego import EmbedPlan, bytes_to_bits, capacity, embed_message, fill_bits

from conftest import SYSTEM_NAMES

# KL(cover || stego), nats: 64x64 gradient, natural plane 0, "sandipan" repeated
# over all 544 carrying pixels; computed with the pure-python oracle path
GRADIENT_NATURAL_P0_KL = 0.0006279845658398429


def test_wmse_examples():
    assert wmse_theoretical(make_system("natural"), 0) == 1
    assert wmse_theoretical(make_system("prime"), 3) == 25
    assert wmse_theoretical(make_system("natural"), 22, 512, 512) == 512 * 512 * 529
    assert wmse_theoretical(make_system("binary"), 5, 2, 3) == 6 * 4 ** 5
    assert wmse_theoretical(make_system("fib"), 10) == 144 ** 2


def test_wmse_plane_out_of_range():
    with pytest.raises(ValueError):
        wmse_theoretical(make_system("prime"), 15)
    with pytest.raises(ValueError):
        psnr_worst(make_system("binary"), -1)


def test_psnr_worst_values():
    nat, pri, binary = make_system("natural"), make_system("prime"), make_system("binary")
    assert psnr_worst(nat, 0) == pytest.approx(48.1308, abs=1e-4)
    assert psnr_worst(binary, 0) == psnr_worst(nat, 0)
    # plane 4 weights: natural 5, prime 7 (1, 2, 3, 5, 7)
    assert psnr_worst(nat, 4) - psnr_worst(pri, 4) == pytest.approx(20 * math.log10(7 / 5))
    assert psnr_worst(nat, 3, k=4) == pytest.approx(10 * math.log10(15 ** 2 / 16))


def test_mse_identical_and_unit_shift():
    a = synthesize("random", 10, 10, seed=4)
    assert mse_empirical(a, a) == 0
    assert psnr_empirical(a, a) == math.inf
    b = synthesize("constant", 4, 4, value=10)
    c = synthesize("constant", 4, 4, value=11)
    assert mse_empirical(b, c) == 1
    assert psnr_empirical(b, c) == pytest.approx(20 * math.log10(255))


def test_mse_dimension_mismatch():
    with pytest.raises(ValueError):
        mse_empirical(synthesize("gradient", 2, 3), synthesize("gradient", 3, 2))


@pytest.mark.parametrize("name", SYSTEM_NAMES)
def test_mse_counts_flipped_pixels(name):
    s = make_system(name)
    cover = synthesize("random", 40, 40, seed=11)
    for plane in range(s.n):
        cap = capacity(cover, s, plane)
        plan = EmbedPlan(s, plane, length=cap)
        stego, report = embed_message(cover, plan, fill_bits(b"\x5a", cap))
        w = s.weights[plane]
        flipped = np.count_nonzero(stego.pixels != cover.pixels)
        assert flipped == report.bits_flipped
        assert mse_empirical(cover, stego) == pytest.approx(w * w * flipped / cover.pixels.size)


def test_histogram():
    h = histogram(synthesize("gradient", 64, 64))
    assert h.shape == (256,) and (h == 16).all()


def test_kl_self_is_zero():
    h = histogram(synthesize("random", 16, 16, seed=0))
    assert kl_divergence(h, h) == 0


@given(st.lists(st.integers(0, 50), min_size=8, max_size=8),
       st.lists(st.integers(0, 50), min_size=8, max_size=8))
def test_kl_nonnegative(p, q):
    if sum(p) == 0 or sum(q) == 0:
        with pytest.raises(ValueError):
            kl_divergence(p, q)
        return
    assert kl_divergence(p, q) >= 0


def test_kl_matches_oracle_on_random_pairs():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = rng.integers(0, 256, (10, 10))
        b = rng.integers(0, 256, (10, 10))
        ha, hb = np.bincount(a.ravel(), minlength=256), np.bincount(b.ravel(), minlength=256)
        assert kl_divergence(ha, hb) == pytest.approx(kl_from_pixels(a, b), rel=1e-12)


def test_kl_shape_mismatch():
    with pytest.raises(ValueError):
        kl_divergence([1, 2], [1, 2, 3])


def test_gradient_kl_regression(brute_canon8):
    s = make_system("natural")
    cover = synthesize("gradient", 64, 64)
    eligible = brute_eligible(list(s.weights), 255, 0, brute_canon8["natural"])
    cap = sum(int(v) in eligible for v in cover.pixels.ravel())
    bits = fill_bits(b"sandipan", cap)
    stego, _ = embed_message(cover, EmbedPlan(s, 0, length=cap), bits)
    kl = kl_divergence(histogram(cover), histogram(stego))
    assert kl == pytest.approx(GRADIENT_NATURAL_P0_KL, rel=1e-12)
    assert kl > 0


def test_sweep_shapes_and_bounds():
    cover = synthesize("gradient", 32, 32)
    bits = fill_bits(b"sandipan", cover.pixels.size)
    reports = sweep(cover, bits, SYSTEM_NAMES)
    by_sys = {}
    for r in reports:
        by_sys.setdefault(r.system, []).append(r.plane)
        assert r.max_abs_change <= r.weight
        assert r.mse_empirical <= r.wmse_per_pixel
        assert r.kl_nats >= 0
        assert 0 <= r.capacity_fraction <= 1
        assert r.truncated == (r.capacity_fraction < 1)
    assert by_sys["natural"] == list(range(23))
    assert by_sys["prime"] == list(range(15))
    assert by_sys["binary"] == list(range(8))
    assert by_sys["fib:1"] == list(range(11))


def test_sweep_plane_filter():
    cover = synthesize("gradient", 16, 16)
    reports = sweep(cover, [1, 0, 1], ["binary", "natural"], planes=[0, 9])
    assert [(r.system, r.plane) for r in reports] == [("binary", 0), ("natural", 0), ("natural", 9)]


def test_sweep_natural_beats_prime_from_plane_three():
    cover = synthesize("gradient", 16, 16)
    reports = {(r.system, r.plane): r for r in sweep(cover, [1], ["natural", "prime", "binary"])}
    for l in range(15):
        nat, pri = reports["natural", l], reports["prime", l]
        assert (nat.wmse_per_pixel < pri.wmse_per_pixel) == (l >= 3)
    # 2**l == l + 1 at l = 0, 1
    for l in range(8):
        binary, nat = reports["binary", l].wmse_per_pixel, reports["natural", l].wmse_per_pixel
        assert (binary > nat) == (l >= 2) and binary >= nat


def test_csv_layout():
    cover = synthesize("gradient", 8, 8)
    reports = sweep(cover, bytes_to_bits(b"x"), ["prime"], planes=[2])
    rows = list(csv.reader(io.StringIO(reports_to_csv(reports))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][:3] == ["prime", "2", "3"]
    assert float(rows[1][4]) == pytest.approx(psnr_worst(make_system("prime"), 2))


def test_csv_writes_inf():
    cover = synthesize("constant", 4, 4, value=0)
    reports = sweep(cover, [0] * 16, ["binary"], planes=[0])
    assert reports[0].psnr_empirical_db == math.inf
    assert ",inf," in reports_to_csv(reports)


def test_weight_curves():
    curves = weight_curves(["binary", "natural", "prime"], 6)
    assert curves == {"binary": [1, 2, 4, 8, 16, 32], "natural": [1, 2, 3, 4, 5, 6],
                      "prime": [1, 2, 3, 5, 7, 11]}
    text = weight_curves_csv(curves)
    assert text.splitlines()[0] == "plane,binary,natural,prime"
    assert text.splitlines()[-1] == "5,32,6,11"


def test_weight_curve_shapes():
    c = weight_curves(["binary", "natural", "prime"], 40)
    nat, pri, binary = (np.array(c[k], float) for k in ("natural", "prime", "binary"))
    assert np.all(np.diff(nat) == 1)
    assert np.allclose(binary[1:] / binary[:-1], 2)
    l = np.arange(10, 40)
    ratio = pri[l] / (l * np.log(l))
    assert ratio.min() > 1 and ratio.max() < 1.6


def test_psnr_from_mse_consistency():
    for mse in (0.5, 1.0, 17.25, 1e-6):
        assert psnr_from_mse(mse) == pytest.approx(10 * math.log10(255 ** 2 / mse), rel=1e-12)
