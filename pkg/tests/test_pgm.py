import hashlib

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from virtplane.pgm import GrayImage, PGMError, read_pgm, synthesize, write_pgm


def test_read_p5():
    img = read_pgm(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    assert img.width == img.height == 2
    assert img.pixels.tolist() == [[0, 255], [128, 64]]


def test_p2_with_comments_equals_p5():
    p2 = b"P2\n# made by hand\n2 # width\n2\n255\n0 255\n# mid-raster comment\n128\n64\n"
    p5 = b"P5 2 2 255\n" + bytes([0, 255, 128, 64])
    assert read_pgm(p2) == read_pgm(p5)


def test_comment_in_p5_header():
    img = read_pgm(b"P5\n#c\n1 1\n#d\n255\n\x07")
    assert img.pixels.tolist() == [[7]]


def test_truncated_raster():
    with pytest.raises(PGMError, match="truncated") as err:
        read_pgm(b"P5\n2 2\n255\n" + bytes([1, 2, 3]))
    assert err.value.offset == 14


def test_truncated_ascii():
    with pytest.raises(PGMError, match="truncated"):
        read_pgm(b"P2 2 2 255 1 2 3")


@pytest.mark.parametrize("data", [
    b"P6\n1 1\n255\n\x00",
    b"",
    b"P5\n1\n",
    b"P5\n1 1\n65535\n\x00\x00",
    b"P5\n0 1\n255\n",
    b"P5\nx 1\n255\n\x00",
    b"P5\n1 1\n255",
    b"P2\n1 1\n9\n10\n",
    b"P5\n1 1\n100\n\xff",
])
def test_malformed(data):
    with pytest.raises(PGMError):
        read_pgm(data)


def test_parser_ignores_trailing_bytes():
    img = read_pgm(b"P5\n1 1\n255\n\x05garbage")
    assert img.pixels.tolist() == [[5]]


def test_minimal_p5():
    data = write_pgm(GrayImage(np.zeros((1, 1), int)))
    assert data == b"P5\n1 1\n255\n\x00"
    assert read_pgm(data).pixels.tolist() == [[0]]


def test_write_is_stable():
    img = synthesize("random", 31, 17, seed=9)
    assert hashlib.sha256(write_pgm(img)).hexdigest() == hashlib.sha256(write_pgm(img)).hexdigest()
    assert write_pgm(img) == write_pgm(synthesize("random", 31, 17, seed=9))


@given(arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))))
def test_roundtrip_property(pixels):
    img = GrayImage(pixels)
    data = write_pgm(img)
    assert read_pgm(data) == img
    assert write_pgm(read_pgm(data)) == data


def test_image_is_immutable():
    img = synthesize("constant", 2, 2, value=3)
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1


def test_image_validation():
    with pytest.raises(ValueError):
        GrayImage(np.array([[256]]))
    with pytest.raises(ValueError):
        GrayImage(np.zeros(4))
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 3)))


def test_synthesize_constant():
    assert synthesize("constant", 3, 3, value=7).pixels.tolist() == [[7] * 3] * 3


def test_synthesize_gradient():
    img = synthesize("gradient", 16, 16)
    for y in range(16):
        for x in range(16):
            assert img.pixels[y, x] == (x + 16 * y) % 256


def test_synthesize_checker():
    assert synthesize("checker", 3, 2).pixels.tolist() == [[0, 255, 0], [255, 0, 255]]


def test_synthesize_random_seeded():
    assert synthesize("random", 8, 8, seed=1) == synthesize("random", 8, 8, seed=1)
    assert synthesize("random", 8, 8, seed=1) != synthesize("random", 8, 8, seed=2)


@pytest.mark.parametrize("w, h", [(0, 3), (3, 0), (-1, 2)])
def test_synthesize_bad_size(w, h):
    with pytest.raises(ValueError):
        synthesize("gradient", w, h)
