import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigsim.errors import DomainError, ShapeError
from sigsim.imaging import (
    GrayImage,
    RenderScale,
    compose_pair,
    encode_pgm,
    read_pgm,
    render_group,
    render_pair,
    write_pgm,
)
from sigsim.simlab import SimulationConfig, regenerate_pair, run_study


def expected_pixel(v, center=0.0, half=3.0):
    """Scalar restatement of the mapping, with explicit half-away rounding."""
    x = 255.0 * (v - (center - half)) / (2.0 * half)
    r = int(x + 0.5) if x >= 0 else -int(-x + 0.5)
    return min(255, max(0, r))


class TestRender:
    def test_center_is_128(self):
        img = render_group(np.zeros(4), 2, 2)
        assert img.pixels.tolist() == [128] * 4

    def test_clamp(self):
        img = render_group(np.array([-3.0, -50.0, 3.0, 1e9]), 2, 2)
        assert img.pixels.tolist() == [0, 0, 255, 255]

    def test_row_major(self):
        img = render_group(np.array([-3.0, 3.0, 0.0, -3.0, 3.0, 0.0]), 3, 2)
        assert img.as_array().tolist() == [[0, 255, 128], [0, 255, 128]]

    def test_matches_scalar_definition(self):
        values = np.linspace(-4, 4, 1001)
        img = render_group(values[:1000], 40, 25, RenderScale(0.0, 3.0))
        assert img.pixels.tolist() == [expected_pixel(v) for v in values[:1000]]

    def test_half_steps_round_away_from_zero(self):
        scale = RenderScale(center=127.5, half_range=127.5)  # level == value
        img = render_group(np.array([0.5, 1.5, 2.5, 254.5]), 2, 2, scale)
        assert img.pixels.tolist() == [1, 2, 3, 255]

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            render_group(np.zeros(5), 2, 2)

    def test_scale_validation(self):
        with pytest.raises(DomainError):
            RenderScale(0.0, 0.0)
        assert RenderScale.for_generator(2.0, 0.5) == RenderScale(2.0, 1.5)

    @given(st.lists(st.floats(-10, 10), min_size=2, max_size=40))
    def test_monotone(self, values):
        arr = np.array(values)
        img = render_group(arr, len(values), 1)
        order = np.argsort(arr, kind="stable")
        assert np.all(np.diff(img.pixels[order].astype(int)) >= 0)

    def test_pair_shares_scale(self):
        a, b = render_pair(np.zeros(4), np.full(4, 1.5), 2, 2)
        assert a.pixels.tolist() == [128] * 4
        assert b.pixels.tolist() == [expected_pixel(1.5)] * 4


class TestCompose:
    def test_width(self):
        a = GrayImage(2, 2, [0, 0, 0, 0])
        out = compose_pair(a, a, 4)
        assert (out.width, out.height) == (8, 2)
        assert out.as_array()[:, 2:6].tolist() == [[255] * 4] * 2

    def test_no_separator(self):
        a = GrayImage(2, 1, [1, 2])
        b = GrayImage(1, 1, [3])
        assert compose_pair(a, b, 0).pixels.tolist() == [1, 2, 3]

    def test_symmetric(self):
        a = GrayImage(3, 2, np.arange(6))
        arr = compose_pair(a, a, 5).as_array()
        assert np.array_equal(arr[:, :3], arr[:, -3:])

    def test_height_mismatch(self):
        with pytest.raises(ShapeError):
            compose_pair(GrayImage(1, 2, [0, 0]), GrayImage(2, 1, [0, 0]))


class TestPgm:
    def test_header_2x2(self, tmp_path):
        img = GrayImage(2, 2, [0, 64, 128, 255])
        path = tmp_path / "x.pgm"
        assert write_pgm(img, path) == 15
        assert path.read_bytes() == b"P5\n2 2\n255\n" + bytes([0, 64, 128, 255])

    def test_512(self):
        img = GrayImage(512, 512, np.zeros(512 * 512))
        buf = io.BytesIO()
        assert write_pgm(img, buf) == 15 + 262144
        assert buf.getvalue()[:15] == b"P5\n512 512\n255\n"

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        img = GrayImage(17, 9, rng.integers(0, 256, 17 * 9))
        write_pgm(img, tmp_path / "r.pgm")
        assert read_pgm(tmp_path / "r.pgm") == img
        assert read_pgm(encode_pgm(img)) == img

    def test_deterministic_bytes(self):
        img = GrayImage(3, 3, range(9))
        assert encode_pgm(img) == encode_pgm(GrayImage(3, 3, range(9)))

    def test_bad_dimensions(self):
        with pytest.raises(ShapeError):
            GrayImage(2, 2, [1, 2, 3])
        with pytest.raises(ShapeError):
            GrayImage(0, 1, [])

    def test_rejects_other_formats(self):
        with pytest.raises(ValueError):
            read_pgm(b"P2\n1 1\n255\n0")

    def test_write_failure_is_oserror(self, tmp_path):
        with pytest.raises(OSError):
            write_pgm(GrayImage(1, 1, [0]), tmp_path / "missing" / "x.pgm")


def test_golden_size_256_pair(golden_dir):
    cfg = SimulationConfig(sizes=(256,), trials_per_size=200)
    s = run_study(cfg).summaries[0]
    a, b = regenerate_pair(cfg, 0, s.selected_trial)
    left, right = render_pair(a, b, 16, 16, RenderScale.for_generator(0.0, 1.0))
    assert encode_pgm(compose_pair(left, right, 4)) == (golden_dir / "size_256_t200_pair.pgm").read_bytes()
