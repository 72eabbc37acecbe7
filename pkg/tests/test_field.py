import numpy as np
import pytest

from airyfilt import (
    ComplexField,
    GeometryError,
    GridError,
    GridSpec,
    field_energy,
    gen_object,
    letter_h_object,
    line_profile,
    make_field,
    phase_map,
    point_object,
    ring_object,
    text_object,
    two_point_object,
)

from conftest import unit_grid


class TestGridSpec:
    def test_rejects_odd_dimensions(self):
        with pytest.raises(GridError):
            GridSpec(3, 64, 1.0, 1.0)

    def test_rejects_tiny_and_nonpositive(self):
        with pytest.raises(GridError):
            GridSpec(0, 64, 1.0, 1.0)
        with pytest.raises(GridError):
            GridSpec(64, 64, 0.0, 1.0)
        with pytest.raises(GridError):
            GridSpec(64, 64, 1.0, -1e-6)

    def test_center_sample_is_origin(self):
        g = GridSpec(64, 64, 2.0, 3.0)
        assert g.x()[32] == 0.0
        assert g.y()[32] == 0.0
        assert g.x()[0] == -64.0
        assert g.y()[-1] == 31 * 3.0


class TestMakeFieldAndEnergy:
    def test_zero_fill_has_zero_energy(self):
        f = make_field(unit_grid(), 0j)
        assert field_energy(f) == 0.0

    def test_constant_fill_energy(self):
        f = make_field(unit_grid(), 1 + 0j)
        assert field_energy(f) == pytest.approx(64 * 64, rel=1e-14)

    def test_energy_zero_iff_field_zero(self, rng):
        g = unit_grid(16)
        for _ in range(10):
            data = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
            f = ComplexField(g, data)
            assert field_energy(f) > 0
        assert field_energy(make_field(g)) == 0.0

    def test_nonfinite_data_rejected(self):
        g = unit_grid(4)
        data = np.zeros((4, 4), complex)
        data[1, 1] = np.nan
        with pytest.raises(GridError):
            ComplexField(g, data)


class TestObjects:
    def test_point_object_single_sample(self):
        f = point_object(unit_grid(), 32, 32)
        assert np.count_nonzero(f.data) == 1
        assert f.data[32, 32] == 1.0

    def test_disk_matches_per_pixel_radius_oracle(self):
        g = GridSpec(64, 64, 1.0, 1.0)
        r_out = 9.5
        f = ring_object(g, 0.0, r_out)
        count = 0  # brute-force radius check, pixel by pixel
        for i in range(64):
            for j in range(64):
                if np.hypot(i - 32, j - 32) <= r_out:
                    count += 1
        assert np.count_nonzero(f.data) == count

    def test_annulus_radii(self):
        g = GridSpec(256, 256, 1.0, 1.0)
        f = ring_object(g, 10.0, 12.0)
        ii, jj = np.nonzero(f.data)
        r = np.hypot(ii - 128, jj - 128)
        assert np.all(r >= 10.0) and np.all(r <= 12.0)
        assert len(ii) > 0

    def test_ring_validation(self):
        g = unit_grid()
        with pytest.raises(GeometryError):
            ring_object(g, 20.0, 10.0)
        with pytest.raises(GeometryError):
            ring_object(g, 0.0, 40.0)  # beyond half-extent 32

    def test_generators_emit_zero_phase(self):
        g = GridSpec(128, 128, 1.0, 1.0)
        objs = [
            ring_object(g, 5.0, 8.0),
            letter_h_object(g, 6.0),
            text_object(g, "HI", scale=2),
            two_point_object(g, 40, 40, 80, 80),
        ]
        for f in objs:
            nz = f.data[f.data != 0]
            assert np.all(nz == 1.0)

    def test_letter_h_shape(self):
        g = GridSpec(128, 128, 1.0, 1.0)
        f = letter_h_object(g, 4.0)
        on = f.data.real > 0
        assert on.sum() == 4 * 7 * 4 * 2 + 5 * 4 * 4 - 2 * 4 * 4  # verticals + bar - overlaps

    def test_text_raster_fits_and_errors(self):
        g = GridSpec(128, 128, 1.0, 1.0)
        f = text_object(g, "MUKT", scale=1)
        assert np.count_nonzero(f.data) > 0
        with pytest.raises(GeometryError):
            text_object(g, "MUKT", scale=10)
        with pytest.raises(GeometryError):
            text_object(g, "@", scale=1)

    def test_gen_object_dispatch(self):
        g = unit_grid()
        f = gen_object("point", g, i=1, j=2)
        assert f.data[1, 2] == 1.0
        with pytest.raises(GeometryError):
            gen_object("blob", g)


class TestLineProfile:
    def test_constant_field(self):
        f = make_field(unit_grid(), 1 + 0j)
        prof = line_profile(f, "row", 10)
        assert np.all(prof.intensity == 1.0)
        assert prof.position[32] == 0.0

    def test_delta_row(self):
        f = point_object(unit_grid(), 32, 32)
        prof = line_profile(f, "row", 32)
        assert prof.intensity[32] == 1.0
        assert np.count_nonzero(prof.intensity) == 1
        assert prof.position[np.argmax(prof.intensity)] == 0.0

    def test_index_out_of_range(self):
        f = make_field(unit_grid())
        with pytest.raises(IndexError):
            line_profile(f, "row", 64)
        with pytest.raises(IndexError):
            line_profile(f, "col", -1)

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            line_profile(make_field(unit_grid()), "diag", 0)

    def test_even_symmetric_field_gives_palindromic_profile(self, rng):
        # even symmetry about the grid centre: f[i] == f[(2c - i) mod n]
        n = 64
        g = unit_grid(n)
        data = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        sym = 0.5 * (data + np.roll(data[::-1, ::-1], (1, 1), axis=(0, 1)))
        prof = line_profile(ComplexField(g, sym), "row", n // 2)
        inten = prof.intensity
        assert np.allclose(inten[1:], inten[1:][::-1], rtol=1e-12, atol=1e-12 * inten.max())


class TestPhaseMap:
    def test_uniform_quadrature_phase(self):
        f = make_field(unit_grid(), np.exp(1j * np.pi / 2))
        ph = phase_map(f, amp_floor=0.0)
        assert np.allclose(ph, np.pi / 2, atol=1e-15)

    def test_zero_field_all_undefined(self):
        ph = phase_map(make_field(unit_grid()), amp_floor=0.0)
        assert np.all(np.isnan(ph))

    def test_principal_value_at_minus_one(self):
        f = make_field(unit_grid(), -1 + 0j)
        ph = phase_map(f)
        assert np.all(ph == np.pi)

    def test_default_floor_masks_tiny_samples(self):
        g = unit_grid(4)
        data = np.full((4, 4), 1.0, complex)
        data[0, 0] = 1e-12
        ph = phase_map(ComplexField(g, data))
        assert np.isnan(ph[0, 0])
        assert np.isfinite(ph[1, 1])

    def test_negative_floor_rejected(self):
        with pytest.raises(ValueError):
            phase_map(make_field(unit_grid()), amp_floor=-1.0)
