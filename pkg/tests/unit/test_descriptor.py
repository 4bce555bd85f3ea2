"""
Unit tests for the JSON system descriptor.
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonsmooth_hopf.core import (
    PlanarSystem,
    SlopePair,
    System3D,
    SystemND,
    load_descriptor,
    load_system,
    parse_descriptor,
)
from nonsmooth_hopf.shimmy import ShimmyParams
from nonsmooth_hopf.utils.exceptions import DescriptorError


class TestLoadFixtures:
    """Test loading the shipped fixtures."""

    def test_planar_normal_form(self, fixtures_dir):
        """Test a planar normal-form descriptor."""
        sys = load_system(fixtures_dir / "subcritical.json")
        assert isinstance(sys, PlanarSystem)
        assert sys.is_normal_form
        assert 2 * sys.quad.a11 + sys.quad.a12 + sys.quad.b21 + 2 * sys.quad.b22 == 4.0

    def test_planar_general(self, fixtures_dir):
        """Test a general linear part."""
        sys = load_system(fixtures_dir / "planar_general.json")
        assert not sys.is_normal_form
        assert sys.mu == pytest.approx(0.0)
        assert sys.omega == pytest.approx(np.sqrt(7.0) / 2.0)

    def test_3d(self, fixtures_dir):
        """Test a three-dimensional descriptor."""
        sys = load_system(fixtures_dir / "system3d.json")
        assert isinstance(sys, System3D)
        assert sys.c1 == -1.0
        assert sys.c5 == 1.0
        assert sys.h11 == 1.0

    def test_nd(self, fixtures_dir):
        """Test a descriptor with two transverse variables."""
        sys = load_system(fixtures_dir / "system_nd.json")
        assert isinstance(sys, SystemND)
        assert sys.dim == 2
        np.testing.assert_array_equal(sys.vw, [1.0, 0.5])
        assert sys.h[1, 1, 1] == 1.0
        assert not np.any(sys.c6)

    def test_shimmy(self, fixtures_dir):
        """Test that shimmy descriptors yield the seven constants."""
        params = load_system(fixtures_dir / "shimmy.json")
        assert isinstance(params, ShimmyParams)
        assert params.c6 == -2.125

    def test_defaults(self, fixtures_dir):
        """Test that omitted blocks are zero."""
        descriptor = load_descriptor(fixtures_dir / "zero.json")
        sys = descriptor.to_system()
        assert sys.quad.is_zero
        assert sys.smooth.is_zero
        assert sys.quad.all_abs


class TestValidation:
    """Test schema and model validation."""

    def test_unknown_kind(self, fixtures_dir):
        """Test that an unknown kind is a schema error."""
        with pytest.raises(DescriptorError) as exc:
            load_system(fixtures_dir / "invalid_kind.json")
        assert exc.value.details["errors"]

    def test_not_hopf(self, fixtures_dir):
        """Test that real eigenvalues surface as a descriptor error."""
        with pytest.raises(DescriptorError):
            load_system(fixtures_dir / "not_hopf.json")

    def test_missing_file(self, tmp_path):
        """Test that an unreadable path is a descriptor error."""
        with pytest.raises(DescriptorError):
            load_descriptor(tmp_path / "absent.json")

    def test_unknown_key(self):
        """Test that extra keys are refused."""
        with pytest.raises(DescriptorError):
            parse_descriptor({"kind": "planar-nf", "sigma": 4})

    @pytest.mark.parametrize(
        "data",
        [
            {"kind": "planar-general"},
            {"kind": "planar-nf", "linear": [[0, -1], [1, 0]]},
            {"kind": "3d", "c": [1, 2, 3]},
            {"kind": "shimmy", "c": [1, 2]},
            {"kind": "nd"},
            {"kind": "planar-nf", "quad": {"a": [[1, 2, 3], [4, 5, 6]]}},
            {"kind": "planar-nf", "quad": {"slopes": [[-1, 1]]}},
            {"kind": "planar-nf", "smooth": {"quadratic": [1, 2]}},
        ],
    )
    def test_kind_requirements(self, data):
        """Test per-kind structural requirements."""
        with pytest.raises(DescriptorError):
            parse_descriptor(data)

    def test_json_text(self):
        """Test parsing from JSON text."""
        descriptor = parse_descriptor(json.dumps({"kind": "planar-nf", "mu": -0.01, "omega": 2.0}))
        sys = descriptor.to_system()
        assert sys.mu == -0.01
        assert sys.omega == 2.0

    def test_general_slopes(self):
        """Test slope pairs on the modulus terms."""
        slopes = [[-2.0, 1.0]] + [[-1.0, 1.0]] * 7
        sys = parse_descriptor({"kind": "planar-nf", "quad": {"slopes": slopes}}).to_system()
        assert sys.quad.alpha[0] == SlopePair(-2.0, 1.0)
        assert not sys.quad.all_abs

    def test_non_finite_value(self):
        """Test that model errors are reported as descriptor errors."""
        with pytest.raises(DescriptorError):
            parse_descriptor({"kind": "planar-nf", "omega": 0.0}).to_system()


finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
matrix2 = st.lists(st.lists(finite, min_size=2, max_size=2), min_size=2, max_size=2)
pair = st.tuples(finite, finite)


class TestRoundTrip:
    """Test that dumped descriptors re-parse under the same schema."""

    @pytest.mark.parametrize(
        "name",
        ["subcritical.json", "planar_general.json", "system3d.json", "system_nd.json", "shimmy.json", "zero.json"],
    )
    def test_fixture_round_trip(self, fixtures_dir, name):
        """Test dump and re-parse of every valid fixture."""
        descriptor = load_descriptor(fixtures_dir / name)
        again = parse_descriptor(descriptor.model_dump_json())
        assert again == descriptor
        assert again.model_dump_json() == descriptor.model_dump_json()

    @given(
        mu=finite,
        omega=st.floats(min_value=0.1, max_value=10.0),
        a=matrix2,
        b=matrix2,
        slopes=st.lists(pair, min_size=8, max_size=8),
    )
    @settings(max_examples=50, deadline=None)
    def test_planar_round_trip(self, mu, omega, a, b, slopes):
        """Test that a random planar descriptor survives dump and re-parse with the same system."""
        descriptor = parse_descriptor(
            {"kind": "planar-nf", "mu": mu, "omega": omega, "quad": {"a": a, "b": b, "slopes": slopes}}
        )
        again = parse_descriptor(json.loads(descriptor.model_dump_json()))
        assert again == descriptor
        assert again.to_system() == descriptor.to_system()
