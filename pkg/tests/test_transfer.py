import numpy as np
import pytest

from simembed import (
    ConfigError,
    TransferFamily,
    TransferFunction,
    apply,
    c_f,
    default_family,
    parse_family,
    parse_transfer,
)


class TestApply:
    def test_ramp_linear_region(self):
        assert apply(TransferFunction("ramp", 5), 0.1) == pytest.approx(0.5)

    def test_zero_maps_to_zero(self):
        for f in (TransferFunction("ramp", 7), TransferFunction("sign"),
                  TransferFunction("identity")):
            assert apply(f, 0.0) == 0.0

    def test_ramp_clips(self):
        assert apply(TransferFunction("ramp", 1000), 0.01) == 1.0

    def test_sign_values(self):
        f = TransferFunction("sign")
        assert apply(f, 0.3) == 1.0
        assert apply(f, -0.3) == -1.0
        assert apply(f, 0.0) == 0.0

    def test_identity_clips(self):
        f = TransferFunction("identity")
        assert apply(f, 0.4) == 0.4
        assert apply(f, 1.7) == 1.0

    def test_array_input(self):
        out = apply(TransferFunction("ramp", 2), np.array([-1.0, 0.25, 1.0]))
        assert np.array_equal(out, [-1.0, 0.5, 1.0])


class TestDefaultFamily:
    def test_slope_grid(self):
        fam = default_family()
        assert len(fam.members) == 6
        slopes = [f.slope for f in fam.members]
        assert slopes == [1.0, 5.0, 10.0, 50.0, 100.0, 1000.0]
        assert slopes == sorted(slopes)

    def test_antisymmetry_spot_check(self):
        for f in default_family().members:
            for x in (0.3, -0.3):
                assert apply(f, -x) == -apply(f, x)


class TestProperties:
    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(0)
        xs = rng.uniform(-2, 2, 10_000)
        for f in default_family().members:
            assert np.array_equal(apply(f, -xs), -apply(f, xs))

    def test_monotonicity_and_range(self):
        xs = np.sort(np.random.default_rng(1).uniform(-2, 2, 2000))
        for f in list(default_family().members) + [TransferFunction("sign"),
                                                   TransferFunction("identity")]:
            ys = apply(f, xs)
            assert np.all(np.diff(ys) >= 0)
            assert np.all(np.abs(ys) <= 1.0)

    def test_steep_ramp_equals_sign_outside_band(self):
        xs = np.concatenate([np.linspace(0.01, 2, 500),
                             np.linspace(-2, -0.01, 500)])
        steep = apply(TransferFunction("ramp", 1000), xs)
        assert np.array_equal(steep, np.sign(xs))


class TestCf:
    def test_identity_spread(self):
        assert c_f(TransferFunction("identity"), [-1.0, 0.0, 1.0]) == 2.0

    def test_sign_spread(self):
        assert c_f(TransferFunction("sign"), [-0.4, 0.7]) == 2.0

    def test_ramp_spread(self):
        assert c_f(TransferFunction("ramp", 5), [0.05, 0.1]) == pytest.approx(0.25)

    def test_constant_values_zero(self):
        assert c_f(TransferFunction("identity"), [0.3, 0.3]) == 0.0

    def test_empty_error(self):
        with pytest.raises(ConfigError):
            c_f(TransferFunction("sign"), [])


class TestConstruction:
    def test_ramp_needs_positive_slope(self):
        with pytest.raises(ConfigError):
            TransferFunction("ramp")
        with pytest.raises(ConfigError):
            TransferFunction("ramp", -2)

    def test_non_ramp_takes_no_slope(self):
        with pytest.raises(ConfigError):
            TransferFunction("sign", 3)

    def test_family_must_be_distinct_nonempty(self):
        with pytest.raises(ConfigError):
            TransferFamily(())
        f = TransferFunction("sign")
        with pytest.raises(ConfigError):
            TransferFamily((f, f))

    def test_labels(self):
        assert TransferFunction("ramp", 5).label == "ramp:5"
        assert TransferFunction("sign").label == "sign"


class TestParsing:
    def test_parse_transfer(self):
        assert parse_transfer("ramp:50") == TransferFunction("ramp", 50)
        assert parse_transfer("sign") == TransferFunction("sign")
        assert parse_transfer("identity") == TransferFunction("identity")
        with pytest.raises(ConfigError):
            parse_transfer("ramp:zero")
        with pytest.raises(ConfigError):
            parse_transfer("cubic")

    def test_parse_family(self):
        assert parse_family("default") == default_family()
        fam = parse_family("ramp:1,10")
        assert [f.slope for f in fam.members] == [1.0, 10.0]
        with pytest.raises(ConfigError):
            parse_family("ramp:a,b")
        with pytest.raises(ConfigError):
            parse_family("everything")
