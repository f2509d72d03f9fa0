import numpy as np
import pytest
from numpy.testing import assert_allclose

from bifreemax import (
    DiscreteMeasure,
    GridUDF,
    bdf_from_law,
    sup_distance,
    sup_distance_1d,
    uniform_df,
)
from bifreemax.serialize import (
    bdf_from_obj,
    bdf_to_obj,
    dump_json,
    fmt,
    load_json,
    measure_from_obj,
    measure_to_obj,
    udf_from_obj,
    udf_to_obj,
    write_surface_csv,
)
from bifreemax.specs import (
    SpecError,
    parse_copula,
    parse_marginal,
    parse_measure,
    parse_pickands,
    parse_spec,
)


class TestSpecGrammar:
    def test_positional_and_keyword(self):
        assert parse_spec("amh:theta=0.5") == ("amh", [], {"theta": 0.5})
        assert parse_spec("lomax:0.5,1") == ("lomax", [0.5, 1.0], {})
        assert parse_spec("dirac:-10") == ("dirac", [-10.0], {})
        assert parse_spec("independence") == ("independence", [], {})

    def test_bad_number(self):
        with pytest.raises(SpecError):
            parse_spec("amh:theta=abc")

    def test_marginals(self):
        assert parse_marginal("uniform:0,2").eval(1.0) == 0.5
        assert parse_marginal("dirac:3").eval(3.0) == 1.0
        assert parse_marginal("pareto:alpha=1").eval(2.0) == 0.5
        assert parse_marginal("exponential").kind == "exponential"
        assert parse_marginal("gumbel").kind == "gev"
        assert parse_marginal("frechet:alpha=2").params["xi"] == 0.5
        assert parse_marginal("semicircle").eval(0.0) == 0.5

    def test_copulas(self):
        assert parse_copula("amh:theta=0.5").family == "amh"
        assert parse_copula("lomax:p=0.5,theta=1").params["p"] == 0.5
        assert parse_copula("gumbel-mixed:theta=1").eval(0.5, 0.5) == \
            pytest.approx(1.0 / 3.0)
        assert parse_copula("survival-of:independence").eval(0.3, 0.5) == \
            pytest.approx(0.15)
        assert parse_copula("ev-pickands:logistic:m=2").family == "ev-pickands"
        assert parse_copula("bifree-pickands:lower").eval(0.3, 0.7) == \
            pytest.approx(0.3)

    def test_pickands(self):
        assert parse_pickands("one").eval(0.3) == 1.0
        assert parse_pickands("logistic:m=2").eval(0.5) == \
            pytest.approx(0.5 ** 0.5)
        assert parse_pickands("marshall-olkin:0.5,0.5").eval(0.5) == \
            pytest.approx(0.75)

    def test_measure_inline_dirac(self):
        m = parse_measure("dirac:1,1")
        assert m.total_mass == 1.0
        assert m.tail(0.5, 0.5) == 1.0

    def test_unknown_family(self):
        with pytest.raises(SpecError):
            parse_marginal("cauchy:1")
        with pytest.raises(SpecError):
            parse_copula("gauss:0.5")

    def test_spectral_from_file(self, tmp_path):
        path = tmp_path / "rho.json"
        dump_json(measure_to_obj(DiscreteMeasure(
            [[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])), path)
        A = parse_pickands(f"pickands-spectral:@{path}")
        assert A.eval(0.25) == pytest.approx(1.0)


class TestSerialization:
    def test_udf_round_trip(self):
        f = GridUDF([0.0, 1.0, 2.5], [0.2, 0.7, 1.0])
        g = udf_from_obj(udf_to_obj(f))
        xs = np.linspace(-1, 3, 37)
        assert sup_distance_1d(f, g, xs) == 0.0
        assert g.saturation == f.saturation

    def test_udf_sampling_closed_form(self):
        f = uniform_df(0, 1)
        obj = udf_to_obj(f, knots=np.linspace(0, 1, 11))
        g = udf_from_obj(obj)
        assert g.eval(0.5) == 0.5

    def test_bdf_round_trip(self):
        F = bdf_from_law(DiscreteMeasure([[0.0, 1.0], [1.0, 0.5]], [0.4, 0.6]))
        G = bdf_from_obj(bdf_to_obj(F))
        probe = (np.linspace(-0.5, 1.5, 21), np.linspace(-0.5, 1.5, 21))
        assert sup_distance(F, G, probe) == 0.0

    def test_bdf_obj_shape(self):
        F = bdf_from_law(DiscreteMeasure([[0.0, 1.0]], [1.0]))
        obj = bdf_to_obj(F)
        assert obj["kind"] == "grid2d"
        assert obj["L"] == [0.0, 1.0]
        assert len(obj["marginals"]) == 2

    def test_measure_round_trip(self):
        m = DiscreteMeasure([[0.5, 1.5], [2.0, 0.1]], [0.25, 0.5])
        m2 = measure_from_obj(measure_to_obj(m))
        assert_allclose(m2.points, m.points)
        assert_allclose(m2.masses, m.masses)

    def test_file_round_trip_dispatch(self, tmp_path):
        F = bdf_from_law(DiscreteMeasure([[0.0, 1.0]], [1.0]))
        path = tmp_path / "f.json"
        dump_json(bdf_to_obj(F), path)
        G = load_json(path)
        assert G.eval(0.5, 1.0) == 1.0

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            udf_from_obj({"kind": "mystery"})


class TestCSV:
    def test_surface_format_and_round_trip(self, tmp_path):
        path = tmp_path / "s.csv"
        xs = np.array([0.0, 0.1])
        ys = np.array([0.5, 1.0 / 3.0])
        vals = np.array([[0.25, 1e-17], [1.0, 2.0 / 3.0]])
        write_surface_csv(path, xs, ys, vals)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "x,y,value"
        assert len(lines) == 5
        # row-major ordering and exact float round trip
        x, y, v = lines[2].split(",")
        assert float(x) == 0.0 and float(y) == ys[1] and float(v) == vals[0, 1]

    def test_fmt_round_trips(self):
        for v in (1.0 / 3.0, 1e-300, 0.1 + 0.2, math_pi := 3.141592653589793):
            assert float(fmt(v)) == v
