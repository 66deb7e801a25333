import io

import numpy as np
import pytest

from hybridbm.io import dumps, fmt, read_csv, write_csv
from hybridbm.validate import run_validation


def test_core_suite_passes_and_is_deterministic():
    a = run_validation("core", seed=42)
    b = run_validation("core", seed=42)
    assert a.passed
    assert dumps(a.to_dict()) == dumps(b.to_dict())
    names = [c.name for c in a.checks]
    assert names == sorted(names)
    assert "wall_time" not in a.to_dict()


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_validation("everything")


@pytest.mark.slow
def test_full_suite_passes():
    assert run_validation("full", seed=7).passed


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    data = rng.standard_normal((20, 3)) * 10.0 ** rng.integers(-300, 300, (20, 3))
    path = tmp_path / "d.csv"
    write_csv(path, ["a", "b", "c"], data)
    raw = path.read_bytes()
    assert b"\r" not in raw
    header, back = read_csv(path)
    assert header == ["a", "b", "c"]
    np.testing.assert_array_equal(back, data)


def test_fmt_and_json():
    assert float(fmt(0.1 + 0.2)) == 0.1 + 0.2
    buf = io.StringIO()
    write_csv(buf, ["x"], [[1.5]])
    assert buf.getvalue() == "x\n1.5\n"
    assert dumps({"b": np.float64(1.0), "a": np.arange(2)}) == dumps({"a": [0, 1], "b": 1.0})
