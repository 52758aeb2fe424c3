import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from pydantic import ValidationError

from shellframes import FieldFile, FieldFileError, fieldio
from shellframes.config import ScenarioConfig, dump_config, load_config, parse_config

SHAPES = {"scalar": (), "vector2": (2,), "tensor2sym": (2, 2), "tensor2": (2, 2)}
any_float = st.floats(allow_nan=False, allow_infinity=False, width=64)


@st.composite
def field_files(draw):
    rank = draw(st.sampled_from(sorted(SHAPES)))
    n1, n2 = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    vals = draw(arrays(np.float64, SHAPES[rank] + (n1, n2), elements=any_float))
    if rank == "tensor2sym":
        vals[1, 0] = vals[0, 1]
    lo = draw(st.floats(-10, 10))
    dom = ((lo, lo + draw(st.floats(0.1, 10))), (0.0, 2 * np.pi))
    per = (draw(st.booleans()), draw(st.booleans()))
    return FieldFile(draw(st.sampled_from(["eps0", "u", "N"])), rank, vals, dom, per)


@given(field_files())
def test_round_trip_is_bit_exact(ff):
    back = fieldio.loads(ff.dumps())
    assert back.equals(ff)
    assert back.dumps() == ff.dumps()


def test_round_trip_through_disk(tmp_path):
    vals = np.random.default_rng(0).normal(size=(2, 7, 5)) * 1e-300
    ff = FieldFile("u", "vector2", vals, ((0.0, 1.0), (0.0, 0.1)), (False, True))
    ff.write(tmp_path / "u.field")
    assert fieldio.read(tmp_path / "u.field").equals(ff)


def test_header_layout():
    ff = FieldFile("w", "scalar", np.zeros((2, 3)))
    lines = ff.dumps().splitlines()
    assert lines[0] == fieldio.MAGIC
    assert lines[1:6] == ["name: w", "rank: scalar", "dims: 2 3", "domain: 0.0 1.0 0.0 1.0", "periodic: 0 0"]
    assert lines[6] == "---" and len(lines) == 7 + 6


@pytest.mark.parametrize("text", [
    "",
    "not a field file\n",
    fieldio.MAGIC + "\nname: a\n",
    fieldio.MAGIC + "\nname: a\nrank: matrix\ndims: 1 1\ndomain: 0 1 0 1\nperiodic: 0 0\n---\n1\n",
    fieldio.MAGIC + "\nname: a\nrank: scalar\ndims: 2 1\ndomain: 0 1 0 1\nperiodic: 0 0\n---\n1\n",
    fieldio.MAGIC + "\nname: a\nrank: scalar\ndims: 1 1\ndomain: 0 1 0 1\nperiodic: 0 0\n---\nx\n",
    fieldio.MAGIC + "\nname: a\nrank: vector2\ndims: 1 1\ndomain: 0 1 0 1\nperiodic: 0 0\n---\n1\n",
    fieldio.MAGIC + "\nname: a\nrank: scalar\ndims: one 1\ndomain: 0 1 0 1\nperiodic: 0 0\n---\n1\n",
])
def test_malformed_files_rejected(text):
    with pytest.raises(FieldFileError):
        fieldio.loads(text)


def test_missing_file_and_bad_shape():
    with pytest.raises(FieldFileError):
        fieldio.read("/nonexistent/file.field")
    with pytest.raises(FieldFileError):
        FieldFile("a", "vector2", np.zeros((3, 2, 2)))


MINIMAL = {"surface": {"kind": "sphere", "params": {"R": 2.0}}}


def test_config_defaults_and_round_trip():
    cfg = ScenarioConfig.model_validate(MINIMAL)
    assert cfg.material.h == 0.01 and cfg.grid.n == (32, 32)
    again = parse_config(dump_config(cfg))
    assert again == cfg


def test_yaml_config(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("surface:\n  kind: torus\n  params: {R0: 3.0, r: 1.0}\ngrid:\n  n: [8, 8]\n")
    cfg = load_config(p)
    assert cfg.surface.kind == "torus" and cfg.grid.n == (8, 8)


@pytest.mark.parametrize("bad", [
    {"surface": {"kind": "sphere"}, "bogus": 1},
    {"surface": {"kind": "sphere", "radius": 1.0}},
    {"surface": {"kind": "blob"}},
    {"surface": {}},
    {"surface": {"kind": "sphere", "lame_file": "a.field", "curvature_file": "b.field"}},
    {"surface": {"lame_file": "a.field"}},
    {"surface": {"kind": "plate"}, "dispersion": {"kind": "drum"}},
])
def test_config_rejects_invalid(bad):
    with pytest.raises(ValidationError):
        ScenarioConfig.model_validate(bad)


def test_shipped_configs_parse():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "configs"
    files = sorted(root.glob("*.json"))
    assert files
    for f in files:
        json.loads(f.read_text())
        load_config(f)
