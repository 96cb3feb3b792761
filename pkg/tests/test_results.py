# This file is part of PyThinFlow, a numerical laboratory for compressible
# barotropic flows in thin channels.
# Copyright (C) 2026, the PyThinFlow developers
# 
# PyThinFlow is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
# 
# PyThinFlow is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
# 
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.


import json

import numpy as np
import pandas as pd
import pytest

from PyThinFlow import (
  FluidState3D, Profile1D, ThinLimitTable, dumpTrajectory, exportVTU, inequalitySuite, plotInequalities,
  plotRobustness, plotThinLimit, profilesTable, readCSV, readTrajectory, robustnessRun, trajectorySummary,
  uniformState, writeCSV, writeManifest,
)


def test_csv(tmp_path):
  table = pd.DataFrame({"t": [0., 0.1], "x": [1. / 3., 2.]})
  path = writeCSV(table, tmp_path / "out" / "table.csv", "0123456789ab")
  first = path.read_bytes()
  assert first.startswith(b"# config_hash=0123456789ab\nt,x\n")
  writeCSV(table, path, "0123456789ab")
  assert path.read_bytes() == first
  back, config_hash = readCSV(path)
  assert config_hash == "0123456789ab"
  assert list(back.columns) == ["t", "x"]
  np.testing.assert_allclose(back.values, table.values, rtol=1e-15)


def test_csv_without_hash(tmp_path):
  path = tmp_path / "plain.csv"
  path.write_text("t,x\n0,1\n")
  with pytest.raises(IOError):
    readCSV(path)


def test_manifest(tmp_path):
  path = writeManifest(tmp_path / "manifest.json", {"b": 1, "a": np.float64(2.), "c": np.arange(2), "d": None})
  text = path.read_text()
  assert text.index('"a"') < text.index('"b"')
  assert json.loads(text) == {"a": 2., "b": 1, "c": [0, 1], "d": None}


def test_trajectory_summary(channel, law):
  states = [uniformState(channel, 1., 0.), uniformState(channel, 1., 0.5)]
  summary = trajectorySummary(states, law, channel)
  assert list(summary.columns) == ["t", "mass", "energy", "min_rho", "max_u"]
  assert summary["mass"].tolist() == pytest.approx([channel.v, channel.v])
  assert summary["max_u"].tolist() == [0., 0.]


def test_profiles_table():
  profiles = [Profile1D(np.ones(4), np.zeros(4), 0.), Profile1D(np.ones(4), np.zeros(4), 0.5)]
  table = profilesTable(profiles)
  assert list(table.columns) == ["t", "y", "rho", "u"]
  assert len(table) == 8
  assert table["t"].tolist() == [0.] * 4 + [0.5] * 4


def test_trajectory_dump(channel, rng, tmp_path):
  states = [
    FluidState3D(1. + rng.random(channel.shape), rng.standard_normal((3,) + channel.shape), t, channel)
    for t in (0., 0.25)
  ]
  path = dumpTrajectory(states, tmp_path / "trajectory.bin")
  assert path.stat().st_size == 8 * 2 * (4 + 4 * 2 * 2 * 16)
  back = readTrajectory(path, channel)
  assert [s.t for s in back] == [0., 0.25]
  for a, b in zip(states, back):
    np.testing.assert_array_equal(a.rho, b.rho)
    np.testing.assert_array_equal(a.u, b.u)


def test_truncated_trajectory(tmp_path):
  path = tmp_path / "broken.bin"
  path.write_bytes(np.array([0., 2., 2., 2., 1.], dtype="<f8").tobytes())
  with pytest.raises(IOError):
    readTrajectory(path)
  empty = dumpTrajectory([], tmp_path / "empty.bin")
  assert readTrajectory(empty) == []


def test_vtu_export(channel, tmp_path):
  meshio = pytest.importorskip("meshio")
  path = exportVTU(uniformState(channel), channel, tmp_path / "final.vtu")
  mesh = meshio.read(path)
  assert mesh.points.shape == (3 * 3 * 17, 3)
  assert mesh.cell_data["rho"][0].shape == (2 * 2 * 16,)


def test_plots(small_config, tmp_path):
  verdict = robustnessRun(small_config, delta=1e-4)
  plotRobustness(verdict, tmp_path / "robustness.png")
  table = ThinLimitTable([[0.5, 2, 2, 8, 3, 1e-2, 1e-1], [0.25, 4, 4, 8, 5, 1e-3, 1e-2]], 2.)
  plotThinLimit(table, tmp_path / "thinlimit.png")
  report = inequalitySuite([1., 0.5], n=4, n_fields=1, n_lame=0)
  plotInequalities(report, tmp_path / "inequalities.png")
  for name in ("robustness", "thinlimit", "inequalities"):
    assert (tmp_path / f"{name}.png").stat().st_size > 0
