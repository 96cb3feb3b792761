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
import logging

import numpy as np
import pandas as pd
import matplotlib.pyplot as plt

from .Solver3D import FluidState3D, totalEnergy, totalMass
from .utils import ConfigurationError, atomicWrite

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"
RECORD_DTYPE = "<f8"


def writeCSV(table, path, config_hash):
  """
  Write a table as CSV: a comment line with the configuration hash, a
  header row, then the rows with 17 significant digits. The file is
  replaced atomically.

  :param table: Table to write
  :type table: pandas.DataFrame
  :param path: Output file
  :type path: str or pathlib.Path
  :param config_hash: Hash of the configuration that produced the table
  :type config_hash: str
  """
  text = f"# config_hash={config_hash}\n" + table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
  path = atomicWrite(path, text)
  logger.info(f"wrote {path}")
  return path


def readCSV(path):
  """
  Read back a CSV written by :func:`writeCSV`.

  :return: The table and the configuration hash
  :rtype: pandas.DataFrame, str
  """
  with open(path, "r", encoding="utf-8") as f:
    first = f.readline().strip()
    if not first.startswith("# config_hash="):
      raise IOError(f"File {path} has no configuration hash line")
    table = pd.read_csv(f)
  return table, first.split("=", 1)[1]


def _jsonDefault(obj):
  if isinstance(obj, np.generic):
    return obj.item()
  if isinstance(obj, np.ndarray):
    return obj.tolist()
  return str(obj)


def writeManifest(path, content):
  """
  Write a run manifest as sorted, indented JSON
  """
  path = atomicWrite(path, json.dumps(content, sort_keys=True, indent=2, default=_jsonDefault) + "\n")
  logger.info(f"wrote {path}")
  return path


def trajectorySummary(states, law, domain):
  """
  Time, mass, total energy, minimal density and maximal speed of every
  state of a trajectory.

  :rtype: pandas.DataFrame
  """
  rows = []
  for s in states:
    speed = np.sqrt(np.sum(s.u**2, axis=0))
    rows.append([s.t, totalMass(s, domain), totalEnergy(s, law, domain), float(s.rho.min()), float(speed.max())])
  return pd.DataFrame(rows, columns=["t", "mass", "energy", "min_rho", "max_u"])


def profilesTable(profiles):
  """
  Long format table ``t, y, rho, u`` of a 1D trajectory.

  :rtype: pandas.DataFrame
  """
  return pd.DataFrame({
    "t": np.concatenate([np.full(p.nz, p.t) for p in profiles]),
    "y": np.concatenate([p.y for p in profiles]),
    "rho": np.concatenate([p.rho for p in profiles]),
    "u": np.concatenate([p.u for p in profiles]),
  })


def dumpTrajectory(states, path):
  """
  Write states as consecutive raw little-endian float64 records
  ``[t, nx, ny, nz, rho, u1, u2, u3]``, arrays flattened in C order.
  """
  chunks = []
  for s in states:
    nx, ny, nz = s.rho.shape
    chunks += [np.array([s.t, nx, ny, nz]), s.rho.ravel(order="C"), s.u.reshape(3, -1).ravel(order="C")]
  data = np.concatenate(chunks).astype(RECORD_DTYPE).tobytes() if chunks else b""
  path = atomicWrite(path, data)
  logger.info(f"wrote {len(states)} records to {path}")
  return path


def readTrajectory(path, domain=None):
  """
  Read a trajectory written by :func:`dumpTrajectory`.

  :rtype: list of FluidState3D
  """
  data = np.fromfile(path, dtype=RECORD_DTYPE)
  states, pos = [], 0
  while pos < data.size:
    if pos + 4 > data.size:
      raise IOError(f"Truncated record header in {path}")
    t, nx, ny, nz = data[pos:pos + 4]
    shape = (int(nx), int(ny), int(nz))
    n = shape[0] * shape[1] * shape[2]
    if pos + 4 + 4 * n > data.size:
      raise IOError(f"Truncated record in {path}")
    rho = data[pos + 4:pos + 4 + n].reshape(shape)
    u = data[pos + 4 + n:pos + 4 + 4 * n].reshape((3,) + shape)
    states.append(FluidState3D(rho, u, t, domain))
    pos += 4 + 4 * n
  return states


def exportVTU(state, domain, path):
  """
  Export a state on the hexahedral grid for post-processing with Paraview.
  Export is handled by MeshIO.
  """
  try:
    import meshio
  except ImportError:
    raise RuntimeError("Please install MeshIO to use this capability")
  nx, ny, nz = domain.shape
  axes = [np.linspace(0., l, n + 1) for l, n in zip(domain.extents, domain.shape)]
  X, Y, Z = np.meshgrid(*axes, indexing="ij")
  points = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
  node = np.arange(points.shape[0]).reshape(nx + 1, ny + 1, nz + 1)
  i, j, k = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing="ij")
  hexa = np.stack([
    node[i, j, k], node[i + 1, j, k], node[i + 1, j + 1, k], node[i, j + 1, k],
    node[i, j, k + 1], node[i + 1, j, k + 1], node[i + 1, j + 1, k + 1], node[i, j + 1, k + 1],
  ], axis=-1).reshape(-1, 8)
  mesh = meshio.Mesh(
    points,
    [("hexahedron", hexa)],
    cell_data={"rho": [state.rho.ravel()], "u": [state.u.reshape(3, -1).T]},
  )
  mesh.write(str(path), file_format="vtu")
  return path


def _finish(fig, path):
  if path is None:
    plt.show()
  else:
    fig.savefig(path, dpi=120)
    plt.close(fig)
  return


def plotRobustness(verdict, path=None):
  """
  Plot :math:`E^*(t)` against the Gronwall envelope and the ceiling
  """
  fig, ax = plt.subplots()
  ax.semilogy(verdict.times, np.maximum(verdict.estar_series, 1e-300), "o-", label="E*(t)")
  ax.semilogy(verdict.times, np.maximum(verdict.envelope_series, 1e-300), "--", label="Gronwall envelope")
  ax.axhline(verdict.ceiling, color="k", linestyle=":", label="ceiling")
  if verdict.first_violation_t is not None:
    ax.axvline(verdict.first_violation_t, color="r", label="first violation")
  ax.set_xlabel("t")
  ax.set_title(f"epsilon={verdict.epsilon:g}, delta={verdict.delta:.2e}")
  ax.legend()
  _finish(fig, path)
  return


def plotThinLimit(table, path=None):
  """
  Plot the thin-limit errors against epsilon on log axes
  """
  t = table.table
  fig, ax = plt.subplots()
  ax.loglog(t["epsilon"], t["density_error"], "o-", label="density")
  ax.loglog(t["epsilon"], t["momentum_error"], "s-", label="momentum")
  ax.set_xlabel("epsilon")
  ax.set_ylabel("sup in time of the cross-sectional error")
  ax.legend()
  _finish(fig, path)
  return


def plotInequalities(report, path=None):
  """
  Plot the maximal ratio of each inequality against epsilon
  """
  table = report.maxRatios()
  if table.empty:
    raise ConfigurationError("No sample to plot")
  fig, ax = plt.subplots()
  for kind in table.columns:
    ax.loglog(table.index, table[kind], "o-", label=kind)
  ax.set_xlabel("epsilon")
  ax.set_ylabel("max ratio")
  ax.legend(fontsize="small")
  _finish(fig, path)
  return
