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


import matplotlib
matplotlib.use("Agg")

import numpy as np
import pytest

from PyThinFlow import PressureLaw, Viscosity, buildChannel, parseConfig


SMALL_CONFIG = """<Experiment>
  <Geometry>
    <Epsilon>0.5</Epsilon>
    <EpsilonList>0.5, 0.25</EpsilonList>
    <Nx>2</Nx>
    <Ny>2</Ny>
    <Nz>8</Nz>
    <NBox>4</NBox>
  </Geometry>
  <Time>
    <TEnd>0.01</TEnd>
    <SampleEvery>1</SampleEvery>
  </Time>
  <Reference>
    <Nz>16</Nz>
  </Reference>
  <Sampling>
    <NFields>2</NFields>
    <NLame>1</NLame>
  </Sampling>
  {extra}
</Experiment>
"""


def pytest_addoption(parser):
  parser.addoption("--runslow", action="store_true", default=False, help="run the slow experiment tests")


def pytest_collection_modifyitems(config, items):
  if config.getoption("--runslow"):
    return
  skip = pytest.mark.skip(reason="needs --runslow")
  for item in items:
    if "slow" in item.keywords:
      item.add_marker(skip)


@pytest.fixture
def law():
  return PressureLaw(1., 2.)


@pytest.fixture
def visc():
  return Viscosity(0.1, 0.)


@pytest.fixture
def channel():
  return buildChannel(0.5, 2, 2, 16)


@pytest.fixture
def rng():
  return np.random.default_rng(1234)


@pytest.fixture
def small_config_text():
  def _text(extra=""):
    return SMALL_CONFIG.format(extra=extra)
  return _text


@pytest.fixture
def small_config(small_config_text):
  return parseConfig(small_config_text())


@pytest.fixture
def thinlimit_sweep():
  """
  Three scales with a perturbation shrinking like epsilon^2
  """
  return ("<Geometry><EpsilonList>0.5, 0.25, 0.125</EpsilonList></Geometry>"
          "<Reference><Nz>8</Nz></Reference>"
          "<Perturbation><Amplitude>0.4</Amplitude><Scaling>2</Scaling></Perturbation>")
