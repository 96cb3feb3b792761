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


import hashlib
import json
import os
import xml.etree.ElementTree as ET

from prettytable import PrettyTable

from .BasePropertiesClass import BasePropertiesClass
from .Geometry import buildChannel
from .Physics import PressureLaw, Viscosity
from .utils import ConfigurationError, atomicWrite, defaultOutputDirectory


class Pressure(BasePropertiesClass):
  parameter_type = {"A": float, "Gamma": float}
  defaults = {"A": 1.0, "Gamma": 2.0}

  def validate(self):
    errors = []
    if not self["A"] > 0.:
      errors.append(f"Pressure.A must be positive, got {self['A']}")
    if not self["Gamma"] > 1.:
      errors.append(f"Pressure.Gamma must be > 1, got {self['Gamma']}")
    return errors


class ViscositySection(BasePropertiesClass):
  parameter_type = {"Mu": float, "Eta": float}
  defaults = {"Mu": 0.1, "Eta": 0.0}

  @property
  def name(self):
    return "Viscosity"

  def validate(self):
    errors = []
    if not self["Mu"] > 0.:
      errors.append(f"Viscosity.Mu must be positive, got {self['Mu']}")
    if not self["Eta"] >= 0.:
      errors.append(f"Viscosity.Eta must be nonnegative, got {self['Eta']}")
    return errors


class GeometrySection(BasePropertiesClass):
  """
  Channel scale and grid. ``EpsilonList`` drives the sweeps (thin limit,
  inequalities); ``NBox`` is the number of cells per direction of the
  scaled boxes of the inequality suite.
  """
  parameter_type = {"Epsilon": float, "EpsilonList": list, "Nx": int, "Ny": int, "Nz": int, "NBox": int}
  defaults = {"Epsilon": 1.0, "EpsilonList": [], "Nx": 8, "Ny": 8, "Nz": 32, "NBox": 8}

  @property
  def name(self):
    return "Geometry"

  def validate(self):
    errors = []
    if not 0. < self["Epsilon"] <= 1.:
      errors.append(f"Geometry.Epsilon must satisfy 0 < epsilon <= 1, got {self['Epsilon']}")
    eps = self["EpsilonList"]
    if any(not 0. < e <= 1. for e in eps):
      errors.append(f"Geometry.EpsilonList values must satisfy 0 < epsilon <= 1, got {eps}")
    if any(b >= a for a, b in zip(eps[:-1], eps[1:])):
      errors.append(f"Geometry.EpsilonList must be strictly decreasing, got {eps}")
    for key in ("Nx", "Ny", "Nz", "NBox"):
      if self[key] < 2:
        errors.append(f"Geometry.{key} must be >= 2, got {self[key]}")
    return errors


class Time(BasePropertiesClass):
  """
  Horizon and time stepping: Courant number, sampling cadence (in steps)
  and artificial dissipation coefficient of the explicit scheme.
  """
  parameter_type = {"TEnd": float, "Cfl": float, "SampleEvery": int, "Dissipation": float}
  defaults = {"TEnd": 0.25, "Cfl": 0.5, "SampleEvery": 10, "Dissipation": 0.01}

  def validate(self):
    errors = []
    if not self["TEnd"] >= 0.:
      errors.append(f"Time.TEnd must be nonnegative, got {self['TEnd']}")
    if not 0. < self["Cfl"] <= 1.:
      errors.append(f"Time.Cfl must be in (0, 1], got {self['Cfl']}")
    if self["SampleEvery"] < 1:
      errors.append(f"Time.SampleEvery must be >= 1, got {self['SampleEvery']}")
    if not self["Dissipation"] >= 0.:
      errors.append(f"Time.Dissipation must be nonnegative, got {self['Dissipation']}")
    return errors


class Reference(BasePropertiesClass):
  """
  Compatible 1D data :math:`\\rho_0 = \\bar\\rho + b\\cos(\\pi y)`, :math:`u_0 = s\\sin(\\pi y)`
  and resolution of the 1D reference solve.
  """
  parameter_type = {"RhoBar": float, "B": float, "S": float, "Nz": int}
  defaults = {"RhoBar": 1.0, "B": 0.1, "S": 0.1, "Nz": 512}

  def validate(self):
    errors = []
    if not self["RhoBar"] > abs(self["B"]):
      errors.append(f"Reference.RhoBar must exceed |Reference.B| for a positive density, got {self['RhoBar']} and {self['B']}")
    if self["Nz"] < 4:
      errors.append(f"Reference.Nz must be >= 4, got {self['Nz']}")
    return errors


class Perturbation(BasePropertiesClass):
  """
  Perturbation of the reference data. ``Delta`` is the data norm of a
  robustness run, ``DeltaLo``/``DeltaHi``/``Iterations`` the bisection
  bracket, ``DensityShare`` the part of the budget given to the density,
  ``Amplitude`` and ``Scaling`` the sup-normalized perturbation
  ``Amplitude * epsilon**Scaling`` of the thin-limit runs.
  """
  parameter_type = {
    "Delta": float, "DeltaLo": float, "DeltaHi": float, "Iterations": int, "Seed": int,
    "DensityShare": float, "Amplitude": float, "Scaling": float,
  }
  defaults = {
    "Delta": 0.0, "DeltaLo": 0.0, "DeltaHi": 1.0, "Iterations": 8, "Seed": 0,
    "DensityShare": 0.5, "Amplitude": 0.05, "Scaling": 1.0,
  }

  def validate(self):
    errors = []
    for key in ("Delta", "DeltaLo", "Amplitude", "Scaling"):
      if not self[key] >= 0.:
        errors.append(f"Perturbation.{key} must be nonnegative, got {self[key]}")
    if not self["DeltaHi"] > self["DeltaLo"]:
      errors.append(f"Perturbation.DeltaHi must exceed DeltaLo, got [{self['DeltaLo']}, {self['DeltaHi']}]")
    if self["Iterations"] < 1:
      errors.append(f"Perturbation.Iterations must be >= 1, got {self['Iterations']}")
    if not 0. <= self["DensityShare"] <= 1.:
      errors.append(f"Perturbation.DensityShare must be in [0, 1], got {self['DensityShare']}")
    if self["Seed"] < 0:
      errors.append(f"Perturbation.Seed must be nonnegative, got {self['Seed']}")
    return errors


class Constants(BasePropertiesClass):
  """
  Gronwall constant (``Calibrate`` runs the pilot at epsilon = 1 first),
  ceiling constant and calibration floor.
  """
  parameter_type = {"CGronwall": float, "CGeom": float, "CFloor": float, "Calibrate": bool}
  defaults = {"CGronwall": 1.0, "CGeom": 1.0, "CFloor": 1e-3, "Calibrate": False}

  def validate(self):
    errors = []
    for key in ("CGronwall", "CGeom", "CFloor"):
      if not self[key] > 0.:
        errors.append(f"Constants.{key} must be positive, got {self[key]}")
    return errors


class Tolerances(BasePropertiesClass):
  """
  Noise floor of the energy comparisons and Lame solver settings
  (``LameTol`` is relative to the norm of the load).
  """
  parameter_type = {"NoiseFloor": float, "LameTol": float, "LameMaxIter": int}
  defaults = {"NoiseFloor": 1e-10, "LameTol": 1e-9, "LameMaxIter": 5000}

  def validate(self):
    errors = []
    for key in ("NoiseFloor", "LameTol"):
      if not self[key] >= 0.:
        errors.append(f"Tolerances.{key} must be nonnegative, got {self[key]}")
    if self["LameMaxIter"] < 1:
      errors.append(f"Tolerances.LameMaxIter must be >= 1, got {self['LameMaxIter']}")
    return errors


class Sampling(BasePropertiesClass):
  """
  Random fields of the inequality suite.
  """
  parameter_type = {"NFields": int, "NLame": int}
  defaults = {"NFields": 100, "NLame": 3}

  def validate(self):
    errors = []
    if self["NFields"] < 1:
      errors.append(f"Sampling.NFields must be >= 1, got {self['NFields']}")
    if self["NLame"] < 0:
      errors.append(f"Sampling.NLame must be >= 0, got {self['NLame']}")
    return errors


class Output(BasePropertiesClass):
  """
  Output directory (empty: ``$PYTHINFLOW_OUT`` or ``pythinflow_out``),
  figures, binary trajectory dump and VTU export of the final state.
  """
  parameter_type = {"Directory": str, "Plot": bool, "Trajectory": bool, "VTU": bool}
  defaults = {"Directory": "", "Plot": False, "Trajectory": False, "VTU": False}


SECTIONS = {
  "Pressure": Pressure,
  "Viscosity": ViscositySection,
  "Geometry": GeometrySection,
  "Time": Time,
  "Reference": Reference,
  "Perturbation": Perturbation,
  "Constants": Constants,
  "Tolerances": Tolerances,
  "Sampling": Sampling,
  "Output": Output,
}


class ExperimentConfig:
  """
  Validated experiment configuration, one section object per element of
  the ``<Experiment>`` document.

  :param Pressure: Pressure law section
  :type Pressure: BasePropertiesClass
  :param Geometry: Channel section
  :type Geometry: BasePropertiesClass
  """
  def __init__(self):
    self.sections = {name: cls() for name, cls in SECTIONS.items()}
    return

  def __repr__(self):
    return f"<PyThinFlow.ExperimentConfig object, (hash: {self.configHash()})>"

  def __getitem__(self, item):
    if item in self.sections:
      return self.sections[item]
    raise KeyError(f"There is no item \"{item}\" accessible through ExperimentConfig class")

  def read(self, root):
    """
    Populate the sections from the root element of a configuration document.

    :raise ConfigurationError: Unknown section or key
    """
    if root.tag != "Experiment":
      raise ConfigurationError(f"Root element must be <Experiment>, got <{root.tag}>")
    for element in root:
      if element.tag not in self.sections:
        raise ConfigurationError(f"Unknown section {element.tag}, accepted sections are {list(self.sections)}")
      self.sections[element.tag].read(element)
    return

  def validate(self):
    """
    Check every section and raise a single error listing all the
    violated constraints.

    :raise ConfigurationError: At least one constraint is violated
    """
    errors = []
    for section in self.sections.values():
      errors += section.validate()
    if errors:
      raise ConfigurationError("Invalid configuration:\n  - " + "\n  - ".join(errors))
    return self

  @property
  def seed(self):
    return self["Perturbation"]["Seed"]

  @seed.setter
  def seed(self, value):
    self["Perturbation"]["Seed"] = value

  def pressureLaw(self):
    return PressureLaw(self["Pressure"]["A"], self["Pressure"]["Gamma"])

  def viscosity(self):
    return Viscosity(self["Viscosity"]["Mu"], self["Viscosity"]["Eta"])

  def channel(self, epsilon=None):
    """
    Channel of the configured grid at the configured (or the given) scale
    """
    g = self["Geometry"]
    return buildChannel(g["Epsilon"] if epsilon is None else epsilon, g["Nx"], g["Ny"], g["Nz"])

  def epsilons(self):
    """
    Epsilon sweep, the single configured epsilon if no list is given
    """
    eps = self["Geometry"]["EpsilonList"]
    return eps if eps else [self["Geometry"]["Epsilon"]]

  def outputDirectory(self):
    d = self["Output"]["Directory"]
    return d if d else defaultOutputDirectory()

  def canonical(self):
    """
    All (section, key, value) triples with defaults applied, sorted
    """
    return sorted(
      (name, key, val) for name, section in self.sections.items()
      for key, val in section.getAllProperties().items()
    )

  def configHash(self):
    """
    First 12 hexadecimal digits of the SHA-256 of the canonical JSON dump
    of the configuration and of the seed.
    """
    text = json.dumps({"config": self.canonical(), "seed": self.seed}, sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]

  def toXML(self):
    """
    Return the configuration document (explicitly set keys only)
    """
    root = ET.Element("Experiment")
    for name, section in self.sections.items():
      if section.data:
        section.__write__(ET.SubElement(root, name))
    ET.indent(root)
    return ET.tostring(root, encoding="unicode")

  def save(self, path):
    atomicWrite(path, self.toXML() + "\n")
    return

  def showConfig(self):
    """
    Print every key of every section
    """
    res = PrettyTable()
    res.field_names = ["Section", "Key", "Value"]
    for name, key, val in self.canonical():
      res.add_row([name, key, val])
    print(res)
    return


def parseConfig(text):
  """
  Parse and validate a configuration document.

  :param text: XML document with an ``<Experiment>`` root
  :type text: str
  :raise ConfigurationError: Malformed document (with line and column),
    unknown section or key, or invalid values (all of them listed)
  :rtype: ExperimentConfig
  """
  try:
    root = ET.fromstring(text)
  except ET.ParseError as e:
    line, column = e.position
    raise ConfigurationError(f"Malformed configuration at line {line}, column {column}: {e}")
  config = ExperimentConfig()
  config.read(root)
  return config.validate()


def loadConfig(path):
  """
  Read and validate a configuration file.

  :raise IOError: The file does not exist
  """
  if not os.path.isfile(path):
    raise IOError(f"Configuration file {path} doesn't exist")
  with open(path, "r", encoding="utf-8") as f:
    return parseConfig(f.read())
