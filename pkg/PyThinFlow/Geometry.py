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


import numpy as np
from prettytable import PrettyTable

from .utils import ConfigurationError, NumericalError


class ThinDomain:
  """
  Rectangular channel :math:`(0,\\varepsilon)^2 \\times (0,l_z)` discretized by a
  cell-centred structured grid. The thin channel uses :math:`l_z=1`, the
  isotropically scaled model box uses :math:`l_z=\\varepsilon`.
  Instances are immutable once built.

  :param Epsilon: Cross-section scale
  :type Epsilon: float
  :param Shape: Number of cells ``(nx, ny, nz)``
  :type Shape: tuple
  :param Spacing: Grid spacings ``(hx, hy, hz)``
  :type Spacing: tuple
  :param D: Diameter of the box
  :type D: float
  :param V: Volume of the box
  :type V: float
  """
  def __init__(self, epsilon, nx, ny, nz, lz=1.0):
    errors = []
    try:
      epsilon = float(epsilon)
    except (TypeError, ValueError):
      raise ConfigurationError(f"Epsilon must be a real number, got {epsilon!r}")
    if not np.isfinite(epsilon) or not 0. < epsilon <= 1.:
      errors.append(f"epsilon must satisfy 0 < epsilon <= 1, got {epsilon}")
    for name, n in (("nx", nx), ("ny", ny), ("nz", nz)):
      if int(n) != n or n < 2:
        errors.append(f"{name} must be an integer >= 2, got {n}")
    lz = float(lz)
    if not lz > 0.:
      errors.append(f"lz must be positive, got {lz}")
    if errors:
      raise ConfigurationError("Invalid channel: " + "; ".join(errors))
    object.__setattr__(self, "_epsilon", epsilon)
    object.__setattr__(self, "_n", (int(nx), int(ny), int(nz)))
    object.__setattr__(self, "_l", (epsilon, epsilon, lz))
    object.__setattr__(self, "_d", float(np.sqrt(2. * epsilon**2 + lz**2)))
    object.__setattr__(self, "_v", epsilon * epsilon * lz)
    return

  def __setattr__(self, name, value):
    raise AttributeError("ThinDomain is immutable")

  def __repr__(self):
    nx, ny, nz = self._n
    return f"<PyThinFlow.ThinDomain object, (epsilon: {self._epsilon}, grid: {nx}x{ny}x{nz}, lz: {self._l[2]})>"

  def __getitem__(self, parameter):
    if parameter == "Epsilon":
      return self._epsilon
    elif parameter == "Shape":
      return self.shape
    elif parameter == "Spacing":
      return self.spacing
    elif parameter == "D":
      return self._d
    elif parameter == "V":
      return self._v
    else:
      raise KeyError(f"There is no item \"{parameter}\" accessible through ThinDomain class")

  @property
  def epsilon(self):
    return self._epsilon

  @property
  def nx(self):
    return self._n[0]

  @property
  def ny(self):
    return self._n[1]

  @property
  def nz(self):
    return self._n[2]

  @property
  def lx(self):
    return self._l[0]

  @property
  def ly(self):
    return self._l[1]

  @property
  def lz(self):
    return self._l[2]

  @property
  def extents(self):
    return self._l

  @property
  def d(self):
    return self._d

  @property
  def v(self):
    return self._v

  @property
  def shape(self):
    return self._n

  @property
  def spacing(self):
    return tuple(l / n for l, n in zip(self._l, self._n))

  @property
  def hx(self):
    return self.spacing[0]

  @property
  def hy(self):
    return self.spacing[1]

  @property
  def hz(self):
    return self.spacing[2]

  @property
  def hmin(self):
    return min(self.spacing)

  @property
  def cell_volume(self):
    hx, hy, hz = self.spacing
    return hx * hy * hz

  @property
  def cross_section(self):
    """
    Area of the cross-section :math:`|Q_\\varepsilon|`
    """
    return self._l[0] * self._l[1]

  def scaleParameters(self):
    """
    Return the scale parameters :math:`\\lambda = [\\varepsilon, d, V]`

    :rtype: tuple
    """
    return self._epsilon, self._d, self._v

  def cellCenters(self):
    """
    Return the cell centre coordinates along each axis.

    :return: Three 1D arrays ``x, y, z``
    :rtype: tuple of numpy array
    """
    return tuple((np.arange(n) + 0.5) * l / n for l, n in zip(self._l, self._n))

  def meshgrid(self):
    """
    Return the cell centre coordinates as three arrays of the grid shape.
    """
    return np.meshgrid(*self.cellCenters(), indexing="ij")

  def sameGrid(self, other):
    """
    Tell if two domains carry the same grid (same extents and resolutions).
    """
    return isinstance(other, ThinDomain) and self._n == other._n and self._l == other._l

  def showDomain(self):
    """
    Print a table with the domain scale parameters and grid.
    """
    res = PrettyTable()
    res.field_names = ["epsilon", "lz", "nx", "ny", "nz", "d", "V", "h min"]
    res.add_row([
      self._epsilon, self._l[2], *self._n,
      f"{self._d:.6e}", f"{self._v:.6e}", f"{self.hmin:.3e}",
    ])
    print(res)
    return


class GridFunction:
  """
  Scalar or vector field stored at the cell centres of a ThinDomain.
  Scalars have shape ``(nx, ny, nz)``, vectors ``(3, nx, ny, nz)`` and
  gradients of vectors ``(9, nx, ny, nz)``.

  :param values: Field values
  :type values: numpy array
  :param domain: Domain the field lives on (optional, checks the shape if given)
  :type domain: ThinDomain
  """
  def __init__(self, values, domain=None):
    values = np.asarray(values, dtype="f8")
    if values.ndim not in (3, 4):
      raise ConfigurationError(f"A grid function must be 3D (scalar) or 4D (components first), got shape {values.shape}")
    if domain is not None and tuple(values.shape[-3:]) != domain.shape:
      raise ConfigurationError(f"Grid function of shape {values.shape} does not live on a {domain.shape} grid")
    if not np.all(np.isfinite(values)):
      raise NumericalError("Grid function contains non finite values")
    self.values = values
    self.domain = domain
    return

  def __repr__(self):
    return f"<PyThinFlow.GridFunction object, (components: {self.components}, shape: {self.values.shape[-3:]})>"

  def __array__(self, dtype=None, copy=None):
    if dtype is None:
      return self.values
    return self.values.astype(dtype)

  def __getitem__(self, index):
    return self.values[index]

  @property
  def components(self):
    return 1 if self.values.ndim == 3 else self.values.shape[0]


def buildChannel(epsilon, nx, ny, nz):
  """
  Build the thin channel :math:`\\Omega_\\varepsilon = Q_\\varepsilon \\times (0,1)`
  with square cross-section :math:`Q_\\varepsilon = (0,\\varepsilon)^2`.

  :param epsilon: Cross-section scale, ``0 < epsilon <= 1``
  :type epsilon: float
  :param nx: Number of cells along x (>= 2)
  :type nx: int
  :param ny: Number of cells along y (>= 2)
  :type ny: int
  :param nz: Number of cells along the channel axis (>= 2)
  :type nz: int
  :raise ConfigurationError: Invalid scale or resolution
  :rtype: ThinDomain
  """
  return ThinDomain(epsilon, nx, ny, nz, lz=1.0)


def buildScaledBox(epsilon, n):
  """
  Build the isotropically scaled model box :math:`\\varepsilon (0,1)^3`
  with ``n`` cells in each direction.

  :param epsilon: Scale, ``0 < epsilon <= 1``
  :type epsilon: float
  :param n: Number of cells per direction (>= 2)
  :type n: int
  :rtype: ThinDomain
  """
  return ThinDomain(epsilon, n, n, n, lz=epsilon)


def domainMetrics(domain):
  """
  Return the diameter and the volume of the domain.

  :param domain: The domain
  :type domain: ThinDomain
  :return: ``(d, v)``
  :rtype: tuple
  """
  return domain.d, domain.v
