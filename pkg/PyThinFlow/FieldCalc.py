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

from .Geometry import GridFunction
from .utils import ConfigurationError

EXPONENTS = (1, 2, 4, 6, np.inf)
GHOST = 2


def _values(f):
  if isinstance(f, GridFunction):
    return f.values
  return np.asarray(f, dtype="f8")


def _magnitude(values):
  """
  Pointwise Euclidean norm over the leading component axis of a vector or
  tensor field, absolute value of a scalar field.
  """
  if values.ndim <= 3:
    return np.abs(values)
  return np.sqrt(np.sum(values**2, axis=tuple(range(values.ndim - 3))))


def _checkExponent(p):
  if p in ("inf", "Inf", "infinity"):
    p = np.inf
  if p not in EXPONENTS:
    raise ConfigurationError(f"Unsupported Lebesgue exponent {p}, must be one of {EXPONENTS}")
  return p


class NormReport:
  """
  Discrete Lebesgue norms of a field and of its gradient.

  :param lp: Norms of the field indexed by exponent
  :type lp: dict
  :param grad_lp: Norms of the gradient indexed by exponent
  :type grad_lp: dict
  """
  def __init__(self, lp, grad_lp):
    self.lp = lp
    self.grad_lp = grad_lp
    return

  def __getitem__(self, p):
    return self.lp[_checkExponent(p)]

  def show(self):
    """
    Print the norms in a table
    """
    res = PrettyTable()
    res.field_names = ["p", "||f||_p", "||grad f||_p"]
    for p in EXPONENTS:
      res.add_row([p, f"{self.lp[p]:.6e}", f"{self.grad_lp[p]:.6e}"])
    print(res)
    return


def gradient(f, domain):
  """
  Gradient of a grid function by second order central differences in the
  interior and second order one-sided differences at the boundary cells
  (first order along axes with only two cells).

  :param f: Scalar or vector field
  :type f: GridFunction or numpy array
  :param domain: Domain of the field
  :type domain: ThinDomain
  :return: Gradient with components ``3*i + j = d f_i / d x_j`` (3 components for a scalar)
  :rtype: GridFunction
  """
  values = _values(f)
  lead = values.ndim - 3
  parts = []
  for axis, h in enumerate(domain.spacing):
    n = values.shape[lead + axis]
    edge = 2 if n >= 3 else 1
    parts.append(np.gradient(values, h, axis=lead + axis, edge_order=edge))
  grad = np.stack(parts, axis=lead)
  if lead:
    grad = grad.reshape((-1,) + values.shape[-3:])
  return GridFunction(grad, domain)


def lpNorm(f, p, domain):
  """
  Discrete :math:`L^p` norm by midpoint quadrature,
  :math:`(\\sum |f_{ijk}|^p h_x h_y h_z)^{1/p}`, maximum absolute value for
  :math:`p=\\infty`. Vector and tensor fields use the pointwise Euclidean norm.

  :param f: Field
  :type f: GridFunction or numpy array
  :param p: Exponent in {1, 2, 4, 6, inf}
  :type p: int or float
  :param domain: Domain of the field
  :type domain: ThinDomain
  :rtype: float
  """
  p = _checkExponent(p)
  mag = _magnitude(_values(f))
  if p == np.inf:
    return float(np.max(mag))
  return float(np.sum(mag**p) * domain.cell_volume) ** (1. / p)


def integrate(f, domain):
  """
  Midpoint quadrature of a scalar field (componentwise for vector fields).
  """
  values = _values(f)
  return np.sum(values, axis=(-3, -2, -1)) * domain.cell_volume


def normReport(f, domain):
  """
  Return a NormReport with the norms of ``f`` and of its gradient for
  every supported exponent.
  """
  grad = gradient(f, domain)
  return NormReport(
    {p: lpNorm(f, p, domain) for p in EXPONENTS},
    {p: lpNorm(grad, p, domain) for p in EXPONENTS},
  )


def sobolevNorm(f, domain, k, p):
  """
  Discrete :math:`W^{k,p}` norm, sum of the :math:`L^p` norms of the
  derivatives of order 0 to ``k``.
  """
  total = 0.
  g = _values(f)
  for order in range(k + 1):
    if order:
      g = gradient(g, domain).values
    total += lpNorm(g, p, domain)
  return total


def crossAvg(f, domain):
  """
  Cross-sectional average :math:`|Q_\\varepsilon|^{-1}\\int_{Q_\\varepsilon} f \\, dx_h`
  of a field, one value per cell along the channel axis.

  :return: Array of shape ``(nz,)`` for a scalar, ``(3, nz)`` for a vector
  :rtype: numpy array
  """
  return np.mean(_values(f), axis=(-3, -2))


def cellAverageDown(values, factor):
  """
  Restrict a 1D profile (last axis) to a grid ``factor`` times coarser by
  cell averaging.
  """
  values = np.asarray(values, dtype="f8")
  n = values.shape[-1]
  if factor < 1 or n % factor:
    raise ConfigurationError(f"Cannot restrict {n} cells by a factor {factor}")
  return values.reshape(values.shape[:-1] + (n // factor, factor)).mean(axis=-1)


def lift1d(profile, domain):
  """
  Lift a 1D profile to the channel: :math:`\\rho(x) = \\rho_{1D}(x_3)`,
  :math:`u(x) = (0, 0, u_{1D}(x_3))`. The lifted state satisfies the slip
  conditions on all faces of the box.

  :param profile: Profile with ``rho``, ``u`` and ``t`` attributes
  :type profile: Profile1D
  :param domain: Channel
  :type domain: ThinDomain
  :raise ConfigurationError: Profile length does not match ``nz``
  :rtype: FluidState3D
  """
  from .Solver3D import FluidState3D
  rho1, u1 = np.asarray(profile.rho, dtype="f8"), np.asarray(profile.u, dtype="f8")
  if rho1.shape != (domain.nz,) or u1.shape != (domain.nz,):
    raise ConfigurationError(f"Profile of length {rho1.shape} cannot be lifted on a grid with nz={domain.nz}")
  nx, ny, nz = domain.shape
  rho = np.broadcast_to(rho1, (nx, ny, nz)).copy()
  u = np.zeros((3, nx, ny, nz))
  u[2] = u1
  return FluidState3D(rho, u, profile.t, domain)


def vectorParity(component, ndim=3):
  """
  Reflection parity of a velocity component under slip conditions: odd along
  its own axis (normal component), even along the others.
  """
  return tuple(-1 if axis == component else 1 for axis in range(ndim))


def padSlip(values, parity, width=GHOST):
  """
  Fill ``width`` ghost layers on each side of the trailing ``len(parity)``
  axes by even (+1) or odd (-1) reflection about the boundary faces.
  """
  values = np.asarray(values, dtype="f8")
  ndim = len(parity)
  lead = values.ndim - ndim
  out = np.pad(values, [(0, 0)] * lead + [(width, width)] * ndim, mode="symmetric")
  for k, s in enumerate(parity):
    if s < 0:
      index = [slice(None)] * out.ndim
      index[lead + k] = slice(0, width)
      out[tuple(index)] *= -1.
      index[lead + k] = slice(-width, None)
      out[tuple(index)] *= -1.
  return out


def padVector(u, width=GHOST):
  """
  Ghost-padded copy of a velocity field (components first) with slip parity.
  """
  ndim = u.ndim - 1
  return np.stack([padSlip(u[i], vectorParity(i, ndim), width) for i in range(u.shape[0])])


def _slice(ndim, axis, sl):
  index = [slice(None)] * ndim
  index[axis] = sl
  return tuple(index)


def _crop(P, widths):
  """
  Remove the remaining ghost layers of the trailing axes.
  """
  lead = P.ndim - len(widths)
  index = [slice(None)] * lead + [slice(w, P.shape[lead + k] - w) for k, w in enumerate(widths)]
  return P[tuple(index)]


def _d1(P, axis, h):
  """
  Central first difference along ``axis``, the axis shrinks by two.
  """
  return (P[_slice(P.ndim, axis, slice(2, None))] - P[_slice(P.ndim, axis, slice(None, -2))]) / (2. * h)


def _d2(P, axis, h):
  """
  Compact second difference along ``axis``, the axis shrinks by two.
  """
  return (P[_slice(P.ndim, axis, slice(2, None))] - 2. * P[_slice(P.ndim, axis, slice(1, -1))]
          + P[_slice(P.ndim, axis, slice(None, -2))]) / (h * h)


def centralDerivative(P, axis, h, ndim, width=GHOST):
  """
  Central first derivative of a ghost-padded field along spatial ``axis``
  (counted among the trailing ``ndim`` axes), returned on the interior cells.
  """
  lead = P.ndim - ndim
  widths = [width] * ndim
  widths[axis] -= 1
  return _crop(_d1(P, lead + axis, h), widths)


def secondDerivative(P, axis, h, ndim, width=GHOST):
  """
  Compact second derivative of a ghost-padded field along ``axis`` on the
  interior cells.
  """
  lead = P.ndim - ndim
  widths = [width] * ndim
  widths[axis] -= 1
  return _crop(_d2(P, lead + axis, h), widths)


def mixedDerivative(P, axis_a, axis_b, ha, hb, ndim, width=GHOST):
  """
  Central mixed derivative :math:`\\partial_a \\partial_b` (``axis_a != axis_b``)
  of a ghost-padded field on the interior cells.
  """
  lead = P.ndim - ndim
  D = _d1(_d1(P, lead + axis_a, ha), lead + axis_b, hb)
  widths = [width] * ndim
  widths[axis_a] -= 1
  widths[axis_b] -= 1
  return _crop(D, widths)


def faceDivergence(P, axis, h, ndim, width=GHOST):
  """
  Conservative difference :math:`(F_{i+1/2} - F_{i-1/2})/h` of a ghost-padded
  flux with face values :math:`F_{i+1/2} = (f_i + f_{i+1})/2`. Odd-reflected
  fluxes vanish exactly on the walls.
  """
  lead = P.ndim - ndim
  n = P.shape[lead + axis] - 2 * width
  Q = P[_slice(P.ndim, lead + axis, slice(width - 1, width + n + 1))]
  face = 0.5 * (Q[_slice(Q.ndim, lead + axis, slice(1, None))] + Q[_slice(Q.ndim, lead + axis, slice(None, -1))])
  div = (face[_slice(face.ndim, lead + axis, slice(1, None))] - face[_slice(face.ndim, lead + axis, slice(None, -1))]) / h
  widths = [width] * ndim
  widths[axis] = 0
  return _crop(div, widths)


def fourthDifference(P, axis, ndim, width=GHOST):
  """
  Undivided fourth difference :math:`\\delta^4 q` in flux form along ``axis``,
  on the interior cells. The wall flux vanishes for even-reflected fields.
  """
  lead = P.ndim - ndim
  ax = lead + axis
  s = lambda a, b: P[_slice(P.ndim, ax, slice(a, b))]
  face = s(3, None) - 3. * s(2, -1) + 3. * s(1, -2) - s(None, -3)
  diff = face[_slice(face.ndim, ax, slice(1, None))] - face[_slice(face.ndim, ax, slice(None, -1))]
  widths = [width] * ndim
  widths[axis] = 0
  return _crop(diff, widths)


def slipGradient(f, domain, parity=None):
  """
  Gradient by central differences with slip ghost layers. Vector fields use
  the velocity parity; scalar fields use ``parity`` (even by default).

  :return: Array ``(3, ...)`` for a scalar, ``(9, ...)`` for a vector with index ``3*i + j``
  :rtype: numpy array
  """
  values = _values(f)
  if values.ndim == 3:
    P = padSlip(values, parity or (1, 1, 1))
    return np.stack([centralDerivative(P, a, h, 3) for a, h in enumerate(domain.spacing)])
  P = padVector(values)
  return np.stack([
    centralDerivative(P[i], a, h, 3)
    for i in range(values.shape[0]) for a, h in enumerate(domain.spacing)
  ])


def divStress(u, visc, spacing, width=GHOST):
  """
  Discrete :math:`{\\rm div}\\, S(\\nabla u) = \\mu \\Delta u + (\\mu/3 + \\eta)\\nabla {\\rm div}\\, u`
  with slip ghost layers. Pure second derivatives use the compact stencil,
  cross derivatives central differences, which makes the operator symmetric
  and negative definite on slip-compatible fields.

  :param u: Velocity (components first), 3D ``(3, nx, ny, nz)`` or 1D ``(1, nz)``
  :type u: numpy array
  :param visc: Viscosities
  :type visc: Viscosity
  :param spacing: Grid spacing per spatial axis
  :type spacing: tuple
  :rtype: numpy array
  """
  u = np.asarray(u, dtype="f8")
  ndim = u.ndim - 1
  P = padVector(u, width)
  out = np.empty_like(u)
  for i in range(u.shape[0]):
    lap = sum(secondDerivative(P[i], a, spacing[a], ndim, width) for a in range(ndim))
    graddiv = secondDerivative(P[i], i, spacing[i], ndim, width)
    for j in range(u.shape[0]):
      if j != i:
        graddiv = graddiv + mixedDerivative(P[j], i, j, spacing[i], spacing[j], ndim, width)
    out[i] = visc.mu * lap + visc.lame * graddiv
  return out
