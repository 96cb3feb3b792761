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

from .utils import ConfigurationError, DomainError

QUADRATURE_POINTS = 8


class PressureLaw:
  """
  Barotropic power law :math:`p(\\rho) = a \\rho^\\gamma`.

  :param a: Pressure coefficient (> 0)
  :type a: float
  :param gamma: Adiabatic exponent (> 1)
  :type gamma: float
  """
  def __init__(self, a=1., gamma=2.):
    a, gamma = float(a), float(gamma)
    errors = []
    if not a > 0.:
      errors.append(f"pressure coefficient a must be positive, got {a}")
    if not gamma > 1.:
      errors.append(f"adiabatic exponent gamma must be > 1, got {gamma}")
    if errors:
      raise ConfigurationError("Invalid pressure law: " + "; ".join(errors))
    self.a = a
    self.gamma = gamma
    return

  def __repr__(self):
    return f"<PyThinFlow.PressureLaw object, (a: {self.a}, gamma: {self.gamma})>"

  def p(self, rho):
    return pressure(rho, self)

  def dp(self, rho):
    return pressurePrime(rho, self)

  def H(self, rho):
    return potentialH(rho, self)

  def dH(self, rho):
    return potentialHPrime(rho, self)


class Viscosity:
  """
  Newtonian viscosities.

  :param mu: Shear viscosity (> 0)
  :type mu: float
  :param eta: Bulk viscosity (>= 0)
  :type eta: float
  :param nu: Effective viscosity of the 1D limit, :math:`\\nu = 4\\mu/3 + \\eta`
  :type nu: float
  """
  def __init__(self, mu=0.1, eta=0.):
    mu, eta = float(mu), float(eta)
    errors = []
    if not mu > 0.:
      errors.append(f"shear viscosity mu must be positive, got {mu}")
    if not eta >= 0.:
      errors.append(f"bulk viscosity eta must be nonnegative, got {eta}")
    if errors:
      raise ConfigurationError("Invalid viscosity: " + "; ".join(errors))
    self.mu = mu
    self.eta = eta
    return

  def __repr__(self):
    return f"<PyThinFlow.Viscosity object, (mu: {self.mu}, eta: {self.eta}, nu: {self.nu})>"

  @property
  def nu(self):
    return 4. * self.mu / 3. + self.eta

  @property
  def lame(self):
    """
    Coefficient of the grad-div part of :math:`{\\rm div}\\, S`, :math:`\\mu/3 + \\eta`
    """
    return self.mu / 3. + self.eta


def _checkDensity(rho, strict=False):
  rho = np.asarray(rho, dtype="f8")
  if strict and np.any(rho <= 0.):
    raise DomainError("Density must be positive")
  if np.any(rho < 0.):
    raise DomainError("Density must be nonnegative")
  return rho


def _scalar(x):
  return float(x) if np.ndim(x) == 0 else x


def pressure(rho, law):
  """
  Pressure of the power law

  .. math::

    p(\\rho) = a \\rho^\\gamma

  :param rho: Density (>= 0)
  :type rho: float or numpy array
  :param law: Pressure law
  :type law: PressureLaw
  :raise DomainError: Negative density
  """
  rho = _checkDensity(rho)
  return _scalar(law.a * rho**law.gamma)


def pressurePrime(rho, law):
  """
  Derivative :math:`p'(\\rho) = a \\gamma \\rho^{\\gamma-1}`.
  The density must be positive when :math:`\\gamma < 2`.

  :raise DomainError: Negative density, or zero density with gamma < 2
  """
  rho = _checkDensity(rho, strict=law.gamma < 2.)
  return _scalar(law.a * law.gamma * rho**(law.gamma - 1.))


def soundSpeed(rho, law):
  """
  Sound speed :math:`c = \\sqrt{p'(\\rho)}`
  """
  return np.sqrt(pressurePrime(rho, law))


def potentialH(rho, law):
  """
  Pressure potential solving :math:`H'(\\rho)\\rho - H(\\rho) = p(\\rho)`,
  with the linear gauge fixed by :math:`H(0) = 0`:

  .. math::

    H(\\rho) = \\frac{a \\rho^\\gamma}{\\gamma - 1}

  :raise DomainError: Negative density
  """
  rho = _checkDensity(rho)
  return _scalar(law.a * rho**law.gamma / (law.gamma - 1.))


def potentialHPrime(rho, law):
  """
  Derivative :math:`H'(\\rho) = a\\gamma\\rho^{\\gamma-1}/(\\gamma-1)`
  """
  rho = _checkDensity(rho)
  return _scalar(law.a * law.gamma * rho**(law.gamma - 1.) / (law.gamma - 1.))


def relentIntegrand(rho, r, law):
  """
  Relative entropy (Bregman divergence of H) of the density ``rho``
  with respect to the reference density ``r``:

  .. math::

    H(\\rho) - H'(r)(\\rho - r) - H(r)

  Nonnegative by convexity of H, zero iff :math:`\\rho = r`.

  :param rho: Density (>= 0)
  :type rho: float or numpy array
  :param r: Reference density (> 0)
  :type r: float or numpy array
  :raise DomainError: Negative density or nonpositive reference density
  """
  rho = _checkDensity(rho)
  r = np.asarray(r, dtype="f8")
  if np.any(r <= 0.):
    raise DomainError("Reference density must be positive")
  val = potentialH(rho, law) - potentialHPrime(r, law) * (rho - r) - potentialH(r, law)
  # convexity: negative values are round-off
  return _scalar(np.maximum(val, 0.))


def stress(grad_u, visc):
  """
  Newtonian viscous stress

  .. math::

    S(\\nabla u) = \\mu\\left(\\nabla u + \\nabla u^t - \\frac{2}{3}{\\rm div}\\, u\\, I\\right) + \\eta\\, {\\rm div}\\, u\\, I

  :param grad_u: Velocity gradient, ``grad_u[i, j] = d u_i / d x_j``. Extra
    trailing axes (grid points) are allowed.
  :type grad_u: numpy array of shape (3, 3, ...)
  :param visc: Viscosities
  :type visc: Viscosity
  :return: Stress tensor with the shape of ``grad_u``
  :rtype: numpy array
  """
  g = np.asarray(grad_u, dtype="f8")
  if g.shape[:2] != (3, 3):
    raise ConfigurationError(f"Velocity gradient must have leading shape (3, 3), got {g.shape}")
  div = np.trace(g, axis1=0, axis2=1)
  eye = np.eye(3).reshape((3, 3) + (1,) * (g.ndim - 2))
  return visc.mu * (g + np.swapaxes(g, 0, 1) - 2. / 3. * div * eye) + visc.eta * div * eye


def dissipationDensity(grad_u, visc):
  """
  Pointwise viscous dissipation :math:`S(\\nabla u):\\nabla u` (nonnegative).
  """
  g = np.asarray(grad_u, dtype="f8")
  return np.sum(stress(g, visc) * g, axis=(0, 1))


def quadraticEquivalence(law, rho_range, r_range, n=201):
  """
  Brute-force constants :math:`c_1, c_2` such that

  .. math::

    c_1 (\\rho - r)^2 \\le H(\\rho) - H'(r)(\\rho - r) - H(r) \\le c_2 (\\rho - r)^2

  for all sampled pairs with :math:`\\rho` in ``rho_range`` and :math:`r`
  in ``r_range`` (pairs with :math:`\\rho = r` are skipped).

  :param law: Pressure law
  :type law: PressureLaw
  :param rho_range: ``(rho_min, rho_max)``, rho_min >= 0
  :type rho_range: tuple
  :param r_range: ``(r_min, r_max)``, r_min > 0
  :type r_range: tuple
  :param n: Number of samples per range
  :type n: int
  :return: ``(c1, c2)``
  :rtype: tuple
  """
  rho = np.linspace(rho_range[0], rho_range[1], n)
  r = np.linspace(r_range[0], r_range[1], n if r_range[1] > r_range[0] else 1)
  R, P = np.meshgrid(r, rho, indexing="ij")
  mask = P != R
  if not np.any(mask):
    raise ConfigurationError("Density ranges give no pair with rho != r")
  P, R = P[mask], R[mask]
  ratio = relentIntegrand(P, R, law) / (P - R)**2
  # close pairs lose the integrand to cancellation: use the integral form
  # of the remainder, (1 - s) H''(r + s (rho - r)) over s in (0, 1), with H'' = p' / rho
  near = np.abs(P - R) < 1e-3 * np.maximum(R, 1.)
  if np.any(near):
    s, weights = np.polynomial.legendre.leggauss(QUADRATURE_POINTS)
    s, weights = 0.5 * (s + 1.), 0.5 * weights
    x = R[near][:, None] + s[None] * (P[near] - R[near])[:, None]
    ratio[near] = np.sum(weights * (1. - s) * pressurePrime(x, law) / x, axis=1)
  return float(np.min(ratio)), float(np.max(ratio))
