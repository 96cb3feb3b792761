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


import logging

import numpy as np

from .FieldCalc import cellAverageDown, centralDerivative, faceDivergence, fourthDifference, padSlip, secondDerivative
from .Physics import pressure, soundSpeed
from .Solver3D import DISSIPATION, _checkFloor
from .utils import ConfigurationError

logger = logging.getLogger(__name__)

COMPATIBILITY_TOL = 1e-8
STENCIL_STEP = 1e-3
NZ_REFERENCE = 512


class Profile1D:
  """
  Density and velocity of the one dimensional limit problem at the cell
  centres :math:`y_j = (j + 1/2)/n_z` of :math:`(0, 1)`.

  :param Rho: Density (> 0)
  :type Rho: numpy array
  :param U: Velocity
  :type U: numpy array
  :param T: Time
  :type T: float
  """
  def __init__(self, rho, u, t):
    rho = np.asarray(rho, dtype="f8")
    u = np.asarray(u, dtype="f8")
    if rho.ndim != 1 or rho.shape != u.shape or rho.size < 2:
      raise ConfigurationError(f"Incompatible profiles: density {rho.shape}, velocity {u.shape}")
    self.rho = rho
    self.u = u
    self.t = float(t)
    return

  def __repr__(self):
    return f"<PyThinFlow.Profile1D object, (t: {self.t}, nz: {self.nz})>"

  def __getitem__(self, key):
    if key == "Rho":
      return self.rho
    elif key == "U":
      return self.u
    elif key == "T":
      return self.t
    else:
      raise KeyError(f"There is no item \"{key}\" accessible through Profile1D class")

  @property
  def nz(self):
    return self.rho.size

  @property
  def h(self):
    return 1. / self.rho.size

  @property
  def y(self):
    return (np.arange(self.nz) + 0.5) / self.nz

  @property
  def mass(self):
    return float(np.sum(self.rho) * self.h)

  def copy(self):
    return Profile1D(self.rho.copy(), self.u.copy(), self.t)


def canonicalData(rho_bar=1., b=0.1, s=0.1):
  """
  Compatible initial data :math:`\\rho_0 = \\bar\\rho + b\\cos(\\pi y)`,
  :math:`u_0 = s\\sin(\\pi y)`.

  :return: ``(rho0, u0)`` as vectorized callables of ``y``
  :rtype: tuple
  """
  if not rho_bar - abs(b) > 0.:
    raise ConfigurationError(f"Density rho_bar + b cos(pi y) must stay positive, got rho_bar={rho_bar}, b={b}")
  return (lambda y: rho_bar + b * np.cos(np.pi * np.asarray(y, dtype="f8")),
          lambda y: s * np.sin(np.pi * np.asarray(y, dtype="f8")))


def checkCompatibility(rho0, u0, tol=COMPATIBILITY_TOL, step=STENCIL_STEP):
  """
  Check the endpoint compatibility conditions of the initial data,
  :math:`u_0 = \\partial_y^2 u_0 = 0` and :math:`\\partial_y \\rho_0 = 0` at
  :math:`y = 0, 1`, on one-sided second order stencils of spacing ``step``.
  A condition holds when its stencil value is below ``tol`` relative to
  the size of the data, or below its own truncation error, estimated by
  the same stencil on spacing ``2 step``.

  :param rho0: Initial density, callable of ``y``
  :type rho0: callable
  :param u0: Initial velocity, callable of ``y``
  :type u0: callable
  :raise ConfigurationError: One of the conditions is violated by more than ``tol``
  """
  errors = []
  for end, sign in ((0., 1.), (1., -1.)):
    y = end + sign * step * np.arange(7)
    r = np.asarray(rho0(y), dtype="f8")
    v = np.asarray(u0(y), dtype="f8")
    r_scale, v_scale = 1. + np.max(np.abs(r)), 1. + np.max(np.abs(v))
    checks = {
      "u0": (v[0], v[0], v_scale),
      "d2 u0": ((2. * v[0] - 5. * v[1] + 4. * v[2] - v[3]) / step**2,
                (2. * v[0] - 5. * v[2] + 4. * v[4] - v[6]) / (2. * step)**2, v_scale),
      "d rho0": (sign * (-3. * r[0] + 4. * r[1] - r[2]) / (2. * step),
                 sign * (-3. * r[0] + 4. * r[2] - r[4]) / (4. * step), r_scale),
    }
    for name, (value, coarse, scale) in checks.items():
      if not abs(value) <= tol * scale + abs(value - coarse):
        errors.append(f"{name}({end:g}) = {value:.3e}")
  if errors:
    raise ConfigurationError("Initial data violate the compatibility conditions: " + ", ".join(errors))
  return


def rhs1d(profile, law, visc, dissipation=DISSIPATION, source=None):
  """
  Semi-discrete right-hand side of the limit problem

  .. math::

    \\partial_t \\rho = -\\partial_y(\\rho u), \\quad
    \\rho \\partial_t u = -\\partial_y(\\rho u^2) - \\partial_y p(\\rho) + \\nu \\partial_y^2 u + u \\partial_y(\\rho u)

  with :math:`\\nu = 4\\mu/3 + \\eta` and no-slip ends (odd reflection of
  :math:`u`, even of :math:`\\rho`). The discretization is the one of
  :func:`rhs3d` restricted to states independent of the cross-section.

  :param profile: Current profile
  :type profile: Profile1D
  :param source: Optional source terms ``(f_rho, f_m)``
  :type source: tuple
  :raise BlowUpError: Density at or below the positivity floor
  :return: ``(drho_dt, du_dt)``
  :rtype: tuple
  """
  _checkFloor(profile.rho, profile.t)
  h = profile.h
  R = padSlip(profile.rho, (1,))
  U = padSlip(profile.u, (-1,))
  M = R * U
  drho = -faceDivergence(M, 0, h, 1)
  dm = visc.nu * secondDerivative(U, 0, h, 1)
  dm -= centralDerivative(pressure(R, law), 0, h, 1)
  dm -= centralDerivative(M * U, 0, h, 1)
  if dissipation > 0.:
    k = dissipation * float(np.max(np.abs(profile.u) + soundSpeed(profile.rho, law))) / h
    drho -= k * fourthDifference(R, 0, 1)
    dm -= k * fourthDifference(M, 0, 1)
  if source is not None:
    drho = drho + source[0]
    dm = dm + source[1]
  return drho, (dm - profile.u * drho) / profile.rho


def stableDt1d(profile, law, visc, cfl=0.5):
  """
  Explicit time step restriction of the 1D scheme,
  :math:`{\\rm cfl}\\min(h/(|u|+c), \\rho h^2/(2\\nu))`.
  """
  if not 0. < cfl <= 1.:
    raise ConfigurationError(f"CFL number must be in (0, 1], got {cfl}")
  h = profile.h
  dt = float(np.min(h / (np.abs(profile.u) + soundSpeed(profile.rho, law))))
  dt = min(dt, float(np.min(profile.rho * h * h / (2. * visc.nu))))
  return cfl * dt


def step1d(profile, dt, law, visc, dissipation=DISSIPATION, source=None):
  """
  Midpoint Runge-Kutta step on :math:`(\\rho, \\rho u)`, as :func:`step3d`.
  """
  def _src(t):
    return None if source is None else source(t)

  rho, m = profile.rho, profile.rho * profile.u
  drho, du = rhs1d(profile, law, visc, dissipation, _src(profile.t))
  rho_h = rho + 0.5 * dt * drho
  _checkFloor(rho_h, profile.t + 0.5 * dt)
  m_h = m + 0.5 * dt * (rho * du + profile.u * drho)
  mid = Profile1D(rho_h, m_h / rho_h, profile.t + 0.5 * dt)
  drho, du = rhs1d(mid, law, visc, dissipation, _src(mid.t))
  rho_n = rho + dt * drho
  _checkFloor(rho_n, profile.t + dt)
  m_n = m + dt * (rho_h * du + mid.u * drho)
  return Profile1D(rho_n, m_n / rho_n, profile.t + dt)


def solve1d(rho0, u0, T, law, visc, nz=NZ_REFERENCE, cfl=0.5, sample_times=None, sample_every=None,
            dissipation=DISSIPATION):
  """
  Solve the limit problem with no-slip ends from compatible initial data.

  :param rho0: Initial density, callable of ``y`` (or array of ``nz`` cell values, not checked for compatibility)
  :type rho0: callable or numpy array
  :param u0: Initial velocity, callable of ``y`` (or array of ``nz`` cell values)
  :type u0: callable or numpy array
  :param T: Final time (>= 0)
  :type T: float
  :param nz: Number of cells
  :type nz: int
  :param sample_times: Times to land on exactly and sample (default: initial and final time)
  :type sample_times: list
  :param sample_every: Keep one profile every ``sample_every`` steps instead
  :type sample_every: int
  :raise ConfigurationError: Nonpositive density, compatibility violation or bad parameters
  :raise BlowUpError: Density floor breached during the run
  :return: Sampled trajectory, initial profile first
  :rtype: list of Profile1D
  """
  if int(nz) != nz or nz < 4:
    raise ConfigurationError(f"nz must be an integer >= 4, got {nz}")
  if not T >= 0.:
    raise ConfigurationError(f"Final time must be nonnegative, got {T}")
  y = (np.arange(nz) + 0.5) / nz
  if callable(rho0) and callable(u0):
    checkCompatibility(rho0, u0)
    rho, u = np.asarray(rho0(y), dtype="f8"), np.asarray(u0(y), dtype="f8")
  else:
    rho, u = np.asarray(rho0, dtype="f8"), np.asarray(u0, dtype="f8")
    logger.debug("array initial data: compatibility conditions not checked")
  if rho.shape != (nz,) or u.shape != (nz,):
    raise ConfigurationError(f"Initial data must have {nz} cell values")
  if not np.all(rho > 0.):
    raise ConfigurationError("Initial density must be positive")

  profile = Profile1D(rho, u, 0.)
  if sample_times is None:
    targets = [float(T)]
  else:
    targets = sorted(float(t) for t in sample_times if 0. < t <= T)
    if not targets or targets[-1] != T:
      targets.append(float(T))
  samples = [profile]
  step = 0
  for target in targets:
    while profile.t < target:
      dt = stableDt1d(profile, law, visc, cfl)
      last = profile.t + dt >= target
      if last:
        dt = target - profile.t
      profile = step1d(profile, dt, law, visc, dissipation)
      if last:
        profile.t = target
      step += 1
      if last or (sample_every is not None and sample_times is None and step % sample_every == 0):
        samples.append(profile)
  logger.info(f"1D run (nz={nz}) finished at t={profile.t:.6e} after {step} steps")
  return samples


def restrictProfile(profile, nz):
  """
  Restrict a fine profile to ``nz`` cells by cell averaging of the density
  and the momentum.
  """
  if profile.nz % nz:
    raise ConfigurationError(f"Cannot restrict a profile of {profile.nz} cells to {nz} cells")
  factor = profile.nz // nz
  rho = cellAverageDown(profile.rho, factor)
  m = cellAverageDown(profile.rho * profile.u, factor)
  return Profile1D(rho, m / rho, profile.t)


def manufacturedSolution1d(nz, law, visc, rho_amp=0.1, u_amp=0.1, rho_bar=1.):
  """
  Stationary manufactured solution :math:`\\rho = \\bar\\rho + b\\cos(\\pi y)`,
  :math:`u = s\\sin(\\pi y)` of the limit problem with the source terms
  making it exact.

  :return: ``(profile, source)``
  :rtype: tuple
  """
  y = (np.arange(nz) + 0.5) / nz
  k = np.pi
  rho = rho_bar + rho_amp * np.cos(k * y)
  drho = -rho_amp * k * np.sin(k * y)
  u = u_amp * np.sin(k * y)
  du = u_amp * k * np.cos(k * y)
  d2u = -k * k * u
  f_rho = drho * u + rho * du
  f_m = drho * u * u + 2. * rho * u * du + law.a * law.gamma * rho**(law.gamma - 1.) * drho - visc.nu * d2u
  return Profile1D(rho, u, 0.), (f_rho, f_m)
