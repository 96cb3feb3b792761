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
from prettytable import PrettyTable

from .FieldCalc import (
  GHOST, centralDerivative, divStress, faceDivergence, fourthDifference, padSlip, padVector,
)
from .Physics import potentialH, pressure, soundSpeed
from .utils import BlowUpError, ConfigurationError

logger = logging.getLogger(__name__)

DENSITY_FLOOR = 1e-8
DISSIPATION = 0.01


class FluidState3D:
  """
  Density and velocity of the fluid at the cell centres of a channel at a
  given time. Ghost layers are attached by :func:`applySlipBC`.

  :param Rho: Density, shape ``(nx, ny, nz)``
  :type Rho: numpy array
  :param U: Velocity, shape ``(3, nx, ny, nz)``
  :type U: numpy array
  :param T: Time
  :type T: float
  """
  def __init__(self, rho, u, t, domain=None, ghost=None):
    rho = np.asarray(rho, dtype="f8")
    u = np.asarray(u, dtype="f8")
    if rho.ndim != 3 or u.shape != (3,) + rho.shape:
      raise ConfigurationError(f"Incompatible density {rho.shape} and velocity {u.shape} shapes")
    if domain is not None and rho.shape != domain.shape:
      raise ConfigurationError(f"State of shape {rho.shape} does not live on a {domain.shape} grid")
    self.rho = rho
    self.u = u
    self.t = float(t)
    self.domain = domain
    self.ghost = ghost
    return

  def __repr__(self):
    return f"<PyThinFlow.FluidState3D object, (t: {self.t}, shape: {self.rho.shape})>"

  def __getitem__(self, key):
    if key == "Rho":
      return self.rho
    elif key == "U":
      return self.u
    elif key == "T":
      return self.t
    else:
      raise KeyError(f"There is no item \"{key}\" accessible through FluidState3D class")

  @property
  def momentum(self):
    return self.rho[None] * self.u

  def copy(self):
    return FluidState3D(self.rho.copy(), self.u.copy(), self.t, self.domain)

  def showState(self):
    """
    Print a summary of the state
    """
    res = PrettyTable()
    res.field_names = ["t", "min rho", "max rho", "max |u|"]
    speed = np.sqrt(np.sum(self.u**2, axis=0))
    res.add_row([f"{self.t:.6e}", f"{self.rho.min():.6e}", f"{self.rho.max():.6e}", f"{speed.max():.6e}"])
    print(res)
    return


def uniformState(domain, rho_bar=1., t=0.):
  """
  Equilibrium state :math:`(\\bar\\rho, 0)`.
  """
  return FluidState3D(np.full(domain.shape, float(rho_bar)), np.zeros((3,) + domain.shape), t, domain)


def applySlipBC(state, domain=None):
  """
  Attach ghost layers realising the slip conditions on every face of the
  box: odd reflection of the normal velocity component (zero normal trace),
  even reflection of the tangential components (zero normal derivative,
  i.e. zero tangential stress on a flat face) and of the density.
  The interior values are left untouched.

  :param state: State with interior values set
  :type state: FluidState3D
  :param domain: Domain of the state
  :type domain: ThinDomain
  :rtype: FluidState3D
  """
  domain = domain or state.domain
  ghost = (padSlip(state.rho, (1, 1, 1)), padVector(state.u))
  return FluidState3D(state.rho, state.u, state.t, domain, ghost=ghost)


def slipResidual(state, domain=None):
  """
  Largest violation of the discrete slip conditions: face-interpolated
  normal velocity and one-sided normal derivative of the tangential
  components across each face.
  """
  domain = domain or state.domain
  if state.ghost is None:
    state = applySlipBC(state, domain)
  U = state.ghost[1]
  w = GHOST
  res = 0.
  for a, h in enumerate(domain.spacing):
    n = domain.shape[a]
    for i in range(3):
      Ua = np.moveaxis(U[i], a, 0)
      lo_in, lo_gh = Ua[w], Ua[w - 1]
      hi_in, hi_gh = Ua[w + n - 1], Ua[w + n]
      if i == a:
        res = max(res, np.max(np.abs(0.5 * (lo_in + lo_gh))), np.max(np.abs(0.5 * (hi_in + hi_gh))))
      else:
        res = max(res, np.max(np.abs(lo_in - lo_gh)) / h, np.max(np.abs(hi_gh - hi_in)) / h)
  return float(res)


def _checkFloor(rho, t):
  if not np.all(np.isfinite(rho)):
    raise BlowUpError(t, np.nan)
  low = float(np.min(rho))
  if low <= DENSITY_FLOOR:
    raise BlowUpError(t, low)
  return


def rhs3d(state, law, visc, domain, dissipation=DISSIPATION, source=None):
  """
  Semi-discrete right-hand side of the barotropic Navier-Stokes system.
  The mass equation is in conservative face-flux form so the wall fluxes
  vanish exactly; momentum uses central differences. A fourth-order
  artificial dissipation :math:`-\\kappa\\, s/h\\, \\delta^4 q`, with
  :math:`s = \\max(|u| + c)`, acts on the density and the momentum.

  :param state: State (slip ghost layers are attached if missing)
  :type state: FluidState3D
  :param law: Pressure law
  :type law: PressureLaw
  :param visc: Viscosities
  :type visc: Viscosity
  :param domain: Channel
  :type domain: ThinDomain
  :param dissipation: Artificial dissipation coefficient :math:`\\kappa`
  :type dissipation: float
  :param source: Optional source terms ``(f_rho, f_m)`` of the mass and momentum equations
  :type source: tuple
  :raise BlowUpError: Density at or below the positivity floor
  :return: ``(drho_dt, du_dt)``
  :rtype: tuple
  """
  _checkFloor(state.rho, state.t)
  if state.ghost is None:
    state = applySlipBC(state, domain)
  R, U = state.ghost
  M = R[None] * U
  h = domain.spacing

  drho = -sum(faceDivergence(M[a], a, h[a], 3) for a in range(3))
  P = pressure(R, law)
  dm = divStress(state.u, visc, h)
  for i in range(3):
    dm[i] -= centralDerivative(P, i, h[i], 3)
    for j in range(3):
      dm[i] -= centralDerivative(M[i] * U[j], j, h[j], 3)

  if dissipation > 0.:
    s = float(np.max(np.sqrt(np.sum(state.u**2, axis=0)) + soundSpeed(state.rho, law)))
    for a in range(3):
      k = dissipation * s / h[a]
      drho -= k * fourthDifference(R, a, 3)
      for i in range(3):
        dm[i] -= k * fourthDifference(M[i], a, 3)

  if source is not None:
    drho = drho + source[0]
    dm = dm + source[1]
  du = (dm - state.u * drho[None]) / state.rho[None]
  return drho, du


def stableDt(state, law, visc, domain, cfl=0.5):
  """
  Explicit time step restriction

  .. math::

    \\Delta t = {\\rm cfl} \\min \\left( \\frac{h}{|u| + c}, \\frac{\\rho h^2}{2 (2\\mu + \\eta) \\, 3} \\right)

  with :math:`h` the smallest grid spacing.

  :param cfl: Courant number in (0, 1]
  :type cfl: float
  :rtype: float
  """
  if not 0. < cfl <= 1.:
    raise ConfigurationError(f"CFL number must be in (0, 1], got {cfl}")
  h = domain.hmin
  speed = np.sqrt(np.sum(state.u**2, axis=0)) + soundSpeed(state.rho, law)
  dt = float(np.min(h / speed))
  diff = 2. * (2. * visc.mu + visc.eta) * 3
  if diff > 0.:
    dt = min(dt, float(np.min(state.rho * h * h / diff)))
  return cfl * dt


def step3d(state, dt, law, visc, domain, dissipation=DISSIPATION, source=None):
  """
  One explicit midpoint Runge-Kutta step on the conservative variables
  :math:`(\\rho, \\rho u)`. Slip ghost layers are rebuilt for each stage.

  :param state: Current state
  :type state: FluidState3D
  :param dt: Time step (at most :func:`stableDt`)
  :type dt: float
  :param source: Optional callable ``t -> (f_rho, f_m)`` of source terms
  :type source: callable
  :raise BlowUpError: Density at or below the floor after a stage
  :rtype: FluidState3D
  """
  def _src(t):
    return None if source is None else source(t)

  rho, m = state.rho, state.momentum
  drho, du = rhs3d(state, law, visc, domain, dissipation, _src(state.t))
  dm = rho[None] * du + state.u * drho[None]
  rho_h = rho + 0.5 * dt * drho
  _checkFloor(rho_h, state.t + 0.5 * dt)
  m_h = m + 0.5 * dt * dm
  mid = FluidState3D(rho_h, m_h / rho_h[None], state.t + 0.5 * dt, domain)

  drho, du = rhs3d(mid, law, visc, domain, dissipation, _src(mid.t))
  dm = rho_h[None] * du + mid.u * drho[None]
  rho_n = rho + dt * drho
  _checkFloor(rho_n, state.t + dt)
  m_n = m + dt * dm
  if not np.all(np.isfinite(m_n)):
    raise BlowUpError(state.t + dt, float(np.min(rho_n)))
  return FluidState3D(rho_n, m_n / rho_n[None], state.t + dt, domain)


def totalMass(state, domain):
  """
  Discrete mass :math:`\\sum \\rho \\, h_x h_y h_z`.
  """
  return float(np.sum(state.rho) * domain.cell_volume)


def totalEnergy(state, law, domain):
  """
  Discrete total energy :math:`\\int \\frac12 \\rho |u|^2 + H(\\rho)`.
  """
  e = 0.5 * state.rho * np.sum(state.u**2, axis=0) + potentialH(state.rho, law)
  return float(np.sum(e) * domain.cell_volume)


def evolve3d(state, t_end, law, visc, domain, cfl=0.5, sample_every=1, sample_times=None,
             dissipation=DISSIPATION, source=None, callback=None):
  """
  Integrate a state up to ``t_end`` with :func:`step3d` and the time step of
  :func:`stableDt`, landing exactly on ``t_end``.

  :param sample_every: Keep one state every ``sample_every`` steps (ignored if ``sample_times`` is given)
  :type sample_every: int
  :param sample_times: Increasing times to land on and sample exactly
  :type sample_times: list
  :param callback: Called with every kept state
  :type callback: callable
  :return: List of sampled states, the initial and the final ones included
  :rtype: list of FluidState3D
  """
  if t_end < state.t:
    raise ConfigurationError(f"Final time {t_end} is before the initial time {state.t}")
  targets = sorted(float(t) for t in sample_times if state.t < t <= t_end) if sample_times is not None else []
  if not targets or targets[-1] != t_end:
    targets.append(float(t_end))
  samples = [state]
  if callback is not None:
    callback(state)
  step = 0
  for target in targets:
    while state.t < target:
      dt = stableDt(state, law, visc, domain, cfl)
      last = state.t + dt >= target
      if last:
        dt = target - state.t
      state = step3d(state, dt, law, visc, domain, dissipation, source)
      if last:
        state.t = target
      step += 1
      logger.debug(f"step {step}: t={state.t:.6e}, dt={dt:.3e}")
      keep = last if sample_times is not None else (step % sample_every == 0 or state.t >= t_end)
      if keep and samples[-1] is not state:
        samples.append(state)
        if callback is not None:
          callback(state)
  logger.info(f"3D run finished at t={state.t:.6e} after {step} steps, {len(samples)} samples")
  return samples


def manufacturedSolution3d(domain, law, visc, rho_amp=0.1, u_amp=0.1, rho_bar=1.):
  """
  Stationary manufactured solution compatible with the slip conditions,

  .. math::

    \\rho = \\bar\\rho + b \\prod_a \\cos(k_a x_a), \\quad
    u_i = s \\sin(k_i x_i) \\prod_{a \\ne i} \\cos(k_a x_a), \\quad k_a = \\pi / l_a,

  and the source terms ``(f_rho, f_m)`` that make it an exact solution.

  :return: ``(state, source)``
  :rtype: tuple
  """
  X = domain.meshgrid()
  k = [np.pi / l for l in domain.extents]
  C = [np.cos(k[a] * X[a]) for a in range(3)]
  S = [np.sin(k[a] * X[a]) for a in range(3)]
  dC = [-k[a] * S[a] for a in range(3)]
  dS = [k[a] * C[a] for a in range(3)]

  rho = rho_bar + rho_amp * C[0] * C[1] * C[2]
  drho = []
  for a in range(3):
    f = [C[b] if b != a else dC[a] for b in range(3)]
    drho.append(rho_amp * f[0] * f[1] * f[2])

  def _factors(i):
    return [S[a] if a == i else C[a] for a in range(3)], [dS[a] if a == i else dC[a] for a in range(3)]

  u = np.empty((3,) + domain.shape)
  du = np.empty((3, 3) + domain.shape)  # du[i, a] = d u_i / d x_a
  d2u = np.empty((3, 3, 3) + domain.shape)
  for i in range(3):
    g, dg = _factors(i)
    u[i] = u_amp * g[0] * g[1] * g[2]
    for a in range(3):
      f = [dg[b] if b == a else g[b] for b in range(3)]
      du[i, a] = u_amp * f[0] * f[1] * f[2]
      for b in range(3):
        if a == b:
          d2u[i, a, b] = -k[a]**2 * u[i]
        else:
          f = [dg[c] if c in (a, b) else g[c] for c in range(3)]
          d2u[i, a, b] = u_amp * f[0] * f[1] * f[2]

  div_u = du[0, 0] + du[1, 1] + du[2, 2]
  f_rho = sum(drho[a] * u[a] for a in range(3)) + rho * div_u
  dp = law.a * law.gamma * rho**(law.gamma - 1.)
  f_m = np.empty_like(u)
  for i in range(3):
    conv = sum(drho[j] * u[i] * u[j] + rho * du[i, j] * u[j] for j in range(3)) + rho * u[i] * div_u
    lap = d2u[i, 0, 0] + d2u[i, 1, 1] + d2u[i, 2, 2]
    graddiv = sum(d2u[j, j, i] for j in range(3))
    f_m[i] = conv + dp * drho[i] - visc.mu * lap - visc.lame * graddiv
  return FluidState3D(rho, u, 0., domain), (f_rho, f_m)
