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
import warnings

import numpy as np
from prettytable import PrettyTable

from .FieldCalc import integrate, lpNorm, slipGradient
from .Physics import dissipationDensity, potentialHPrime, pressure, pressurePrime, quadraticEquivalence, relentIntegrand
from .Solver3D import DISSIPATION, FluidState3D, rhs3d
from .utils import ConfigurationError

logger = logging.getLogger(__name__)

JVP_STEP = 1.49e-8
RATE_STEP = 1e-6


def _grad(f, domain):
  g = slipGradient(f, domain)
  if g.shape[0] == 9:
    return g.reshape((3, 3) + domain.shape)
  return g


def _advect(a, G):
  """
  :math:`((a \\cdot \\nabla) v)_i = \\sum_j a_j \\partial_j v_i` from ``G[i, j] = d v_i / d x_j``
  """
  return np.einsum("j...,ij...->i...", a, G)


def _dot(a, b):
  return np.sum(a * b, axis=0)


class PairSnapshot:
  """
  Reference solution :math:`[\\rho, u]` and perturbed solution
  :math:`[\\rho_\\lambda, u_\\lambda]` at the same time on the same grid,
  with their time derivatives taken from the semi-discrete right-hand side.

  :param reference: Reference state
  :type reference: FluidState3D
  :param perturbed: Perturbed state
  :type perturbed: FluidState3D
  :param reference_rates: ``(d_t rho, d_t u)`` of the reference (computed by :func:`rhs3d` if omitted)
  :type reference_rates: tuple
  :param perturbed_rates: ``(d_t rho_lambda, d_t u_lambda)`` (computed by :func:`rhs3d` if omitted)
  :type perturbed_rates: tuple
  :param artificial: Artificial dissipation coefficient used for the rates
  :type artificial: float
  """
  def __init__(self, reference, perturbed, law, visc, domain, reference_rates=None, perturbed_rates=None,
               artificial=DISSIPATION):
    if reference.rho.shape != perturbed.rho.shape or reference.rho.shape != domain.shape:
      raise ConfigurationError(f"Misaligned grids: reference {reference.rho.shape}, perturbed {perturbed.rho.shape}, domain {domain.shape}")
    if abs(reference.t - perturbed.t) > 1e-12 * max(1., abs(reference.t)):
      raise ConfigurationError(f"Misaligned times: reference t={reference.t}, perturbed t={perturbed.t}")
    self.reference = reference
    self.perturbed = perturbed
    self.law = law
    self.visc = visc
    self.domain = domain
    self.artificial = artificial
    self.t = perturbed.t
    self.dt_rho_ref, self.dt_u_ref = reference_rates or rhs3d(reference, law, visc, domain, artificial)
    self.dt_rho, self.dt_u = perturbed_rates or rhs3d(perturbed, law, visc, domain, artificial)
    self._dtt_u_ref = None
    return

  def __repr__(self):
    return f"<PyThinFlow.PairSnapshot object, (t: {self.t}, shape: {self.domain.shape})>"

  @property
  def sigma(self):
    return self.perturbed.rho - self.reference.rho

  @property
  def w(self):
    return self.perturbed.u - self.reference.u

  @property
  def dt_w(self):
    return self.dt_u - self.dt_u_ref

  @property
  def dtt_u_ref(self):
    """
    Second time derivative of the reference velocity, by a centred finite
    difference of the right-hand side along its own direction
    (Jacobian-vector product). Approximate.
    """
    if self._dtt_u_ref is None:
      warnings.warn("Second time derivatives of the reference are approximated by differencing right-hand sides", UserWarning)
      ref = self.reference
      scale = max(np.max(np.abs(self.dt_rho_ref)), np.max(np.abs(self.dt_u_ref)))
      if scale == 0.:
        self._dtt_u_ref = np.zeros_like(ref.u)
      else:
        delta = JVP_STEP * (1. + max(np.max(ref.rho), np.max(np.abs(ref.u)))) / scale
        plus = FluidState3D(ref.rho + delta * self.dt_rho_ref, ref.u + delta * self.dt_u_ref, ref.t + delta, self.domain)
        minus = FluidState3D(ref.rho - delta * self.dt_rho_ref, ref.u - delta * self.dt_u_ref, ref.t - delta, self.domain)
        _, up = rhs3d(plus, self.law, self.visc, self.domain, self.artificial)
        _, um = rhs3d(minus, self.law, self.visc, self.domain, self.artificial)
        self._dtt_u_ref = (up - um) / (2. * delta)
    return self._dtt_u_ref


class EnergyReport:
  """
  Functionals of a pair snapshot.

  :param t: Time
  :param e: Modulated energy :math:`E_\\lambda`
  :param d_diss: Dissipation :math:`D_\\lambda`
  :param estar: :math:`E^*_\\lambda = E_\\lambda + \\|\\nabla\\sigma_\\lambda\\|_{L^4}^2`
  :param grad_sigma_l4: :math:`\\|\\nabla\\sigma_\\lambda\\|_{L^4}`
  :param i: The seven source integrals
  :param sigma_linf: :math:`\\|\\sigma_\\lambda\\|_\\infty`
  :param w_linf: :math:`\\|w_\\lambda\\|_\\infty`
  :param de_dt: Time derivative of :math:`E_\\lambda` along the semi-discrete flow (``nan`` if unknown)
  :param approximate: Second time derivatives entered by finite differences
  """
  def __init__(self, t, e, d_diss, estar, grad_sigma_l4, i, sigma_linf, w_linf, de_dt=np.nan, approximate=False):
    self.t = float(t)
    self.e = float(e)
    self.d_diss = float(d_diss)
    self.estar = float(estar)
    self.grad_sigma_l4 = float(grad_sigma_l4)
    self.i = np.asarray(i, dtype="f8")
    self.sigma_linf = float(sigma_linf)
    self.w_linf = float(w_linf)
    self.de_dt = float(de_dt)
    self.approximate = approximate
    return

  def __repr__(self):
    return f"<PyThinFlow.EnergyReport object, (t: {self.t}, E: {self.e:.4e}, D: {self.d_diss:.4e}, E*: {self.estar:.4e})>"

  def __getitem__(self, key):
    d = self.toDict()
    if key not in d:
      raise KeyError(f"There is no item \"{key}\" accessible through EnergyReport class")
    return d[key]

  def toDict(self):
    d = {"t": self.t, "E": self.e, "dE_dt": self.de_dt, "D": self.d_diss, "Estar": self.estar}
    d.update({f"I{j + 1}": float(v) for j, v in enumerate(self.i)})
    d.update({"sigma_linf": self.sigma_linf, "w_linf": self.w_linf})
    return d


def modulatedEnergy(pair, law, visc, domain):
  """
  Modulated energy

  .. math::

    E_\\lambda = \\int \\frac12 \\left(\\rho_\\lambda |w_\\lambda|^2 + \\varepsilon^4 \\rho_\\lambda |\\partial_t w_\\lambda|^2
    + \\varepsilon^2 S(\\nabla w_\\lambda):\\nabla w_\\lambda\\right) + H(\\rho_\\lambda) - H'(\\rho)\\sigma_\\lambda - H(\\rho)

  :param pair: Pair snapshot
  :type pair: PairSnapshot
  :rtype: float
  """
  eps = domain.epsilon
  rho_l = pair.perturbed.rho
  w, dtw = pair.w, pair.dt_w
  dens = 0.5 * (rho_l * _dot(w, w) + eps**4 * rho_l * _dot(dtw, dtw)
                + eps**2 * dissipationDensity(_grad(w, domain), visc))
  dens = dens + relentIntegrand(rho_l, pair.reference.rho, law)
  return float(integrate(dens, domain))


def dissipation(pair, visc, domain):
  """
  Dissipation

  .. math::

    D_\\lambda = \\int \\varepsilon^2 \\rho_\\lambda |\\partial_t w_\\lambda|^2 + S(\\nabla w_\\lambda):\\nabla w_\\lambda
    + \\varepsilon^4 S(\\partial_t\\nabla w_\\lambda):\\partial_t\\nabla w_\\lambda

  :rtype: float
  """
  eps = domain.epsilon
  dtw = pair.dt_w
  dens = (eps**2 * pair.perturbed.rho * _dot(dtw, dtw)
          + dissipationDensity(_grad(pair.w, domain), visc)
          + eps**4 * dissipationDensity(_grad(dtw, domain), visc))
  return float(integrate(dens, domain))


def gradSigmaL4(pair, domain):
  return lpNorm(_grad(pair.sigma, domain), 4, domain)


def estar(pair, law, visc, domain):
  """
  :math:`E^*_\\lambda = E_\\lambda + \\|\\nabla \\sigma_\\lambda\\|_{L^4}^2`
  """
  return modulatedEnergy(pair, law, visc, domain) + gradSigmaL4(pair, domain)**2


def sourceIntegrals(pair, law, visc, domain):
  """
  The seven integrals balancing the growth of the energy,
  with :math:`K_\\lambda = \\sigma_\\lambda \\partial_t u + (M \\cdot \\nabla) u`
  and :math:`M = \\rho_\\lambda u_\\lambda - \\rho u`:

  .. math::

    I_1 &= -\\int w_\\lambda \\cdot (K_\\lambda + \\sigma_\\lambda \\nabla H'(\\rho)) + (p(\\rho_\\lambda) - p(\\rho) - p'(\\rho)\\sigma_\\lambda) {\\rm div}\\, u \\\\
    I_2 &= -\\varepsilon^2 \\int \\rho_\\lambda ((u_\\lambda\\cdot\\nabla) w_\\lambda) \\cdot \\partial_t w_\\lambda \\\\
    I_3 &= -\\varepsilon^2 \\int K_\\lambda \\cdot \\partial_t w_\\lambda \\\\
    I_4 &= \\varepsilon^2 \\int (p(\\rho_\\lambda) - p(\\rho)) {\\rm div}\\, \\partial_t w_\\lambda \\\\
    I_5 &= \\varepsilon^4 \\int (\\partial_t p(\\rho_\\lambda) - \\partial_t p(\\rho)) {\\rm div}\\, \\partial_t w_\\lambda \\\\
    I_6 &= -\\varepsilon^4 \\int [\\partial_t \\rho_\\lambda (\\partial_t w_\\lambda + (u_\\lambda\\cdot\\nabla) w_\\lambda) + \\rho_\\lambda (\\partial_t u_\\lambda \\cdot \\nabla) w_\\lambda] \\cdot \\partial_t w_\\lambda \\\\
    I_7 &= -\\varepsilon^4 \\int \\partial_t K_\\lambda \\cdot \\partial_t w_\\lambda

  :param pair: Pair snapshot (reference rates and second rates are taken from it)
  :type pair: PairSnapshot
  :return: Array of the seven integrals
  :rtype: numpy array
  """
  eps = domain.epsilon
  ref, per = pair.reference, pair.perturbed
  rho, u, rho_l, u_l = ref.rho, ref.u, per.rho, per.u
  sigma, w, dtw = pair.sigma, pair.w, pair.dt_w
  dt_rho, dt_u, dt_rho_l, dt_u_l = pair.dt_rho_ref, pair.dt_u_ref, pair.dt_rho, pair.dt_u
  if dt_rho is None or dt_u is None:
    raise ConfigurationError("Reference time derivatives are missing")

  Gu = _grad(u, domain)
  Gw = _grad(w, domain)
  Gdtw = _grad(dtw, domain)
  Gdtu = _grad(dt_u, domain)
  div_u = np.trace(Gu, axis1=0, axis2=1)
  div_dtw = np.trace(Gdtw, axis1=0, axis2=1)
  grad_hp = _grad(potentialHPrime(rho, law), domain)
  p_l, p = pressure(rho_l, law), pressure(rho, law)
  dp, dp_l = pressurePrime(rho, law), pressurePrime(rho_l, law)

  M = rho_l[None] * u_l - rho[None] * u
  K = sigma[None] * dt_u + _advect(M, Gu)
  dt_M = (rho_l[None] * dt_u_l + u_l * dt_rho_l[None]) - (rho[None] * dt_u + u * dt_rho[None])
  dt_K = ((dt_rho_l - dt_rho)[None] * dt_u + sigma[None] * pair.dtt_u_ref
          + _advect(dt_M, Gu) + _advect(M, Gdtu))
  ul_grad_w = _advect(u_l, Gw)

  dens = [
    -(_dot(w, K + sigma[None] * grad_hp) + (p_l - p - dp * sigma) * div_u),
    -eps**2 * rho_l * _dot(ul_grad_w, dtw),
    -eps**2 * _dot(K, dtw),
    eps**2 * (p_l - p) * div_dtw,
    eps**4 * (dp_l * dt_rho_l - dp * dt_rho) * div_dtw,
    -eps**4 * _dot(dt_rho_l[None] * (dtw + ul_grad_w) + rho_l[None] * _advect(dt_u_l, Gw), dtw),
    -eps**4 * _dot(dt_K, dtw),
  ]
  return np.array([float(integrate(d, domain)) for d in dens])


def _advance(state, dt_rho, dt_u, tau, domain):
  return FluidState3D(state.rho + tau * dt_rho, state.u + tau * dt_u, state.t + tau, domain)


def energyRate(pair, law, visc, domain, step=RATE_STEP):
  """
  Time derivative of the modulated energy along the semi-discrete flow:
  centred difference of :math:`E_\\lambda` between the pairs advanced by
  :math:`\\pm\\tau` along the rates of both solutions. The advanced pairs
  get their own rates, hence their own :math:`\\partial_t w_\\lambda`.

  :param pair: Pair snapshot
  :type pair: PairSnapshot
  :param step: Increment relative to the size of the states over the size of the rates
  :type step: float
  :rtype: float
  """
  ref, per = pair.reference, pair.perturbed
  rates = (pair.dt_rho_ref, pair.dt_u_ref, pair.dt_rho, pair.dt_u)
  scale = max(float(np.max(np.abs(r))) for r in rates)
  if scale == 0.:
    return 0.
  size = max(np.max(ref.rho), np.max(per.rho), np.max(np.abs(ref.u)), np.max(np.abs(per.u)))
  tau = step * (1. + size) / scale
  e = []
  for s in (tau, -tau):
    shifted = PairSnapshot(_advance(ref, pair.dt_rho_ref, pair.dt_u_ref, s, domain),
                           _advance(per, pair.dt_rho, pair.dt_u, s, domain),
                           law, visc, domain, artificial=pair.artificial)
    e.append(modulatedEnergy(shifted, law, visc, domain))
  return (e[0] - e[1]) / (2. * tau)


def energyReport(pair, law, visc, domain, rate=True):
  """
  Compute every functional of a pair snapshot.

  :param rate: Also compute :math:`dE_\\lambda/dt` with :func:`energyRate`
  :type rate: bool
  :rtype: EnergyReport
  """
  e = modulatedEnergy(pair, law, visc, domain)
  g4 = gradSigmaL4(pair, domain)
  return EnergyReport(
    pair.t, e, dissipation(pair, visc, domain), e + g4**2, g4,
    sourceIntegrals(pair, law, visc, domain),
    lpNorm(pair.sigma, np.inf, domain), lpNorm(pair.w, np.inf, domain),
    de_dt=energyRate(pair, law, visc, domain) if rate else np.nan,
    approximate=True,
  )


def identityResidual(reports):
  """
  Residual of the energy identity. When every report carries
  :math:`dE_\\lambda/dt` the residual is taken at each snapshot,

  .. math::

    r(t) = \\frac{dE_\\lambda}{dt} + D_\\lambda - \\sum_j I_j,

  and only measures the spatial consistency of the discrete identity.
  Otherwise it is taken on each sampling interval,

  .. math::

    r_n = \\frac{E(t_{n+1}) - E(t_n)}{t_{n+1} - t_n} + \\bar D_{n+1/2} - \\sum_j \\bar I_{j, n+1/2}

  with the interval values :math:`\\bar D, \\bar I_j` taken as the averages
  of the two endpoint values, and also carries the error of the time sampling.

  :param reports: Energy reports (or pair snapshots, reported on the fly) in time order
  :type reports: list of EnergyReport
  :raise ConfigurationError: No snapshot, less than two snapshots without energy rates or non increasing times
  :return: ``(residuals, max |residual|)``
  :rtype: tuple
  """
  reports = [r if isinstance(r, EnergyReport) else energyReport(r, r.law, r.visc, r.domain) for r in reports]
  if not reports:
    raise ConfigurationError("The energy identity residual needs at least one snapshot")
  for a, b in zip(reports[:-1], reports[1:]):
    if not b.t > a.t:
      raise ConfigurationError(f"Snapshot times must increase, got {a.t} then {b.t}")
  if all(np.isfinite(r.de_dt) for r in reports):
    res = np.array([r.de_dt + r.d_diss - np.sum(r.i) for r in reports])
  else:
    if len(reports) < 2:
      raise ConfigurationError("The energy identity residual needs at least 2 snapshots without energy rates")
    res = np.array([(b.e - a.e) / (b.t - a.t) + 0.5 * (a.d_diss + b.d_diss) - 0.5 * (np.sum(a.i) + np.sum(b.i))
                    for a, b in zip(reports[:-1], reports[1:])])
  return res, float(np.max(np.abs(res)))


def relativeResidual(reports, residuals=None):
  """
  Largest identity residual relative to the largest dissipation of the reports.

  :return: ``max |r| / max D``, ``nan`` without dissipation
  :rtype: float
  """
  if residuals is None:
    residuals = identityResidual(reports)[0]
  d = max((r.d_diss for r in reports), default=0.)
  if not d > 0. or len(residuals) == 0:
    return np.nan
  return float(np.max(np.abs(residuals)) / d)


class SmallnessFlags:
  """
  Smallness of the perturbation: :math:`\\|\\sigma_\\lambda\\|_\\infty \\le C_1/2`
  and :math:`\\|w_\\lambda\\|_\\infty \\le 1`.
  """
  def __init__(self, sigma_linf, w_linf, c1):
    self.sigma_linf = float(sigma_linf)
    self.w_linf = float(w_linf)
    self.c1 = float(c1)
    self.density_ok = self.sigma_linf <= 0.5 * self.c1
    self.velocity_ok = self.w_linf <= 1.
    return

  def __repr__(self):
    return f"<PyThinFlow.SmallnessFlags object, (density: {self.density_ok}, velocity: {self.velocity_ok})>"

  @property
  def ok(self):
    return self.density_ok and self.velocity_ok

  @property
  def margins(self):
    return 0.5 * self.c1 - self.sigma_linf, 1. - self.w_linf


def smallnessCheck(pair, domain, c1):
  """
  :param c1: Lower bound of the reference density over the run
  :type c1: float
  :rtype: SmallnessFlags
  """
  return SmallnessFlags(lpNorm(pair.sigma, np.inf, domain), lpNorm(pair.w, np.inf, domain), c1)


def relentEquivalence(pair, law, domain, n=201):
  """
  Ratio :math:`\\int \\sigma^2 / \\int (H(\\rho_\\lambda) - H'(\\rho)\\sigma - H(\\rho))` and the
  brute-force constants of the pointwise equivalence over the realized
  density ranges. The ratio lies in :math:`[1/c_2, 1/c_1]`.

  :return: ``(ratio, (c1, c2))``, ratio is ``nan`` for identical densities
  :rtype: tuple
  """
  rho, rho_l = pair.reference.rho, pair.perturbed.rho
  relent = float(integrate(relentIntegrand(rho_l, rho, law), domain))
  sq = float(integrate(pair.sigma**2, domain))
  lo, hi = min(rho.min(), rho_l.min()), max(rho.max(), rho_l.max())
  if hi - lo <= 1e-12 * hi:
    return np.nan, (np.nan, np.nan)
  c = quadraticEquivalence(law, (lo, hi), (float(rho.min()), float(rho.max())), n)
  return (sq / relent if relent > 0. else np.nan), c


def referenceBound(pair, domain):
  """
  Largest available norm of the reference solution: sup norms of
  :math:`\\rho, 1/\\rho, u, \\nabla u, \\partial_t u, \\partial_t^2 u, \\nabla\\rho`.
  """
  ref = pair.reference
  return float(max(
    np.max(ref.rho), np.max(1. / ref.rho), lpNorm(ref.u, np.inf, domain),
    lpNorm(_grad(ref.u, domain), np.inf, domain), lpNorm(pair.dt_u_ref, np.inf, domain),
    lpNorm(pair.dtt_u_ref, np.inf, domain), lpNorm(_grad(ref.rho, domain), np.inf, domain),
  ))


def estimateDiagnostics(pair, report, domain):
  """
  Monitored left and right sides of the intermediate energy estimates:
  :math:`\\|w\\|_2^2` vs :math:`E`, :math:`\\|\\nabla w\\|_2^2` vs :math:`\\varepsilon^{-2}E`,
  :math:`\\|\\partial_t w\\|_2` vs :math:`\\varepsilon^{-1}\\sqrt D` and
  :math:`\\|\\sigma - \\bar\\sigma\\|_4` vs :math:`d\\|\\nabla\\sigma\\|_4 + V^{-1/4}\\sqrt E`.

  :return: ``{name: (lhs, rhs, ratio)}``
  :rtype: dict
  """
  eps = domain.epsilon
  sigma = pair.sigma
  mean = float(integrate(sigma, domain)) / domain.v
  pairs = {
    "w_l2": (lpNorm(pair.w, 2, domain)**2, report.e),
    "grad_w_l2": (lpNorm(_grad(pair.w, domain), 2, domain)**2, report.e / eps**2),
    "dt_w_l2": (lpNorm(pair.dt_w, 2, domain), np.sqrt(report.d_diss) / eps),
    "sigma_l4": (lpNorm(sigma - mean, 4, domain), domain.d * report.grad_sigma_l4 + domain.v**-0.25 * np.sqrt(report.e)),
  }
  return {k: (float(l), float(r), float(l / r) if r > 0. else np.nan) for k, (l, r) in pairs.items()}


def showEnergyReports(reports):
  """
  Print the functionals of a list of reports
  """
  res = PrettyTable()
  res.field_names = ["t", "E", "D", "E*", "sum I", "|sigma|inf", "|w|inf"]
  for r in reports:
    res.add_row([f"{r.t:.4e}", f"{r.e:.4e}", f"{r.d_diss:.4e}", f"{r.estar:.4e}", f"{np.sum(r.i):.4e}",
                 f"{r.sigma_linf:.3e}", f"{r.w_linf:.3e}"])
  print(res)
  return
