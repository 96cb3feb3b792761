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
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from prettytable import PrettyTable

from .Energetics import PairSnapshot, energyReport, identityResidual, relativeResidual
from .FieldCalc import cellAverageDown, lift1d, lpNorm, sobolevNorm
from .Geometry import domainMetrics
from .Inequalities import randomField
from .Solver1D import Profile1D, canonicalData, checkCompatibility, restrictProfile, rhs1d, solve1d
from .Solver3D import FluidState3D, evolve3d, stableDt, step3d
from .utils import BlowUpError, ConfigurationError

logger = logging.getLogger(__name__)

PILOT_DELTA = 1e-4
NORMALIZATIONS = ("mm1", "sup")


def _checkScales(epsilon, v):
  errors = []
  if not epsilon > 0.:
    errors.append(f"epsilon must be positive, got {epsilon}")
  if not v > 0.:
    errors.append(f"volume must be positive, got {v}")
  if errors:
    raise ConfigurationError("; ".join(errors))
  return


def growthRate(epsilon, v):
  """
  Exponential rate :math:`\\varepsilon^{-16/5} + V^{-1/4}\\varepsilon^{-1}` of the Gronwall envelope.
  """
  _checkScales(epsilon, v)
  return epsilon**(-3.2) + v**(-0.25) / epsilon


def omegaThreshold(epsilon, v, t_horizon, c):
  """
  Amplitude threshold below which perturbations of the data are controlled
  up to the horizon :math:`T`:

  .. math::

    \\omega = \\exp\\left[-c\\left(\\varepsilon^{-16/5} + V^{-1/4}\\varepsilon^{-1}\\right)T\\right]
    \\min\\{\\varepsilon^5, \\varepsilon^{3/2}V^{1/2}\\}

  :param epsilon: Scale (> 0)
  :type epsilon: float
  :param v: Volume of the domain (> 0)
  :type v: float
  :param t_horizon: Horizon (>= 0)
  :type t_horizon: float
  :param c: Constant (>= 0)
  :type c: float
  :raise ConfigurationError: Nonpositive scale or volume, negative horizon or constant
  :rtype: float
  """
  if not t_horizon >= 0. or not c >= 0.:
    raise ConfigurationError(f"Horizon and constant must be nonnegative, got T={t_horizon}, c={c}")
  rate = growthRate(epsilon, v)
  return float(np.exp(-c * rate * t_horizon) * min(epsilon**5, epsilon**1.5 * v**0.5))


def gronwallEnvelope(estar0, t, epsilon, v, c):
  """
  Gronwall envelope :math:`E^*(0)\\exp[c(\\varepsilon^{-16/5} + V^{-1/4}\\varepsilon^{-1})t]`.

  :param t: Time(s), >= 0
  :type t: float or numpy array
  :rtype: float or numpy array
  """
  t = np.asarray(t, dtype="f8")
  if not estar0 >= 0. or np.any(t < 0.):
    raise ConfigurationError(f"Envelope needs estar0 >= 0 and t >= 0, got estar0={estar0}")
  env = estar0 * np.exp(c * growthRate(epsilon, v) * t)
  return float(env) if env.ndim == 0 else env


def smallnessCeiling(epsilon, v, c_geom=1.):
  """
  Ceiling :math:`c_{geom}\\min\\{\\varepsilon^5, \\varepsilon^{3/2}V^{1/2}\\}` of :math:`E^*`.
  """
  _checkScales(epsilon, v)
  if not c_geom > 0.:
    raise ConfigurationError(f"Ceiling constant must be positive, got {c_geom}")
  return float(c_geom * min(epsilon**5, epsilon**1.5 * v**0.5))


class ReferenceTrajectory:
  """
  Reference solution of the limit problem lifted to a channel: the fine
  1D profiles, the lifted states on the channel grid and their lifted time
  derivatives.
  """
  def __init__(self, profiles, states, rates):
    self.profiles = profiles
    self.states = states
    self.rates = rates
    return

  def __repr__(self):
    return f"<PyThinFlow.ReferenceTrajectory object, ({len(self.states)} samples)>"

  def __len__(self):
    return len(self.states)

  @property
  def times(self):
    return [s.t for s in self.states]


def initialReference(config, domain):
  """
  Canonical compatible data evaluated at the cell centres and lifted to
  the channel.

  :raise ConfigurationError: Incompatible data
  :rtype: FluidState3D
  """
  r = config["Reference"]
  rho0, u0 = canonicalData(r["RhoBar"], r["B"], r["S"])
  checkCompatibility(rho0, u0)
  z = domain.cellCenters()[2]
  return lift1d(Profile1D(rho0(z), u0(z), 0.), domain)


def makeReference(config, domain, sample_times=None):
  """
  Solve the limit problem at the reference resolution from the canonical
  data, restrict the profiles to the channel grid by cell averaging and
  lift them, with the lifted 1D right-hand sides as time derivatives.

  :param config: Configuration
  :type config: ExperimentConfig
  :param domain: Channel
  :type domain: ThinDomain
  :param sample_times: Sample times (default: initial and final time)
  :type sample_times: list
  :raise ConfigurationError: Incompatible data or grids
  :raise BlowUpError: The 1D solve failed
  :rtype: ReferenceTrajectory
  """
  law, visc = config.pressureLaw(), config.viscosity()
  r, time = config["Reference"], config["Time"]
  if r["Nz"] % domain.nz:
    raise ConfigurationError(f"Reference resolution {r['Nz']} is not a multiple of the channel nz={domain.nz}")
  factor = r["Nz"] // domain.nz
  rho0, u0 = canonicalData(r["RhoBar"], r["B"], r["S"])
  profiles = solve1d(rho0, u0, time["TEnd"], law, visc, nz=r["Nz"], cfl=time["Cfl"],
                     sample_times=sample_times, dissipation=time["Dissipation"])
  states, rates = [], []
  for p in profiles:
    states.append(lift1d(restrictProfile(p, domain.nz), domain))
    drho, du = rhs1d(p, law, visc, time["Dissipation"])
    drho3 = np.broadcast_to(cellAverageDown(drho, factor), domain.shape).copy()
    du3 = np.zeros((3,) + domain.shape)
    du3[2] = cellAverageDown(du, factor)
    rates.append((drho3, du3))
  logger.info(f"reference trajectory: {len(states)} samples up to t={profiles[-1].t:.4e}")
  return ReferenceTrajectory(profiles, states, rates)


def dataNorm(sigma, w, domain):
  """
  Data norm :math:`\\|\\sigma\\|_{W^{1,4}} + \\|w\\|_{W^{2,2}}` of a perturbation.
  """
  return sobolevNorm(sigma, domain, 1, 4) + sobolevNorm(w, domain, 2, 2)


def _norms(normalization, domain):
  if normalization == "mm1":
    return (lambda f: sobolevNorm(f, domain, 1, 4)), (lambda f: sobolevNorm(f, domain, 2, 2))
  if normalization == "sup":
    return (lambda f: lpNorm(f, np.inf, domain)), (lambda f: lpNorm(f, np.inf, domain))
  raise ConfigurationError(f"Unknown normalization {normalization}, must be one of {NORMALIZATIONS}")


def makePerturbation(delta, mode, domain, rho0=None, density_share=0.5, normalization="mm1"):
  """
  Slip compatible trigonometric perturbation of the density and of the
  velocity. The budget ``delta`` is split between the density
  (``density_share``) and the velocity so that the combined norm
  :math:`\\|\\sigma_0\\|_{W^{1,4}} + \\|w_0\\|_{W^{2,2}}` (or the sum of the sup
  norms with ``normalization="sup"``) equals ``delta``. When a base density
  ``rho0`` is given, the density bump is capped to keep
  :math:`\\rho_0 + \\sigma_0 \\ge \\min\\rho_0 / 2` and the rest of the budget
  moves to the velocity.

  :param delta: Budget (>= 0)
  :type delta: float
  :param mode: Seed of the bumps
  :type mode: int
  :param domain: Channel
  :type domain: ThinDomain
  :param rho0: Base density on the grid
  :type rho0: numpy array
  :param density_share: Part of the budget given to the density, in [0, 1]
  :type density_share: float
  :raise ConfigurationError: Negative budget, or the whole budget goes to the density and positivity fails
  :return: ``(sigma0, w0)``
  :rtype: tuple of numpy array
  """
  if not delta >= 0.:
    raise ConfigurationError(f"Perturbation budget must be nonnegative, got {delta}")
  if not 0. <= density_share <= 1.:
    raise ConfigurationError(f"Density share must be in [0, 1], got {density_share}")
  norm_s, norm_w = _norms(normalization, domain)
  if delta == 0.:
    return np.zeros(domain.shape), np.zeros((3,) + domain.shape)
  s_hat = randomField(domain, 2 * mode).values
  w_hat = randomField(domain, 2 * mode + 1, vector=True).values
  ns, nw = norm_s(s_hat), norm_w(w_hat)
  a_s = density_share * delta / ns
  if rho0 is not None and np.any(s_hat < 0.):
    floor = 0.5 * float(np.min(rho0))
    neg = s_hat < 0.
    a_max = float(np.min((rho0[neg] - floor) / -s_hat[neg]))
    if a_s > a_max:
      if density_share == 1.:
        raise ConfigurationError(f"Density perturbation of norm {delta} breaks the positivity of the density")
      warnings.warn(f"Density perturbation capped at {a_max * ns:.3e} of a {density_share * delta:.3e} share, "
                    "the rest of the budget moves to the velocity", UserWarning)
      a_s = a_max
  a_w = (delta - a_s * ns) / nw
  return a_s * s_hat, a_w * w_hat


class RobustnessVerdict:
  """
  Outcome of a robustness run.

  :param epsilon: Scale
  :param delta: Perturbation budget
  :param omega: Threshold for the configured horizon and constant
  :param envelope_ok: :math:`E^*(t)` stays below the Gronwall envelope at every sample
  :param ceiling_ok: :math:`E^*(t)` stays below the smallness ceiling
  :param smallness_ok: The smallness flags hold at every sample
  :param first_violation_t: First sample (or blow-up) time with a violation, ``None`` if none
  :param estar_series: :math:`E^*` at the sample times
  :param residuals: Energy identity residuals (see :func:`identityResidual`)
  :param relative_residual: Largest residual over the largest dissipation
  """
  def __init__(self, epsilon, delta, omega, c_gronwall, times, estar_series, envelope_series, ceiling,
               envelope_ok, ceiling_ok, smallness_ok, first_violation_t, blow_up_t, reports, residuals,
               data_norm, c1, relative_residual=np.nan):
    self.epsilon = float(epsilon)
    self.delta = float(delta)
    self.omega = float(omega)
    self.c_gronwall = float(c_gronwall)
    self.times = np.asarray(times, dtype="f8")
    self.estar_series = np.asarray(estar_series, dtype="f8")
    self.envelope_series = np.asarray(envelope_series, dtype="f8")
    self.ceiling = float(ceiling)
    self.envelope_ok = bool(envelope_ok)
    self.ceiling_ok = bool(ceiling_ok)
    self.smallness_ok = bool(smallness_ok)
    self.first_violation_t = first_violation_t
    self.blow_up_t = blow_up_t
    self.reports = reports
    self.residuals = np.asarray(residuals, dtype="f8")
    self.relative_residual = float(relative_residual)
    self.data_norm = float(data_norm)
    self.c1 = float(c1)
    return

  def __repr__(self):
    return f"<PyThinFlow.RobustnessVerdict object, (epsilon: {self.epsilon}, delta: {self.delta}, passed: {self.passed})>"

  @property
  def passed(self):
    return self.envelope_ok and self.ceiling_ok and self.smallness_ok and self.blow_up_t is None

  def toDict(self):
    return {
      "epsilon": self.epsilon, "delta": self.delta, "omega": self.omega, "c_gronwall": self.c_gronwall,
      "ceiling": self.ceiling, "data_norm": self.data_norm, "c1": self.c1,
      "envelope_ok": self.envelope_ok, "ceiling_ok": self.ceiling_ok, "smallness_ok": self.smallness_ok,
      "passed": self.passed, "first_violation_t": self.first_violation_t, "blow_up_t": self.blow_up_t,
      "relative_residual": self.relative_residual,
      "estar_series": [float(x) for x in self.estar_series],
    }

  def table(self):
    """
    Energy functionals, envelope and identity residual per sample (DataFrame)
    """
    df = pd.DataFrame([r.toDict() for r in self.reports])
    df["envelope"] = self.envelope_series
    res = np.full(len(df), np.nan)
    res[len(df) - len(self.residuals):] = self.residuals
    df["residual"] = res
    return df

  def showVerdict(self):
    """
    Print the verdict
    """
    res = PrettyTable()
    res.field_names = ["epsilon", "delta", "omega", "C", "envelope", "ceiling", "smallness", "first violation"]
    res.add_row([self.epsilon, f"{self.delta:.3e}", f"{self.omega:.3e}", f"{self.c_gronwall:.3e}",
                 self.envelope_ok, self.ceiling_ok, self.smallness_ok,
                 "-" if self.first_violation_t is None else f"{self.first_violation_t:.4e}"])
    print(res)
    return


def robustnessRun(config, epsilon=None, delta=None, c_gronwall=None):
  """
  Perturb the lifted canonical data, evolve the reference and the perturbed
  solutions with the same time steps and check at every sample the
  smallness flags, the Gronwall envelope of :math:`E^*` and the smallness
  ceiling. A blow-up of the perturbed solution counts as a violation at
  the blow-up time.

  :param config: Configuration
  :type config: ExperimentConfig
  :param epsilon: Scale (default: configured one)
  :type epsilon: float
  :param delta: Perturbation budget (default: configured one)
  :type delta: float
  :param c_gronwall: Gronwall constant (default: configured one)
  :type c_gronwall: float
  :rtype: RobustnessVerdict
  """
  law, visc = config.pressureLaw(), config.viscosity()
  domain = config.channel(epsilon)
  eps, v = domain.epsilon, domainMetrics(domain)[1]
  time, pert = config["Time"], config["Perturbation"]
  delta = pert["Delta"] if delta is None else float(delta)
  c = config["Constants"]["CGronwall"] if c_gronwall is None else float(c_gronwall)
  kappa, cfl, every = time["Dissipation"], time["Cfl"], time["SampleEvery"]
  t_end = time["TEnd"]

  reference = initialReference(config, domain)
  sigma0, w0 = makePerturbation(delta, config.seed, domain, rho0=reference.rho, density_share=pert["DensityShare"])
  perturbed = FluidState3D(reference.rho + sigma0, reference.u + w0, 0., domain)

  reports, ref_min = [], []

  def _sample(ref, per):
    pair = PairSnapshot(ref, per, law, visc, domain, artificial=kappa)
    reports.append(energyReport(pair, law, visc, domain))
    ref_min.append(float(ref.rho.min()))

  blow_up_t = None
  with warnings.catch_warnings():
    warnings.filterwarnings("ignore", message="Second time derivatives", category=UserWarning)
    try:
      _sample(reference, perturbed)
    except BlowUpError as e:
      blow_up_t = e.t
    step = 0
    while blow_up_t is None and reference.t < t_end:
      dt = min(stableDt(reference, law, visc, domain, cfl), stableDt(perturbed, law, visc, domain, cfl))
      last = reference.t + dt >= t_end
      if last:
        dt = t_end - reference.t
      reference = step3d(reference, dt, law, visc, domain, kappa)
      try:
        perturbed = step3d(perturbed, dt, law, visc, domain, kappa)
      except BlowUpError as e:
        blow_up_t = e.t
        logger.warning(f"perturbed solution blew up at t={e.t:.4e} (min density {e.min_density:.3e})")
        break
      if last:
        reference.t = perturbed.t = t_end
      step += 1
      if last or step % every == 0:
        _sample(reference, perturbed)
  logger.info(f"robustness run epsilon={eps}, delta={delta:.3e}: {step} steps, {len(reports)} samples")

  c1 = min(ref_min) if ref_min else float(reference.rho.min())
  times = np.array([r.t for r in reports])
  estar = np.array([r.estar for r in reports])
  envelope = gronwallEnvelope(estar[0], times, eps, v, c) if len(reports) else np.array([])
  ceiling = smallnessCeiling(eps, v, config["Constants"]["CGeom"])
  noise = config["Tolerances"]["NoiseFloor"]
  env_fail = estar > envelope + noise
  ceil_fail = estar > ceiling
  small_fail = np.array([not (r.sigma_linf <= 0.5 * c1 and r.w_linf <= 1.) for r in reports], dtype=bool)
  fails = env_fail | ceil_fail | small_fail
  candidates = [float(times[np.argmax(fails)])] if np.any(fails) else []
  if blow_up_t is not None:
    candidates.append(float(blow_up_t))
  residuals = identityResidual(reports)[0] if reports else np.array([])
  rel = relativeResidual(reports, residuals) if reports else np.nan
  logger.info(f"energy identity residual: {rel:.3e} of the largest dissipation")
  return RobustnessVerdict(
    eps, delta, omegaThreshold(eps, v, t_end, c), c, times, estar, envelope, ceiling,
    envelope_ok=not np.any(env_fail) and blow_up_t is None,
    ceiling_ok=not np.any(ceil_fail) and blow_up_t is None,
    smallness_ok=not np.any(small_fail) and blow_up_t is None,
    first_violation_t=min(candidates) if candidates else None,
    blow_up_t=blow_up_t, reports=reports, residuals=residuals, relative_residual=rel,
    data_norm=dataNorm(sigma0, w0, domain), c1=c1,
  )


def calibrateGronwallConstant(config, delta=PILOT_DELTA, safety=2., epsilon=1.0):
  """
  Pilot run with a tiny perturbation: the smallest constant
  making :math:`E^*(t) \\le E^*(0)\\exp[C(\\varepsilon^{-16/5} + V^{-1/4}\\varepsilon^{-1})t]` at
  every sample, times ``safety``, floored at ``Constants.CFloor``.

  :param epsilon: Scale of the pilot channel
  :type epsilon: float
  :rtype: float
  """
  floor = config["Constants"]["CFloor"]
  verdict = robustnessRun(config, epsilon=epsilon, delta=delta, c_gronwall=floor)
  rate = growthRate(epsilon, domainMetrics(config.channel(epsilon))[1])
  t, e = verdict.times, verdict.estar_series
  c_min = 0.
  if len(e) and e[0] > 0.:
    grow = (t > 0.) & (e > e[0])
    if np.any(grow):
      c_min = float(np.max(np.log(e[grow] / e[0]) / (rate * t[grow])))
  c = max(safety * c_min, floor)
  logger.info(f"calibrated Gronwall constant C={c:.4e} (pilot minimum {c_min:.4e})")
  return c


def criticalAmplitude(decide, delta_lo, delta_hi, iters):
  """
  Bisection of the robustness boundary.

  :param decide: Configuration (robustness runs decide) or callable ``delta -> bool`` (True when the verdict passes)
  :type decide: ExperimentConfig or callable
  :param delta_lo: Passing budget
  :type delta_lo: float
  :param delta_hi: Failing budget
  :type delta_hi: float
  :param iters: Number of bisection steps
  :type iters: int
  :raise ConfigurationError: Invalid bracket
  :return: Largest passing budget found, within ``(delta_hi - delta_lo)/2**iters`` of the boundary
  :rtype: float
  """
  if callable(decide):
    passes = decide
  else:
    passes = lambda d: robustnessRun(decide, delta=d).passed
  if not delta_hi > delta_lo >= 0.:
    raise ConfigurationError(f"Invalid bracket [{delta_lo}, {delta_hi}]")
  if not passes(delta_lo):
    raise ConfigurationError(f"The lower end of the bracket delta={delta_lo} does not pass")
  if passes(delta_hi):
    raise ConfigurationError(f"The upper end of the bracket delta={delta_hi} passes")
  lo, hi = float(delta_lo), float(delta_hi)
  for k in range(int(iters)):
    mid = 0.5 * (lo + hi)
    if passes(mid):
      lo = mid
    else:
      hi = mid
    logger.info(f"bisection {k + 1}/{iters}: [{lo:.6e}, {hi:.6e}]")
  return lo


class ThinLimitTable:
  """
  Cross-sectional errors between the channel solutions and the lifted
  limit solution, one row per epsilon.
  """
  def __init__(self, rows, gamma):
    self.gamma = float(gamma)
    self.table = pd.DataFrame(rows, columns=["epsilon", "nx", "ny", "nz", "samples", "density_error", "momentum_error"])
    return

  def __repr__(self):
    return f"<PyThinFlow.ThinLimitTable object, ({len(self.table)} epsilon)>"

  @property
  def momentum_exponent(self):
    return 2. * self.gamma / (self.gamma + 1.)

  def decreasing(self):
    """
    Both error columns strictly decrease with epsilon
    """
    t = self.table.sort_values("epsilon", ascending=False)
    return bool(np.all(np.diff(t["density_error"].values) < 0.) and np.all(np.diff(t["momentum_error"].values) < 0.))

  def showTable(self):
    """
    Print the table
    """
    res = PrettyTable()
    res.field_names = ["epsilon", "grid", f"sup rho err (L^{self.gamma:g})", f"sup m err (L^{self.momentum_exponent:.4g})"]
    for _, r in self.table.iterrows():
      res.add_row([r["epsilon"], f"{r['nx']}x{r['ny']}x{r['nz']}", f"{r['density_error']:.6e}", f"{r['momentum_error']:.6e}"])
    print(res)
    return


def crossSectionErrors(state, profile, law, domain):
  """
  Cross-sectional errors :math:`|Q_\\varepsilon|^{-1}\\int |\\rho_\\varepsilon - \\rho|^\\gamma`
  and :math:`|Q_\\varepsilon|^{-1}\\int |\\rho_\\varepsilon u_\\varepsilon - \\rho u e_3|^{2\\gamma/(\\gamma+1)}`
  against a profile on the channel grid.

  :rtype: tuple
  """
  gamma = law.gamma
  lifted = lift1d(profile, domain)
  drho = np.abs(state.rho - lifted.rho)
  dm = np.sqrt(np.sum((state.momentum - lifted.momentum)**2, axis=0))
  scale = domain.cell_volume / domain.cross_section
  return float(np.sum(drho**gamma) * scale), float(np.sum(dm**(2. * gamma / (gamma + 1.))) * scale)


def _thinChannelRun(config, epsilon):
  law, visc = config.pressureLaw(), config.viscosity()
  time, pert = config["Time"], config["Perturbation"]
  domain = config.channel(epsilon)
  reference = initialReference(config, domain)
  amp = pert["Amplitude"] * epsilon**pert["Scaling"]
  sigma0, w0 = makePerturbation(amp, config.seed, domain, rho0=reference.rho,
                                density_share=pert["DensityShare"], normalization="sup")
  state = FluidState3D(reference.rho + sigma0, reference.u + w0, 0., domain)
  states = evolve3d(state, time["TEnd"], law, visc, domain, cfl=time["Cfl"], sample_every=time["SampleEvery"],
                    dissipation=time["Dissipation"])
  return domain, states


def thinlimitRun(config, threads=1):
  """
  Thin-limit study: for every epsilon of the sweep, evolve the channel
  solution from the lifted data plus a perturbation of sup norm
  ``Amplitude * epsilon**Scaling`` and compare it, at every sample, with
  the limit solution solved at the reference resolution at the same times
  and restricted to the channel grid. The errors are the suprema over the
  samples.

  :param config: Configuration with ``Geometry.EpsilonList``
  :type config: ExperimentConfig
  :param threads: Number of channel runs in parallel
  :type threads: int
  :rtype: ThinLimitTable
  """
  law, visc = config.pressureLaw(), config.viscosity()
  time, r = config["Time"], config["Reference"]
  epsilons = config.epsilons()
  nz = config["Geometry"]["Nz"]
  if r["Nz"] % nz:
    raise ConfigurationError(f"Reference resolution {r['Nz']} is not a multiple of the channel nz={nz}")
  with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
    runs = list(pool.map(lambda e: _thinChannelRun(config, e), epsilons))

  times = sorted({s.t for _, states in runs for s in states})
  rho0, u0 = canonicalData(r["RhoBar"], r["B"], r["S"])
  profiles = solve1d(rho0, u0, time["TEnd"], law, visc, nz=r["Nz"], cfl=time["Cfl"],
                     sample_times=times, dissipation=time["Dissipation"])
  coarse = {p.t: restrictProfile(p, nz) for p in profiles}

  rows = []
  for epsilon, (domain, states) in zip(epsilons, runs):
    errs = np.array([crossSectionErrors(s, coarse[s.t], law, domain) for s in states])
    rows.append([epsilon, domain.nx, domain.ny, domain.nz, len(states), float(errs[:, 0].max()), float(errs[:, 1].max())])
    logger.info(f"thin limit epsilon={epsilon}: density error {rows[-1][5]:.4e}, momentum error {rows[-1][6]:.4e}")
  return ThinLimitTable(rows, law.gamma)
