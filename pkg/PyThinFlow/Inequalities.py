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
from scipy.sparse.linalg import LinearOperator, cg

from .FieldCalc import _values, divStress, gradient, integrate, lpNorm
from .Geometry import GridFunction, buildScaledBox
from .Physics import Viscosity, dissipationDensity
from .utils import ConfigurationError, NumericalError

logger = logging.getLogger(__name__)

MODES = 3
LAME_TOL = 1e-10
LAME_RTOL = 1e-9
LAME_MAXITER = 5000
SAFETY = 2.


class RatioSample:
  """
  Measured left and right hand sides of an inequality for one field.

  :param kind: Inequality name (``korn``, ``poincare``, ``sobolev``, ...)
  :type kind: str
  :param epsilon: Scale of the domain
  :type epsilon: float
  :param field_id: Seed or description of the sampled field
  :type field_id: str
  :param lhs: Left hand side
  :type lhs: float
  :param rhs: Right hand side
  :type rhs: float
  """
  def __init__(self, kind, epsilon, field_id, lhs, rhs):
    self.kind = kind
    self.epsilon = float(epsilon)
    self.field_id = str(field_id)
    self.lhs = float(lhs)
    self.rhs = float(rhs)
    self.degenerate = not self.rhs > 0.
    if self.degenerate:
      self.ratio = np.nan
      warnings.warn(f"Degenerate {kind} sample (field {field_id}, epsilon={epsilon}): rhs = {rhs}", UserWarning)
    else:
      self.ratio = self.lhs / self.rhs
    if not self.degenerate and not np.isfinite(self.ratio):
      raise NumericalError(f"Non finite {kind} ratio for field {field_id}")
    return

  def __repr__(self):
    return f"<PyThinFlow.RatioSample object, ({self.kind}, epsilon: {self.epsilon}, ratio: {self.ratio})>"

  def toDict(self):
    return {
      "inequality": self.kind, "epsilon": self.epsilon, "seed": self.field_id,
      "lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
    }


def randomField(domain, seed, vector=False, modes=MODES):
  """
  Random trigonometric polynomial with at most ``modes`` modes per direction
  compatible with the slip parities: cosines for a scalar field; for the
  component ``i`` of a vector field sines along axis ``i`` and cosines along
  the others. Coefficients decay like :math:`1/(1+|k|^2)`.

  :param domain: Domain
  :type domain: ThinDomain
  :param seed: Seed of the generator
  :type seed: int
  :param vector: Build a vector field instead of a scalar one
  :type vector: bool
  :rtype: GridFunction
  """
  rng = np.random.default_rng(seed)
  X = domain.meshgrid()
  kx = [np.pi / l for l in domain.extents]

  def _component(odd_axis):
    out = np.zeros(domain.shape)
    for k in np.ndindex(modes, modes, modes):
      k = tuple(k[a] + 1 if a == odd_axis else k[a] for a in range(3))
      amp = rng.standard_normal() / (1. + sum(m * m for m in k))
      term = amp * np.ones(domain.shape)
      for a in range(3):
        term = term * (np.sin(k[a] * kx[a] * X[a]) if a == odd_axis else np.cos(k[a] * kx[a] * X[a]))
      out += term
    return out

  if vector:
    field = GridFunction(np.stack([_component(i) for i in range(3)]), domain)
  else:
    field = GridFunction(_component(None), domain)
  field.field_id = seed
  return field


def kornRatio(v, domain, visc=None):
  """
  Korn ratio :math:`\\varepsilon^2\\int|\\nabla v|^2 / (\\int |v|^2 + \\varepsilon^2 \\int S(\\nabla v):\\nabla v)`.
  The stress uses :math:`\\mu = 1, \\eta = 0` unless ``visc`` is given.

  :rtype: RatioSample
  """
  visc = visc or Viscosity(1., 0.)
  eps = domain.epsilon
  values = _values(v)
  grad = gradient(values, domain).values
  lhs = eps**2 * lpNorm(grad, 2, domain)**2
  diss = integrate(dissipationDensity(grad.reshape((3, 3) + domain.shape), visc), domain)
  rhs = lpNorm(values, 2, domain)**2 + eps**2 * float(diss)
  return RatioSample("korn", eps, getattr(v, "field_id", "-"), lhs, rhs)


def poincareRatio(v, p, domain):
  """
  Poincare ratio :math:`\\|v - \\bar v\\|_{L^p} / (d \\|\\nabla v\\|_{L^p})`
  with :math:`\\bar v` the mean value of ``v``.

  :rtype: RatioSample
  """
  values = _values(v)
  mean = float(integrate(values, domain)) / domain.v
  lhs = lpNorm(values - mean, p, domain)
  rhs = domain.d * lpNorm(gradient(values, domain), p, domain)
  return RatioSample(f"poincare_p{p}", domain.epsilon, getattr(v, "field_id", "-"), lhs, rhs)


def checkSobolevExponents(p, q):
  """
  Admissible pairs: :math:`p < 3, p \\le q \\le 3p/(3-p)`, or :math:`p > 3, q = \\infty`.

  :raise ConfigurationError: Inadmissible pair
  """
  if q == np.inf:
    if p > 3:
      return
    raise ConfigurationError(f"The L-infinity embedding needs p > 3, got p={p}")
  if p < 3 and p <= q <= 3. * p / (3. - p):
    return
  raise ConfigurationError(f"Inadmissible Sobolev exponents (p={p}, q={q})")


def sobolevRatio(v, p, q, domain, scaled=True):
  """
  Scaled Sobolev ratio :math:`\\|v\\|_{L^q} / (\\varepsilon^{3(1/q - 1/p)} (\\|v\\|_{L^p} + \\varepsilon \\|\\nabla v\\|_{L^p}))`.
  With ``scaled=False`` the :math:`\\varepsilon` prefactor is left out (used
  to fit the exponent).

  :raise ConfigurationError: Inadmissible exponents
  :rtype: RatioSample
  """
  checkSobolevExponents(p, q)
  eps = domain.epsilon
  values = _values(v)
  rhs = lpNorm(values, p, domain) + eps * lpNorm(gradient(values, domain), p, domain)
  if scaled:
    rhs *= eps**(3. * ((0. if q == np.inf else 1. / q) - 1. / p))
  kind = f"sobolev_p{p}_q{q}" + ("" if scaled else "_unscaled")
  return RatioSample(kind, eps, getattr(v, "field_id", "-"), lpNorm(values, q, domain), rhs)


def gnRatio(v, domain):
  """
  Interpolation ratio :math:`\\|v\\|_{L^4} / (\\varepsilon^{-3/4} \\|v\\|_2^{1/4} (\\varepsilon^2 \\|\\nabla v\\|_2^2 + \\|v\\|_2^2)^{3/8})`.

  :rtype: RatioSample
  """
  eps = domain.epsilon
  values = _values(v)
  l2sq = lpNorm(values, 2, domain)**2
  rhs = eps**(-0.75) * l2sq**0.125 * (eps**2 * lpNorm(gradient(values, domain), 2, domain)**2 + l2sq)**0.375
  return RatioSample("gn", eps, getattr(v, "field_id", "-"), lpNorm(values, 4, domain), rhs)


def lameOperator(w, visc, domain):
  """
  Discrete Lame operator :math:`-{\\rm div}\\, S(\\nabla w)` with slip
  conditions. Symmetric positive definite on a box.
  """
  return -divStress(_values(w), visc, domain.spacing)


def lameKernel(visc, domain, tol=1e-12):
  """
  Orthonormal basis (Euclidean) of the constant vector fields annihilated
  by the Lame operator. Every constant field has a nonzero normal trace on
  some face of a box, so the basis is empty there.

  :rtype: list of numpy array
  """
  basis = []
  for i in range(3):
    e = np.zeros((3,) + domain.shape)
    e[i] = 1.
    if np.linalg.norm(lameOperator(e, visc, domain)) <= tol * np.linalg.norm(e):
      basis.append(e / np.linalg.norm(e))
  return basis


def _project(x, basis):
  for e in basis:
    x = x - np.sum(x * e) * e
  return x


def lameSolve(g, visc, domain, tol=LAME_TOL, maxiter=LAME_MAXITER):
  """
  Solve the Lame system :math:`-{\\rm div}\\, S(\\nabla w) = g` with slip
  conditions by conjugate gradients. The load and the solution are projected
  on the orthogonal complement of the operator kernel.

  :param g: Load
  :type g: GridFunction
  :param visc: Viscosities
  :type visc: Viscosity
  :param domain: Domain
  :type domain: ThinDomain
  :param tol: Bound on the Euclidean norm of the final residual
  :type tol: float
  :param maxiter: Iteration budget
  :type maxiter: int
  :raise NumericalError: No convergence within the budget
  :rtype: GridFunction
  """
  shape = (3,) + domain.shape
  basis = lameKernel(visc, domain)
  b = _project(_values(g), basis).ravel()
  size = b.size
  niter = [0]

  def _matvec(x):
    return lameOperator(x.reshape(shape), visc, domain).ravel()

  def _count(xk):
    niter[0] += 1

  op = LinearOperator((size, size), matvec=_matvec, dtype="f8")
  x, info = cg(op, b, rtol=0., atol=tol, maxiter=maxiter, callback=_count)
  residual = float(np.linalg.norm(b - _matvec(x)))
  if info != 0 or residual > tol:
    raise NumericalError(f"Lame solve did not converge in {niter[0]} iterations (residual {residual:.3e}, tol {tol:.1e})")
  logger.debug(f"Lame solve converged in {niter[0]} iterations, residual {residual:.3e}")
  return GridFunction(_project(x.reshape(shape), basis), domain)


def manufacturedLamePair(domain, visc, seed):
  """
  Slip compatible random field :math:`w^*` with its discrete load
  :math:`g = -{\\rm div}\\, S(\\nabla w^*)`.

  :return: ``(w, g)``
  :rtype: tuple of GridFunction
  """
  w = randomField(domain, seed, vector=True)
  return w, GridFunction(lameOperator(w, visc, domain), domain)


def lameEstimateRatio(w, g, domain, p):
  """
  Elliptic estimate ratio :math:`\\varepsilon^2\\|\\nabla^2 w\\|_{L^p} / (\\varepsilon^2 \\|g\\|_{L^p} + \\|w\\|_{L^p})`.

  :rtype: RatioSample
  """
  eps = domain.epsilon
  hess = gradient(gradient(w, domain), domain)
  lhs = eps**2 * lpNorm(hess, p, domain)
  rhs = eps**2 * lpNorm(g, p, domain) + lpNorm(w, p, domain)
  return RatioSample(f"lame_p{p}", eps, getattr(w, "field_id", "-"), lhs, rhs)


def fitEpsilonExponent(samples):
  """
  Least-squares slope of :math:`\\log(\\max {\\rm ratio})` against
  :math:`\\log\\varepsilon`, the maximum being taken per value of
  :math:`\\varepsilon`. Degenerate samples are ignored.

  :param samples: Samples of one inequality
  :type samples: list of RatioSample
  :raise ConfigurationError: Less than 3 distinct epsilon or nonpositive ratios
  :rtype: float
  """
  best = {}
  for s in samples:
    if s.degenerate:
      continue
    best[s.epsilon] = max(best.get(s.epsilon, -np.inf), s.ratio)
  if len(best) < 3:
    raise ConfigurationError(f"Fitting an epsilon exponent needs at least 3 distinct epsilon values, got {len(best)}")
  eps = np.array(sorted(best))
  ratios = np.array([best[e] for e in eps])
  if np.any(ratios <= 0.):
    raise ConfigurationError("Fitting an epsilon exponent needs positive ratios")
  return float(np.polyfit(np.log(eps), np.log(ratios), 1)[0])


def _sampleEpsilon(epsilon, n, seeds, lame_seeds, visc, rtol, maxiter):
  domain = buildScaledBox(epsilon, n)
  out = []
  for seed in seeds:
    v = randomField(domain, seed)
    vec = randomField(domain, seed, vector=True)
    out.append(kornRatio(vec, domain))
    for p in (2, 4):
      out.append(poincareRatio(v, p, domain))
    out.append(sobolevRatio(v, 2, 6, domain))
    out.append(sobolevRatio(v, 2, 6, domain, scaled=False))
    out.append(sobolevRatio(v, 4, np.inf, domain))
    out.append(gnRatio(v, domain))
  for seed in lame_seeds:
    w, g = manufacturedLamePair(domain, visc, seed)
    w = lameSolve(g, visc, domain, tol=rtol * float(np.linalg.norm(g.values)), maxiter=maxiter)
    w.field_id = seed
    for p in (2, 4):
      out.append(lameEstimateRatio(w, g, domain, p))
  logger.info(f"epsilon={epsilon}: {len(out)} inequality samples")
  return out


class InequalityReport:
  """
  Samples of the inequality suite with their summary: maximal ratio per
  inequality, uniformity of the constants across epsilon (relative to the
  largest epsilon, times a safety factor) and fitted epsilon exponents of
  the unscaled families.

  :param samples: All samples
  :type samples: list of RatioSample
  """
  def __init__(self, samples, safety=SAFETY):
    self.samples = samples
    self.safety = safety
    self.table = pd.DataFrame([s.toDict() for s in samples],
                              columns=["inequality", "epsilon", "seed", "lhs", "rhs", "ratio"])
    return

  def __repr__(self):
    return f"<PyThinFlow.InequalityReport object, ({len(self.samples)} samples)>"

  def kinds(self):
    return list(dict.fromkeys(s.kind for s in self.samples))

  def maxRatios(self):
    """
    Maximal ratio per inequality and epsilon (DataFrame, epsilon as index)
    """
    return self.table.pivot_table(index="epsilon", columns="inequality", values="ratio", aggfunc="max")

  def uniformity(self):
    """
    For each scaled inequality, the calibrated constant (maximal ratio at
    the largest epsilon times the safety factor), the maximal ratio over
    all epsilon and whether the latter stays below the former.

    :rtype: dict
    """
    res = {}
    table = self.maxRatios()
    eps_ref = table.index.max()
    for kind in table.columns:
      if kind.endswith("_unscaled"):
        continue
      c_meas = float(self.safety * table.loc[eps_ref, kind])
      worst = float(table[kind].max())
      res[kind] = {"c_meas": c_meas, "max_ratio": worst, "uniform": bool(worst <= c_meas)}
    return res

  def exponents(self):
    """
    Fitted epsilon exponents of every inequality sampled at 3 epsilon or more.
    """
    res = {}
    for kind in self.kinds():
      subset = [s for s in self.samples if s.kind == kind]
      if len({s.epsilon for s in subset}) >= 3:
        res[kind] = fitEpsilonExponent(subset)
    return res

  def summary(self):
    return {"uniformity": self.uniformity(), "exponents": self.exponents()}

  def passed(self):
    return all(v["uniform"] for v in self.uniformity().values())

  def showReport(self):
    """
    Print the uniformity table and the fitted exponents
    """
    exps = self.exponents()
    res = PrettyTable()
    res.field_names = ["Inequality", "C meas", "max ratio", "Uniform", "Exponent"]
    for kind, v in self.uniformity().items():
      res.add_row([kind, f"{v['c_meas']:.4e}", f"{v['max_ratio']:.4e}", v["uniform"],
                   f"{exps[kind]:.3f}" if kind in exps else "-"])
    for kind, e in exps.items():
      if kind.endswith("_unscaled"):
        res.add_row([kind, "-", "-", "-", f"{e:.3f}"])
    print(res)
    return


def inequalitySuite(epsilons, n=8, n_fields=100, n_lame=3, seed=0, visc=None, threads=1, rtol=LAME_RTOL,
                    maxiter=LAME_MAXITER):
  """
  Sample every inequality over random fields on the scaled boxes
  :math:`\\varepsilon(0,1)^3`. The same seeds, hence the same rescaled
  fields, are used for every epsilon.

  :param epsilons: Scales to sample
  :type epsilons: list
  :param n: Cells per direction
  :type n: int
  :param n_fields: Number of random fields per epsilon
  :type n_fields: int
  :param n_lame: Number of manufactured Lame pairs per epsilon
  :type n_lame: int
  :param seed: First seed
  :type seed: int
  :param threads: Number of worker threads over epsilon
  :type threads: int
  :param rtol: Lame residual bound relative to the Euclidean norm of the load
  :type rtol: float
  :param maxiter: Conjugate gradient budget per Lame solve
  :type maxiter: int
  :rtype: InequalityReport
  """
  visc = visc or Viscosity(1., 0.)
  seeds = list(range(seed, seed + n_fields))
  lame_seeds = list(range(seed, seed + n_lame))
  with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
    chunks = list(pool.map(lambda e: _sampleEpsilon(e, n, seeds, lame_seeds, visc, rtol, maxiter), epsilons))
  return InequalityReport([s for chunk in chunks for s in chunk])
