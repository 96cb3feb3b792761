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
import pandas as pd
import pytest

from PyThinFlow import (
  GridFunction, RatioSample, ThinDomain, Viscosity, buildScaledBox, checkSobolevExponents, fitEpsilonExponent,
  gnRatio, inequalitySuite, kornRatio, lameEstimateRatio, lameKernel, lameSolve, manufacturedLamePair,
  poincareRatio, randomField, sobolevRatio,
)
from PyThinFlow.utils import ConfigurationError, NumericalError


def test_korn_constant_vector():
  box = buildScaledBox(0.5, 4)
  v = np.ones((3,) + box.shape) * np.array([1., 2., 3.])[:, None, None, None]
  sample = kornRatio(v, box)
  assert sample.kind == "korn"
  assert sample.lhs == 0.
  assert sample.ratio == 0.


def test_zero_field_is_degenerate():
  box = buildScaledBox(0.5, 4)
  with pytest.warns(UserWarning, match="Degenerate"):
    sample = kornRatio(np.zeros((3,) + box.shape), box)
  assert sample.degenerate
  assert np.isnan(sample.ratio)


def test_poincare_linear_profile():
  domain = ThinDomain(1.0, 2, 2, 64)
  Z = domain.meshgrid()[2]
  sample = poincareRatio(Z - 0.5, 2, domain)
  assert sample.kind == "poincare_p2"
  assert sample.lhs == pytest.approx(np.sqrt(1. / 12.), rel=1e-3)
  assert sample.rhs == pytest.approx(np.sqrt(3.), rel=1e-12)
  assert sample.ratio == pytest.approx(1. / (np.sqrt(12.) * np.sqrt(3.)), rel=1e-3)


def test_poincare_constant():
  box = buildScaledBox(0.25, 4)
  with pytest.warns(UserWarning):
    sample = poincareRatio(np.full(box.shape, 3.), 4, box)
  assert sample.lhs == pytest.approx(0., abs=1e-14)


@pytest.mark.parametrize("p, q", [(2, 6), (2, 2), (2, 4), (4, np.inf), (1, 1)])
def test_admissible_exponents(p, q):
  checkSobolevExponents(p, q)


@pytest.mark.parametrize("p, q", [(2, 12), (2, np.inf), (4, 6), (2, 1)])
def test_inadmissible_exponents(p, q):
  with pytest.raises(ConfigurationError):
    checkSobolevExponents(p, q)
  box = buildScaledBox(1.0, 4)
  with pytest.raises(ConfigurationError):
    sobolevRatio(np.ones(box.shape), p, q, box)


@pytest.mark.parametrize("epsilon", [1.0, 0.5, 0.125])
def test_sobolev_constant_is_scale_invariant(epsilon):
  box = buildScaledBox(epsilon, 4)
  sample = sobolevRatio(np.full(box.shape, 2.), 2, 6, box)
  assert sample.kind == "sobolev_p2_q6"
  assert sample.ratio == pytest.approx(1., rel=1e-12)


def test_gn_constant():
  domain = ThinDomain(1.0, 4, 4, 4, lz=2.0)
  sample = gnRatio(np.full(domain.shape, 3.), domain)
  assert sample.ratio == pytest.approx(2.**-0.25, rel=1e-12)
  with pytest.warns(UserWarning):
    assert gnRatio(np.zeros(domain.shape), domain).degenerate


def test_random_field():
  box = buildScaledBox(0.5, 4)
  a, b = randomField(box, 7), randomField(box, 7)
  np.testing.assert_array_equal(a.values, b.values)
  assert a.field_id == 7
  assert not np.allclose(a.values, randomField(box, 8).values)
  assert randomField(box, 7, vector=True).components == 3


def test_lame_kernel_empty_on_box():
  assert lameKernel(Viscosity(1., 0.), buildScaledBox(0.5, 4)) == []


def test_lame_zero_load():
  box = buildScaledBox(0.5, 4)
  w = lameSolve(GridFunction(np.zeros((3,) + box.shape), box), Viscosity(1., 0.), box, tol=0.)
  assert np.all(w.values == 0.)


def test_lame_recovers_manufactured_field():
  box = buildScaledBox(1.0, 6)
  visc = Viscosity(1., 0.5)
  w_star, g = manufacturedLamePair(box, visc, seed=3)
  w = lameSolve(g, visc, box, tol=1e-10 * np.linalg.norm(g.values))
  np.testing.assert_allclose(w.values, w_star.values, atol=1e-6 * np.max(np.abs(w_star.values)))


def test_lame_non_convergence():
  box = buildScaledBox(1.0, 6)
  visc = Viscosity(1., 0.)
  _, g = manufacturedLamePair(box, visc, seed=0)
  with pytest.raises(NumericalError, match="did not converge"):
    lameSolve(g, visc, box, tol=1e-30, maxiter=10)


def test_lame_estimate_ratio():
  box = buildScaledBox(0.5, 4)
  visc = Viscosity(1., 0.)
  w, g = manufacturedLamePair(box, visc, seed=1)
  kinds = [lameEstimateRatio(w, g, box, p).kind for p in (2, 4)]
  assert kinds == ["lame_p2", "lame_p4"]
  zero = np.zeros((3,) + box.shape)
  with pytest.warns(UserWarning):
    assert lameEstimateRatio(zero, zero, box, 2).degenerate


def test_fit_exact_exponent():
  samples = [RatioSample("synthetic", e, 0, e**0.75, 1.) for e in (1., 0.5, 0.25, 0.125)]
  assert fitEpsilonExponent(samples) == pytest.approx(0.75, abs=1e-10)
  with pytest.raises(ConfigurationError):
    fitEpsilonExponent(samples[:1])
  with pytest.raises(ConfigurationError):
    fitEpsilonExponent(samples[:2])


def test_unscaled_sobolev_exponent():
  samples = []
  for epsilon in (1., 0.5, 0.25):
    box = buildScaledBox(epsilon, 4)
    samples += [sobolevRatio(randomField(box, seed), 2, 6, box, scaled=False) for seed in range(3)]
  assert samples[0].kind == "sobolev_p2_q6_unscaled"
  assert fitEpsilonExponent(samples) == pytest.approx(-1., abs=0.3)


def test_inequality_suite():
  report = inequalitySuite([1., 0.5, 0.25], n=4, n_fields=3, n_lame=1)
  assert list(report.table.columns) == ["inequality", "epsilon", "seed", "lhs", "rhs", "ratio"]
  assert set(report.kinds()) == {
    "korn", "poincare_p2", "poincare_p4", "sobolev_p2_q6", "sobolev_p2_q6_unscaled", "sobolev_p4_qinf",
    "gn", "lame_p2", "lame_p4",
  }
  uniformity = report.uniformity()
  assert "sobolev_p2_q6_unscaled" not in uniformity
  assert report.passed()
  assert report.exponents()["sobolev_p2_q6_unscaled"] == pytest.approx(-1., abs=0.3)
  assert report.exponents()["korn"] == pytest.approx(0., abs=1e-6)


def test_korn_poincare_lame_uniform_over_epsilon():
  epsilons = [1., 0.5, 0.25, 0.125]
  report = inequalitySuite(epsilons, n=4, n_fields=100, n_lame=3)
  counts = report.table.groupby(["inequality", "epsilon"]).size()
  for kind, n_samples in (("korn", 100), ("poincare_p2", 100), ("poincare_p4", 100), ("lame_p4", 3)):
    assert [counts[(kind, e)] for e in epsilons] == [n_samples] * 4
  best = report.maxRatios()
  for kind, rtol in (("korn", 1e-10), ("poincare_p2", 1e-10), ("poincare_p4", 1e-10), ("lame_p4", 1e-6)):
    ratios = best[kind]
    assert np.all(np.isfinite(ratios)) and np.all(ratios > 0.)
    assert np.all(ratios <= 2. * ratios[1.])
    # scaled boxes carry the same grid values, the scaled ratios do not move
    np.testing.assert_allclose(ratios.values, ratios[1.], rtol=rtol)
  uniformity = report.uniformity()
  assert all(uniformity[kind]["uniform"] for kind in ("korn", "poincare_p2", "poincare_p4", "lame_p4"))


def test_inequality_suite_threads():
  single = inequalitySuite([0.5, 0.25], n=4, n_fields=2, n_lame=1, threads=1)
  pooled = inequalitySuite([0.5, 0.25], n=4, n_fields=2, n_lame=1, threads=2)
  pd.testing.assert_frame_equal(single.table, pooled.table)


def test_show_report(capsys):
  report = inequalitySuite([0.5, 0.25], n=4, n_fields=2, n_lame=0)
  report.showReport()
  assert "korn" in capsys.readouterr().out
