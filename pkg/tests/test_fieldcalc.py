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
import pytest

from PyThinFlow import (
  GridFunction, Profile1D, Viscosity, buildChannel, cellAverageDown, crossAvg, divStress, gradient,
  integrate, lift1d, lpNorm, normReport, sobolevNorm, slipGradient,
)
from PyThinFlow.FieldCalc import padSlip, padVector, vectorParity
from PyThinFlow.utils import ConfigurationError


def test_gradient_of_constant():
  domain = buildChannel(0.5, 3, 3, 6)
  g = gradient(np.full(domain.shape, 2.5), domain)
  assert g.components == 3
  assert np.all(g.values == 0.)


def test_gradient_exact_for_linear():
  domain = buildChannel(1.0, 3, 4, 7)
  X, Y, Z = domain.meshgrid()
  g = gradient(Z, domain).values
  np.testing.assert_allclose(g[2], 1., atol=1e-12)
  np.testing.assert_allclose(g[:2], 0., atol=1e-12)


def test_gradient_of_vector_layout():
  domain = buildChannel(1.0, 3, 3, 3)
  X, Y, Z = domain.meshgrid()
  u = np.stack([2. * Y, 3. * Z, 5. * X])
  g = gradient(u, domain).values.reshape((3, 3) + domain.shape)
  expected = np.zeros((3, 3))
  expected[0, 1], expected[1, 2], expected[2, 0] = 2., 3., 5.
  np.testing.assert_allclose(g[..., 1, 1, 1], expected, atol=1e-12)


def test_gradient_second_order():
  errors = []
  for nz in (16, 32):
    domain = buildChannel(1.0, 2, 2, nz)
    Z = domain.meshgrid()[2]
    g = gradient(np.sin(np.pi * Z), domain).values[2]
    errors.append(np.max(np.abs(g - np.pi * np.cos(np.pi * Z))))
  assert np.log2(errors[0] / errors[1]) >= 1.9


def test_lp_norm_of_constant():
  domain = buildChannel(0.5, 4, 4, 8)
  ones = np.ones(domain.shape)
  assert lpNorm(ones, 2, domain) == pytest.approx(0.5)
  assert lpNorm(ones, 4, domain) == pytest.approx(0.25**0.25)
  assert lpNorm(ones, np.inf, domain) == 1.
  assert lpNorm(ones, "inf", domain) == 1.


def test_lp_norm_of_sine():
  domain = buildChannel(1.0, 2, 2, 256)
  Z = domain.meshgrid()[2]
  assert lpNorm(np.sin(np.pi * Z), 2, domain) == pytest.approx(np.sqrt(0.5), abs=1e-4)


def test_lp_norm_of_vector():
  domain = buildChannel(1.0, 2, 2, 2)
  u = np.zeros((3,) + domain.shape)
  u[0], u[1] = 3., 4.
  assert lpNorm(u, np.inf, domain) == pytest.approx(5.)
  assert lpNorm(GridFunction(u, domain), 1, domain) == pytest.approx(5.)


def test_unsupported_exponent():
  domain = buildChannel(1.0, 2, 2, 2)
  with pytest.raises(ConfigurationError):
    lpNorm(np.ones(domain.shape), 3, domain)


def test_integrate_and_sobolev():
  domain = buildChannel(0.5, 2, 2, 4)
  np.testing.assert_allclose(integrate(np.ones((3,) + domain.shape), domain), [0.25] * 3)
  assert sobolevNorm(np.full(domain.shape, 2.), domain, 1, 2) == pytest.approx(1.)
  assert sobolevNorm(np.full(domain.shape, 2.), domain, 2, np.inf) == pytest.approx(2.)


def test_norm_report(capsys):
  domain = buildChannel(0.5, 2, 2, 4)
  report = normReport(np.ones(domain.shape), domain)
  assert report[2] == pytest.approx(0.5)
  assert report.grad_lp[np.inf] == 0.
  report.show()
  assert "||f||_p" in capsys.readouterr().out


def test_cross_average():
  domain = buildChannel(0.5, 16, 16, 4)
  X, Y, Z = domain.meshgrid()
  np.testing.assert_allclose(crossAvg(np.full(domain.shape, 3.), domain), 3.)
  np.testing.assert_allclose(crossAvg(Z**2, domain), domain.cellCenters()[2]**2, rtol=1e-14)
  assert np.max(np.abs(crossAvg(np.sin(2. * np.pi * X / domain.epsilon), domain))) <= 1e-3
  assert crossAvg(np.ones((3,) + domain.shape), domain).shape == (3, 4)


def test_cell_average_down():
  np.testing.assert_allclose(cellAverageDown([1., 3., 5., 7.], 2), [2., 6.])
  with pytest.raises(ConfigurationError):
    cellAverageDown([1., 3., 5., 7.], 3)


def test_lift1d():
  domain = buildChannel(0.5, 2, 3, 8)
  z = domain.cellCenters()[2]
  state = lift1d(Profile1D(np.ones(8), np.sin(np.pi * z), 0.25), domain)
  assert state.t == 0.25
  assert np.all(state.rho == 1.)
  assert np.all(state.u[:2] == 0.)
  np.testing.assert_allclose(state.u[2, 1, 2], np.sin(np.pi * z))
  with pytest.raises(ConfigurationError):
    lift1d(Profile1D(np.ones(4), np.zeros(4), 0.), domain)


def test_pad_slip():
  np.testing.assert_allclose(padSlip([1., 2., 3.], (-1,)), [-2., -1., 1., 2., 3., -3., -2.])
  np.testing.assert_allclose(padSlip([1., 2., 3.], (1,)), [2., 1., 1., 2., 3., 3., 2.])
  assert vectorParity(1) == (1, -1, 1)
  assert padVector(np.ones((3, 2, 2, 2))).shape == (3, 6, 6, 6)


def test_slip_gradient_shapes():
  domain = buildChannel(0.5, 2, 3, 4)
  assert slipGradient(np.ones(domain.shape), domain).shape == (3,) + domain.shape
  assert slipGradient(np.ones((3,) + domain.shape), domain).shape == (9,) + domain.shape
  assert np.all(slipGradient(np.ones(domain.shape), domain) == 0.)


def test_div_stress_symmetric(rng):
  visc = Viscosity(0.7, 0.4)
  spacing = (0.3, 0.2, 0.1)
  u, v = rng.standard_normal((2, 3, 4, 3, 5))
  lhs = np.sum(u * divStress(v, visc, spacing))
  rhs = np.sum(divStress(u, visc, spacing) * v)
  assert lhs == pytest.approx(rhs, rel=1e-10)
  assert np.sum(u * divStress(u, visc, spacing)) < 0.


def test_div_stress_1d_uses_effective_viscosity(rng):
  visc = Viscosity(0.3, 0.2)
  u = rng.standard_normal((1, 10))
  h = 0.1
  P = padSlip(u[0], (-1,))
  expected = visc.nu * (P[3:-1] - 2. * P[2:-2] + P[1:-3]) / h**2
  np.testing.assert_allclose(divStress(u, visc, (h,))[0], expected, rtol=1e-12)
