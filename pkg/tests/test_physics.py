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
  PressureLaw, Viscosity, dissipationDensity, potentialH, potentialHPrime, pressure, pressurePrime,
  quadraticEquivalence, relentIntegrand, soundSpeed, stress,
)
from PyThinFlow.utils import ConfigurationError, DomainError


def test_pressure(law):
  assert pressure(0., law) == 0.
  assert pressure(3., law) == pytest.approx(9.)
  assert pressurePrime(3., law) == pytest.approx(6.)
  assert soundSpeed(1., law) == pytest.approx(np.sqrt(2.))
  with pytest.raises(DomainError):
    pressure(-1., law)


def test_pressure_arrays(law):
  rho = np.array([0.5, 1., 2.])
  np.testing.assert_allclose(law.p(rho), rho**2)
  np.testing.assert_allclose(law.dp(rho), 2. * rho)


def test_pressure_prime_needs_positive_density():
  law = PressureLaw(1., 1.4)
  with pytest.raises(DomainError):
    pressurePrime(0., law)
  assert pressurePrime(0., PressureLaw(1., 2.)) == 0.


def test_potential(law):
  assert potentialH(2., law) == pytest.approx(4.)
  assert potentialHPrime(2., law) * 2. - potentialH(2., law) == pytest.approx(pressure(2., law))
  assert potentialH(0., law) == 0.
  assert potentialH(1., PressureLaw(2., 1.4)) == pytest.approx(5.)


def test_potential_identity_random(rng):
  law = PressureLaw(1.7, 1.4)
  rho = rng.uniform(0.1, 3., 50)
  np.testing.assert_allclose(law.dH(rho) * rho - law.H(rho), law.p(rho), rtol=1e-12)


def test_relent(law):
  assert relentIntegrand(1.3, 1.3, law) == 0.
  assert relentIntegrand(2., 1., law) == pytest.approx(1.)
  assert relentIntegrand(0.5, 1., law) == pytest.approx(0.25)
  with pytest.raises(DomainError):
    relentIntegrand(1., 0., law)


def test_relent_nonnegative(rng):
  law = PressureLaw(1., 1.4)
  rho, r = rng.uniform(0., 3., 200), rng.uniform(0.1, 3., 200)
  assert np.all(relentIntegrand(rho, r, law) >= 0.)


def test_stress():
  assert np.all(stress(np.zeros((3, 3)), Viscosity(1., 0.)) == 0.)
  np.testing.assert_allclose(stress(np.eye(3), Viscosity(1., 0.)), np.zeros((3, 3)), atol=1e-15)
  np.testing.assert_allclose(stress(np.eye(3), Viscosity(1., 2.)), 6. * np.eye(3))
  with pytest.raises(ConfigurationError):
    stress(np.zeros((2, 2)), Viscosity())


def test_stress_symmetric_and_dissipative(rng):
  g = rng.standard_normal((3, 3, 5))
  visc = Viscosity(0.7, 0.3)
  s = stress(g, visc)
  np.testing.assert_allclose(s, np.swapaxes(s, 0, 1))
  assert np.all(dissipationDensity(g, visc) >= 0.)


def test_viscosity():
  visc = Viscosity(3., 1.)
  assert visc.nu == pytest.approx(5.)
  assert visc.lame == pytest.approx(2.)
  with pytest.raises(ConfigurationError):
    Viscosity(0.)
  with pytest.raises(ConfigurationError):
    Viscosity(1., -1.)
  with pytest.raises(ConfigurationError):
    PressureLaw(1., 1.)
  with pytest.raises(ConfigurationError):
    PressureLaw(0., 2.)


def test_quadratic_equivalence(law):
  # gamma = 2: the relative entropy is exactly (rho - r)^2
  c1, c2 = quadraticEquivalence(law, (0.5, 1.5), (0.8, 1.2))
  assert c1 == pytest.approx(1., rel=1e-9)
  assert c2 == pytest.approx(1., rel=1e-9)


def test_quadratic_equivalence_close_pairs(law):
  c1, c2 = quadraticEquivalence(law, (0.85, 1.15), (0.9, 1.1))
  assert c1 == pytest.approx(1., rel=1e-9)
  assert c2 == pytest.approx(1., rel=1e-9)
  # H''(1) / 2 = a gamma / 2 near the diagonal
  c1, c2 = quadraticEquivalence(PressureLaw(1., 1.4), (0.999, 1.001), (0.9995, 1.0005))
  assert c1 == pytest.approx(0.7, rel=1e-3)
  assert c2 == pytest.approx(0.7, rel=1e-3)


def test_quadratic_equivalence_bounds(rng):
  law = PressureLaw(1., 1.4)
  c1, c2 = quadraticEquivalence(law, (0.5, 1.5), (0.8, 1.2))
  assert 0. < c1 <= c2
  rho, r = rng.uniform(0.5, 1.5, 100), rng.uniform(0.8, 1.2, 100)
  keep = np.abs(rho - r) > 1e-3
  rho, r = rho[keep], r[keep]
  val = relentIntegrand(rho, r, law)
  assert np.all(val >= 0.99 * c1 * (rho - r)**2)
  assert np.all(val <= 1.01 * c2 * (rho - r)**2)
