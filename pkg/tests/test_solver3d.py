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
  FluidState3D, PressureLaw, Profile1D, ThinDomain, Viscosity, applySlipBC, buildChannel, canonicalData,
  evolve3d, lift1d, manufacturedSolution3d, rhs1d, rhs3d, slipResidual, solve1d, stableDt, step3d,
  totalEnergy, totalMass, uniformState,
)
from PyThinFlow.utils import BlowUpError, ConfigurationError


def _lifted(domain, b=0.1, s=0.1):
  rho0, u0 = canonicalData(1., b, s)
  z = domain.cellCenters()[2]
  return lift1d(Profile1D(rho0(z), u0(z), 0.), domain)


def test_state_access(channel):
  state = uniformState(channel, 2.)
  assert state["Rho"].shape == channel.shape
  assert state["T"] == 0.
  assert np.all(state.momentum == 0.)
  with pytest.raises(KeyError):
    state["P"]
  with pytest.raises(ConfigurationError):
    FluidState3D(np.ones((2, 2, 2)), np.zeros((2, 2, 2, 2)), 0.)


def test_uniform_state_is_equilibrium(channel, law, visc):
  drho, du = rhs3d(uniformState(channel), law, visc, channel)
  np.testing.assert_allclose(drho, 0., atol=1e-14)
  np.testing.assert_allclose(du, 0., atol=1e-14)


def test_uniform_state_unchanged_by_step(channel, law, visc):
  state = uniformState(channel, 1.3)
  new = step3d(state, 0.1, law, visc, channel)
  assert new.t == pytest.approx(0.1)
  np.testing.assert_allclose(new.rho, 1.3, atol=1e-14)
  np.testing.assert_allclose(new.u, 0., atol=1e-14)


def test_equilibrium_at_rest_for_1000_steps(law, visc):
  domain = buildChannel(0.5, 2, 2, 16)
  state = uniformState(domain, 1.3)
  mass = totalMass(state, domain)
  dt = stableDt(state, law, visc, domain)
  for _ in range(1000):
    state = step3d(state, dt, law, visc, domain)
  assert state.t == pytest.approx(1000 * dt)
  assert np.all(state.u == 0.)
  assert np.all(state.rho == 1.3)
  assert totalMass(state, domain) == pytest.approx(mass, rel=1e-14)


def test_mass_conserved_over_1000_steps(law, visc):
  domain = buildChannel(0.5, 2, 2, 16)
  state = _lifted(domain)
  mass = totalMass(state, domain)
  for _ in range(1000):
    state = step3d(state, stableDt(state, law, visc, domain), law, visc, domain)
  assert totalMass(state, domain) == pytest.approx(mass, rel=1e-12)


def test_lifted_state_matches_1d(law):
  domain = buildChannel(0.5, 3, 2, 16)
  visc = Viscosity(0.2, 0.05)
  state = _lifted(domain)
  drho, du = rhs3d(state, law, visc, domain)
  z = domain.cellCenters()[2]
  rho0, u0 = canonicalData()
  drho1, du1 = rhs1d(Profile1D(rho0(z), u0(z), 0.), law, visc)
  np.testing.assert_allclose(du[:2], 0., atol=1e-12)
  np.testing.assert_allclose(drho[1, 0], drho1, rtol=1e-10, atol=1e-12)
  np.testing.assert_allclose(du[2, 2, 1], du1, rtol=1e-10, atol=1e-12)


def test_lifted_state_satisfies_slip(channel):
  state = applySlipBC(_lifted(channel), channel)
  assert slipResidual(state) <= 1e-12
  np.testing.assert_array_equal(state.rho, _lifted(channel).rho)


def test_odd_reflection_of_normal_velocity():
  domain = buildChannel(0.5, 4, 2, 4)
  X = domain.meshgrid()[0]
  u = np.zeros((3,) + domain.shape)
  u[0] = X - 0.5 * domain.epsilon + 0.3
  u[2] = np.cos(np.pi * X / domain.epsilon)
  state = applySlipBC(FluidState3D(np.ones(domain.shape), u, 0., domain), domain)
  U = state.ghost[1]
  assert np.max(np.abs(0.5 * (U[0, 1] + U[0, 2]))) == 0.
  np.testing.assert_array_equal(U[2, 1, 2:-2, 2:-2], u[2, 0])
  assert slipResidual(state) == pytest.approx(0., abs=1e-15)


@pytest.mark.parametrize("epsilon", [1.0, 0.5])
def test_manufactured_solution_second_order(law, epsilon):
  visc = Viscosity(0.1, 0.05)
  errors = []
  for n in (8, 16, 32):
    domain = ThinDomain(epsilon, n, n, n)
    state, source = manufacturedSolution3d(domain, law, visc)
    drho, du = rhs3d(state, law, visc, domain, dissipation=0., source=source)
    errors.append(np.max(np.abs(drho)) + np.max(np.abs(du)))
  order = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
  assert np.all(order >= 1.8)
  assert order[-1] >= 1.9


def test_stable_dt_advective_limit(law):
  domain = buildChannel(1.0, 8, 8, 8)
  dt = stableDt(uniformState(domain), law, Viscosity(1e-12), domain, cfl=0.5)
  assert dt == pytest.approx(0.5 * 0.125 / np.sqrt(2.), rel=1e-12)
  thin = buildChannel(0.5, 8, 8, 8)
  assert stableDt(uniformState(thin), law, Viscosity(1e-12), thin) <= 0.5 * dt * (1. + 1e-12)


def test_stable_dt_viscous_limit(law):
  domain = buildChannel(1.0, 8, 8, 8)
  dt = stableDt(uniformState(domain), law, Viscosity(1e3), domain, cfl=0.5)
  assert dt == pytest.approx(0.5 * 0.125**2 / (12. * 1e3), rel=1e-12)


@pytest.mark.parametrize("cfl", [0., -0.5, 1.5])
def test_stable_dt_rejects_cfl(channel, law, visc, cfl):
  with pytest.raises(ConfigurationError):
    stableDt(uniformState(channel), law, visc, channel, cfl)


def test_blow_up_is_signalled(law, visc):
  domain = buildChannel(0.5, 2, 2, 8)
  state = _lifted(domain, s=0.5)
  with pytest.raises(BlowUpError) as err:
    step3d(state, 100., law, visc, domain)
  assert err.value.t == pytest.approx(50.)
  assert err.value.min_density <= 1e-8


def test_density_floor(channel, law, visc):
  state = uniformState(channel)
  state.rho[0, 0, 3] = 1e-9
  with pytest.raises(BlowUpError):
    rhs3d(state, law, visc, channel)


def test_mass_conservation(law, visc):
  domain = buildChannel(0.5, 4, 4, 16)
  state = _lifted(domain)
  X, Y, Z = domain.meshgrid()
  state.rho += 0.02 * np.cos(2. * np.pi * X / domain.epsilon) * np.cos(np.pi * Z)
  state.u[0] += 0.05 * np.sin(np.pi * X / domain.epsilon)
  states = evolve3d(state, 0.02, law, visc, domain, sample_every=1)
  mass = [totalMass(s, domain) for s in states]
  np.testing.assert_allclose(mass, mass[0], rtol=1e-12)
  assert states[-1].t == 0.02


def test_energy_decays(law):
  domain = buildChannel(0.5, 2, 2, 16)
  visc = Viscosity(0.5)
  states = evolve3d(_lifted(domain), 0.05, law, visc, domain, sample_every=5)
  assert totalEnergy(states[-1], law, domain) < totalEnergy(states[0], law, domain)


def test_evolve_lands_on_sample_times(channel, law, visc):
  seen = []
  states = evolve3d(_lifted(channel), 0.02, law, visc, channel, sample_times=[0.005, 0.0125], callback=seen.append)
  assert [s.t for s in states] == [0., 0.005, 0.0125, 0.02]
  assert len(seen) == 4
  with pytest.raises(ConfigurationError):
    evolve3d(states[-1], 0.01, law, visc, channel)


def test_lifted_trajectory_tracks_1d(law, visc):
  domain = buildChannel(1.0, 2, 2, 16)
  states = evolve3d(_lifted(domain), 0.1, law, visc, domain)
  rho0, u0 = canonicalData()
  profiles = solve1d(rho0, u0, 0.1, law, visc, nz=16)
  np.testing.assert_allclose(states[-1].u[:2], 0., atol=1e-12)
  np.testing.assert_allclose(states[-1].rho[0, 1], profiles[-1].rho, atol=1e-4)
  np.testing.assert_allclose(states[-1].u[2, 1, 0], profiles[-1].u, atol=1e-4)


def test_show_state(channel, capsys):
  uniformState(channel, 2.).showState()
  assert "2.000000e+00" in capsys.readouterr().out
