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


__version__ = "0.1.0"

from .Geometry import ThinDomain, GridFunction, buildChannel, buildScaledBox, domainMetrics
from .Physics import (
  PressureLaw, Viscosity, pressure, pressurePrime, soundSpeed, potentialH, potentialHPrime, relentIntegrand,
  stress, dissipationDensity, quadraticEquivalence,
)
from .FieldCalc import (
  NormReport, gradient, lpNorm, integrate, normReport, sobolevNorm, crossAvg, cellAverageDown, lift1d,
  slipGradient, divStress,
)
from .Solver3D import (
  FluidState3D, uniformState, applySlipBC, slipResidual, rhs3d, stableDt, step3d, evolve3d,
  totalMass, totalEnergy, manufacturedSolution3d,
)
from .Solver1D import (
  Profile1D, canonicalData, checkCompatibility, rhs1d, stableDt1d, step1d, solve1d, restrictProfile,
  manufacturedSolution1d,
)
from .Inequalities import (
  RatioSample, InequalityReport, randomField, kornRatio, poincareRatio, sobolevRatio, gnRatio,
  checkSobolevExponents, lameOperator, lameKernel, lameSolve, manufacturedLamePair, lameEstimateRatio,
  fitEpsilonExponent, inequalitySuite,
)
from .Energetics import (
  PairSnapshot, EnergyReport, SmallnessFlags, modulatedEnergy, dissipation, gradSigmaL4, estar,
  sourceIntegrals, energyRate, energyReport, identityResidual, relativeResidual, smallnessCheck, relentEquivalence,
  referenceBound, estimateDiagnostics, showEnergyReports,
)
from .Experiments import (
  ReferenceTrajectory, RobustnessVerdict, ThinLimitTable, growthRate, omegaThreshold, gronwallEnvelope,
  smallnessCeiling, initialReference, makeReference, dataNorm, makePerturbation, robustnessRun,
  calibrateGronwallConstant, criticalAmplitude, crossSectionErrors, thinlimitRun,
)
from .Config import ExperimentConfig, parseConfig, loadConfig
from .Results import (
  writeCSV, readCSV, writeManifest, trajectorySummary, profilesTable, dumpTrajectory, readTrajectory,
  exportVTU, plotRobustness, plotThinLimit, plotInequalities,
)
from .utils import ConfigurationError, DomainError, NumericalError, BlowUpError
