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


import argparse
import logging
import pathlib
import sys

import numpy as np
import pandas as pd

from . import __version__
from .Config import ExperimentConfig, loadConfig
from .Experiments import (
  calibrateGronwallConstant, criticalAmplitude, initialReference, makePerturbation, makeReference,
  omegaThreshold, robustnessRun, thinlimitRun,
)
from .Energetics import showEnergyReports
from .Inequalities import inequalitySuite
from .Results import (
  dumpTrajectory, exportVTU, plotInequalities, plotRobustness, plotThinLimit, profilesTable,
  trajectorySummary, writeCSV, writeManifest,
)
from .Solver3D import FluidState3D, evolve3d, slipResidual
from .utils import ConfigurationError, DomainError, NumericalError, setupLogging

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("simulate3d", "simulate1d", "energetics", "inequalities", "robustness", "critical", "thinlimit", "omega")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class RunContext:
  """
  Configuration, output directory and options of one command line run.
  Artifacts are named after the subcommand and the configuration hash.
  """
  def __init__(self, command, config, out, threads=1, plot=False, options=None):
    self.command = command
    self.config = config
    self.out = pathlib.Path(out)
    self.threads = threads
    self.plot = plot or config["Output"]["Plot"]
    self.options = options or {}
    self.hash = config.configHash()
    self.artifacts = []
    return

  def path(self, stem, suffix):
    return self.out / f"{stem}_{self.hash}.{suffix}"

  def csv(self, table, stem=None):
    p = writeCSV(table, self.path(stem or self.command, "csv"), self.hash)
    self.artifacts.append(p.name)
    return p

  def figure(self, func, obj, stem=None):
    if self.plot:
      p = self.path(stem or self.command, "png")
      self.out.mkdir(parents=True, exist_ok=True)
      func(obj, p)
      self.artifacts.append(p.name)
    return


def _gronwallConstant(ctx):
  if ctx.config["Constants"]["Calibrate"]:
    return calibrateGronwallConstant(ctx.config)
  return ctx.config["Constants"]["CGronwall"]


def runSimulate3d(ctx):
  config = ctx.config
  law, visc, domain = config.pressureLaw(), config.viscosity(), config.channel()
  time, pert = config["Time"], config["Perturbation"]
  reference = initialReference(config, domain)
  sigma0, w0 = makePerturbation(pert["Delta"], config.seed, domain, rho0=reference.rho, density_share=pert["DensityShare"])
  state = FluidState3D(reference.rho + sigma0, reference.u + w0, 0., domain)
  states = evolve3d(state, time["TEnd"], law, visc, domain, cfl=time["Cfl"], sample_every=time["SampleEvery"],
                    dissipation=time["Dissipation"])
  summary = trajectorySummary(states, law, domain)
  ctx.csv(summary)
  if config["Output"]["Trajectory"]:
    p = dumpTrajectory(states, ctx.path("trajectory", "bin"))
    ctx.artifacts.append(p.name)
  if config["Output"]["VTU"]:
    p = exportVTU(states[-1], domain, ctx.path("final", "vtu"))
    ctx.artifacts.append(pathlib.Path(p).name)
  drift = abs(summary["mass"].iloc[-1] - summary["mass"].iloc[0]) / summary["mass"].iloc[0]
  return EXIT_OK, {"mass_drift": float(drift), "samples": len(states)}


def runSimulate1d(ctx):
  config = ctx.config
  ref = makeReference(config, config.channel())
  ctx.csv(profilesTable(ref.profiles))
  residual = max(slipResidual(s) for s in ref.states)
  mass = [p.mass for p in ref.profiles]
  return EXIT_OK, {"slip_residual": residual, "mass_drift": abs(mass[-1] - mass[0]) / mass[0]}


def runEnergetics(ctx):
  verdict = robustnessRun(ctx.config, delta=ctx.options.get("delta"))
  ctx.csv(verdict.table())
  if logger.isEnabledFor(logging.INFO):
    showEnergyReports(verdict.reports)
  res = np.abs(verdict.residuals)
  return EXIT_OK, {
    "max_residual": float(res.max()) if res.size else 0.,
    "max_dissipation": float(max(r.d_diss for r in verdict.reports)),
    "relative_residual": verdict.relative_residual,
    "samples": len(verdict.reports),
  }


def runInequalities(ctx):
  config = ctx.config
  s = config["Sampling"]
  report = inequalitySuite(config.epsilons(), n=config["Geometry"]["NBox"], n_fields=s["NFields"],
                           n_lame=s["NLame"], seed=config.seed, visc=config.viscosity(), threads=ctx.threads,
                           rtol=config["Tolerances"]["LameTol"], maxiter=config["Tolerances"]["LameMaxIter"])
  ctx.csv(report.table)
  summary = report.summary()
  p = writeManifest(ctx.path("inequalities_summary", "json"), summary)
  ctx.artifacts.append(p.name)
  ctx.figure(plotInequalities, report)
  if logger.isEnabledFor(logging.INFO):
    report.showReport()
  return (EXIT_OK if report.passed() else EXIT_FAIL), {"uniform": report.passed()}


def runRobustness(ctx):
  c = _gronwallConstant(ctx)
  verdict = robustnessRun(ctx.config, delta=ctx.options.get("delta"), c_gronwall=c)
  ctx.csv(verdict.table())
  ctx.figure(plotRobustness, verdict)
  if logger.isEnabledFor(logging.INFO):
    verdict.showVerdict()
  return (EXIT_OK if verdict.passed else EXIT_FAIL), {"verdict": verdict.toDict()}


def runCritical(ctx):
  config = ctx.config
  c = _gronwallConstant(ctx)
  pert = config["Perturbation"]
  domain = config.channel()
  delta_star = criticalAmplitude(lambda d: robustnessRun(config, delta=d, c_gronwall=c).passed,
                                 pert["DeltaLo"], pert["DeltaHi"], pert["Iterations"])
  omega = omegaThreshold(domain.epsilon, domain.v, config["Time"]["TEnd"], c)
  ctx.csv(pd.DataFrame([[domain.epsilon, delta_star, omega, c]], columns=["epsilon", "delta_star", "omega", "c_gronwall"]))
  return (EXIT_OK if delta_star >= omega else EXIT_FAIL), {"delta_star": delta_star, "omega": omega}


def runThinlimit(ctx):
  table = thinlimitRun(ctx.config, threads=ctx.threads)
  ctx.csv(table.table)
  ctx.figure(plotThinLimit, table)
  if logger.isEnabledFor(logging.INFO):
    table.showTable()
  return (EXIT_OK if table.decreasing() else EXIT_FAIL), {"decreasing": table.decreasing()}


def runOmega(ctx):
  config = ctx.config
  o = ctx.options
  eps = config["Geometry"]["Epsilon"] if o.get("epsilon") is None else o["epsilon"]
  v = eps * eps if o.get("volume") is None else o["volume"]
  t = config["Time"]["TEnd"] if o.get("horizon") is None else o["horizon"]
  c = config["Constants"]["CGronwall"] if o.get("constant") is None else o["constant"]
  omega = omegaThreshold(eps, v, t, c)
  print(repr(float(omega)))
  return EXIT_OK, {"omega": omega, "epsilon": eps, "volume": v, "horizon": t, "constant": c}


HANDLERS = {
  "simulate3d": runSimulate3d,
  "simulate1d": runSimulate1d,
  "energetics": runEnergetics,
  "inequalities": runInequalities,
  "robustness": runRobustness,
  "critical": runCritical,
  "thinlimit": runThinlimit,
  "omega": runOmega,
}


def run(command, config, out, threads=1, plot=False, options=None):
  """
  Run a subcommand and write its artifacts and manifest.

  :param command: One of ``simulate3d, simulate1d, energetics, inequalities, robustness, critical, thinlimit, omega``
  :type command: str
  :param config: Validated configuration
  :type config: ExperimentConfig
  :param out: Output directory
  :type out: str or pathlib.Path
  :return: Exit status (0 pass, 1 verdict failure)
  :rtype: int
  """
  if command not in HANDLERS:
    raise ConfigurationError(f"Unknown subcommand {command}, must be one of {SUBCOMMANDS}")
  ctx = RunContext(command, config, out, threads, plot, options)
  logger.info(f"{command}: configuration {ctx.hash}, output in {ctx.out}")
  status, fields = HANDLERS[command](ctx)
  manifest = {
    "command": command, "config_hash": ctx.hash, "seed": config.seed, "status": status,
    "version": __version__, "artifacts": sorted(ctx.artifacts), "results": fields,
  }
  if command == "robustness":
    manifest["first_violation_t"] = fields["verdict"]["first_violation_t"]
  writeManifest(ctx.path(f"manifest_{command}", "json"), manifest)
  return status


def buildParser():
  parser = argparse.ArgumentParser(prog="pythinflow", description="Compressible barotropic flows in thin channels")
  parser.add_argument("command", choices=SUBCOMMANDS, help="Experiment to run")
  parser.add_argument("--config", default=None, help="XML configuration file (defaults apply when omitted)")
  parser.add_argument("--out", default=None, help="Output directory (default: $PYTHINFLOW_OUT or ./pythinflow_out)")
  parser.add_argument("--seed", type=int, default=None, help="Override Perturbation.Seed")
  parser.add_argument("--threads", type=int, default=1, help="Worker threads for epsilon sweeps")
  parser.add_argument("--quiet", action="store_true", help="Only report warnings and errors")
  parser.add_argument("--plot", action="store_true", help="Write PNG figures next to the CSV files")
  parser.add_argument("--delta", type=float, default=None, help="Override Perturbation.Delta (energetics, robustness)")
  omega = parser.add_argument_group("omega")
  omega.add_argument("--epsilon", type=float, default=None, help="Scale (default: Geometry.Epsilon)")
  omega.add_argument("--volume", type=float, default=None, help="Volume (default: epsilon**2, the channel)")
  omega.add_argument("--horizon", type=float, default=None, help="Horizon (default: Time.TEnd)")
  omega.add_argument("--constant", type=float, default=None, help="Constant (default: Constants.CGronwall)")
  return parser


def main(argv=None):
  """
  Command line entry point. Exit status: 0 pass, 1 verdict failure,
  2 configuration error, 3 numerical failure.
  """
  args = buildParser().parse_args(argv)
  setupLogging(args.quiet)
  try:
    config = loadConfig(args.config) if args.config else ExperimentConfig().validate()
    if args.seed is not None:
      config.seed = args.seed
      config.validate()
    if args.threads < 1:
      raise ConfigurationError(f"--threads must be >= 1, got {args.threads}")
    out = args.out or config.outputDirectory()
    options = {k: getattr(args, k) for k in ("delta", "epsilon", "volume", "horizon", "constant")}
    return run(args.command, config, out, args.threads, args.plot, options)
  except (ConfigurationError, DomainError, IOError) as e:
    logger.error(f"configuration error: {e}")
    return EXIT_CONFIG
  except NumericalError as e:
    logger.error(f"numerical failure: {e}")
    return EXIT_NUMERICAL


if __name__ == "__main__":
  sys.exit(main())
