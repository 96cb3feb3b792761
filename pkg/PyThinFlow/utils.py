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
import os
import pathlib
import sys
import tempfile


class ConfigurationError(ValueError):
  """
  Raised when an experiment, a domain or an operation is configured with
  parameters outside their admissible range.
  """
  pass


class DomainError(ValueError):
  """
  Raised when a function is evaluated outside its mathematical domain
  (negative density, nonpositive reference density, ...).
  """
  pass


class NumericalError(RuntimeError):
  """
  Raised when a numerical procedure fails (non finite values, iterative
  solver not converged, ...).
  """
  pass


class BlowUpError(NumericalError):
  """
  Raised by the time integrators when the density reaches the positivity
  floor or stops being finite.

  :param t: Time at which the failure was detected
  :type t: float
  :param min_density: Smallest density found at that time (``nan`` if not finite)
  :type min_density: float
  """
  def __init__(self, t, min_density, message=None):
    self.t = float(t)
    self.min_density = float(min_density)
    if message is None:
      message = f"Density floor breached at t={self.t:.6e} (min density {self.min_density:.6e})"
    super().__init__(message)


def setupLogging(quiet=False):
  """
  Configure the root logger for command line use.

  :param quiet: Only report warnings and errors
  :type quiet: bool
  """
  level = logging.WARNING if quiet else logging.INFO
  logging.basicConfig(
    level=level,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    stream=sys.stderr,
  )
  logging.getLogger().setLevel(level)
  return


def atomicWrite(path, data):
  """
  Write text or bytes to ``path`` through a temporary file in the same
  directory, then rename it, so readers never see a partial file.

  :param path: Destination file
  :type path: str or pathlib.Path
  :param data: Content to write
  :type data: str or bytes
  """
  path = pathlib.Path(path)
  path.parent.mkdir(parents=True, exist_ok=True)
  mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
  fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
  try:
    with os.fdopen(fd, mode) as f:
      f.write(data)
    os.replace(tmp, path)
  except BaseException:
    if os.path.exists(tmp):
      os.remove(tmp)
    raise
  return path


def defaultOutputDirectory():
  """
  Output directory used when none is given on the command line: the
  ``PYTHINFLOW_OUT`` environment variable, or ``./pythinflow_out``.
  """
  return pathlib.Path(os.environ.get("PYTHINFLOW_OUT", "pythinflow_out"))
