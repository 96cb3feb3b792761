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


import xml.etree.ElementTree as ET

from prettytable import PrettyTable

from .utils import ConfigurationError


def _parseBool(text):
  t = text.strip().lower()
  if t in ("true", "1", "yes"):
    return True
  if t in ("false", "0", "no"):
    return False
  raise ValueError(f"not a boolean: {text!r}")


def _parseFloatList(text):
  return [float(x) for x in text.split(",") if x.strip()]


def _formatValue(val):
  if isinstance(val, bool):
    return "true" if val else "false"
  if isinstance(val, (list, tuple)):
    return ", ".join(repr(float(x)) for x in val)
  if isinstance(val, float):
    return repr(val)
  return str(val)


class BasePropertiesClass:
  """
  Basic attributes and methods of a configuration section.

  Contains two structures:
  * parameter_type: explicitely define the type of every key the section accepts (``float``, ``int``, ``str``, ``bool`` or ``list`` for comma separated reals)
  * defaults: value of the keys not given in the document

  Values are stored typed in ``data``; ``read`` and ``__write__`` convert
  from and to the text of the XML element tree.
  """
  parameter_type = {}
  defaults = {}
  parsers = {bool: _parseBool, list: _parseFloatList}

  def __init__(self, prop=None):
    self.data = {}
    if prop is not None:
      self.read(prop)
    return

  def __str__(self):
    return self.getAllProperties().__str__()

  def __repr__(self):
    return f"<PyThinFlow.{type(self).__name__} object, ({len(self.data)} keys set)>"

  @property
  def name(self):
    return type(self).__name__

  def __setitem__(self, property_, val):
    """
    Set the property named property_ to the value val, converted to its type.
    """
    if property_ not in self.parameter_type:
      raise ConfigurationError(f"Unknown key {self.name}.{property_}, accepted keys are {list(self.parameter_type)}")
    func = self.parameter_type[property_]
    try:
      if isinstance(val, str):
        val = self.parsers.get(func, func)(val)
      elif func is list:
        val = [float(x) for x in val]
      elif func is float:
        val = float(val)
      elif func is int:
        if int(val) != val:
          raise ValueError(f"not an integer: {val!r}")
        val = int(val)
      else:
        val = func(val)
    except (TypeError, ValueError) as e:
      raise ConfigurationError(f"Invalid value for {self.name}.{property_}: {e}")
    self.data[property_] = val
    return

  def __getitem__(self, property_):
    """
    Return the property, or its default value if not set.
    """
    if property_ in self.data:
      return self.data[property_]
    if property_ in self.parameter_type:
      val = self.defaults.get(property_)
      return list(val) if isinstance(val, list) else val
    raise KeyError(f"There is no item \"{property_}\" accessible through {self.name} class")

  def read(self, et):
    """
    Read the XML element and populate the section: one child element per
    key, the text holds the value.
    """
    for prop in et:
      if len(prop):
        raise ConfigurationError(f"Key {self.name}.{prop.tag} must hold a value, not a subtree")
      self[prop.tag] = (prop.text or "").strip()
    return

  def __write__(self, et):
    """
    Write back every set property in the XML element
    """
    for tag, val in self.data.items():
      sub = ET.SubElement(et, tag)
      sub.text = _formatValue(val)
    return

  def validate(self):
    """
    Return the list of violated constraints (empty when valid)
    """
    return []

  def getAllProperties(self):
    """
    Return a dictionnary holding all the properties with the defaults applied.
    """
    return {key: self[key] for key in self.parameter_type}

  def showAvailableProperties(self):
    """
    Show the keys accepted by the section
    """
    return self.parameter_type.keys()

  def showProperties(self):
    """
    Print the section as a table
    """
    res = PrettyTable()
    res.field_names = ["Key", "Value", "Default"]
    for key in self.parameter_type:
      res.add_row([key, _formatValue(self[key]), "" if key in self.data else "*"])
    print(res)
    return
