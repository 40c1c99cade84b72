# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Spectrum configuration files.

A configuration is a JSON object::

    {
      "group": "so:3",
      "rho_prime": 1.0,                       (optional)
      "atoms": [1.0, 0.7],
      "r": 0.4,
      "omega": [{"param": "c:0.4", "weight": 1.0},
                {"param": "p:1.0", "weight": 1.0}],
      "f": {"atom_norms": [1, 1], "omega_norms": [1, 1]}   (optional)
    }

Without ``f`` the model vector has unit atom norms and ``sqrt(weight)`` on
each Omega component.
"""

# builtin
import json
import logging

# internal
from rankerg import errors
from rankerg import groups
from rankerg import spectrum

# Module-level logger
LOG = logging.getLogger(__name__)

_REQUIRED = ("group", "atoms", "r")


def _get(document, key, path, kind=None):
    try:
        value = document[key]
    except (KeyError, TypeError):
        raise errors.ConfigError("Missing key '{0}'".format(key), path=path, key=key)

    if kind is not None and not isinstance(value, kind):
        msg = "Key '{0}' has the wrong type ({1})".format(key, type(value).__name__)
        raise errors.ConfigError(msg, path=path, key=key)

    return value


def _number_list(document, key, path):
    values = _get(document, key, path, list)

    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        raise errors.ConfigError("Key '{0}' must hold numbers".format(key), path=path, key=key)


def parse_spectrum(document, path=None):
    """Build a (PuritySpectrum, SpectralVector) pair from a parsed document.

    Raises:
        errors.ConfigError: For missing or malformed keys.
        errors.InvalidGroupError: For a bad group spec.
        errors.InvalidParameterError: For a bad parameter spec.
        errors.PurityError: If the spectrum violates purity.
    """
    if not isinstance(document, dict):
        raise errors.ConfigError("Configuration must be a JSON object", path=path)

    for key in _REQUIRED:
        _get(document, key, path)

    group = groups.parse_group(_get(document, "group", path), rho_prime=document.get("rho_prime"))
    atoms = _number_list(document, "atoms", path)

    try:
        r = float(document["r"])
    except (TypeError, ValueError):
        raise errors.ConfigError("Key 'r' must be a number", path=path, key="r")

    omega = []
    for idx, entry in enumerate(document.get("omega", [])):
        key = "omega[{0}]".format(idx)
        param = groups.parse_param(_get(entry, "param", path))

        try:
            weight = float(entry.get("weight", 1.0))
        except (TypeError, ValueError):
            raise errors.ConfigError("{0}.weight must be a number".format(key), path=path, key=key)

        omega.append((param, weight))

    spec = spectrum.PuritySpectrum(group, atoms, r, omega)

    if "f" in document:
        f_doc = _get(document, "f", path, dict)
        vector = spectrum.SpectralVector(
            _number_list(f_doc, "atom_norms", path),
            _number_list(f_doc, "omega_norms", path) if "omega_norms" in f_doc else [],
        )
    else:
        vector = spec.default_vector()

    spectrum.check_vector(spec, vector)
    return spec, vector


def load_spectrum(path):
    """Read a spectrum configuration file.

    Returns:
        A (PuritySpectrum, SpectralVector) pair.

    Raises:
        errors.ConfigError: If the file cannot be read or parsed.
    """
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except (IOError, OSError) as ex:
        raise errors.ConfigError("Cannot read spectrum file: {0}".format(ex), path=path)
    except ValueError as ex:
        raise errors.ConfigError("Invalid JSON: {0}".format(ex), path=path)

    LOG.debug("Loaded spectrum configuration %s", path)
    return parse_spectrum(document, path=path)


def dump_spectrum(spec, f=None):
    """Return the JSON-compatible document describing `spec` (and `f`)."""
    document = {
        "group": _group_spec(spec.group),
        "atoms": list(spec.atoms),
        "r": spec.r,
        "omega": [{"param": p.label, "weight": w} for p, w in spec.omega],
    }

    if not spec.group.rho_prime_assumed:
        document["rho_prime"] = spec.group.rho_prime

    if f is not None:
        document["f"] = {"atom_norms": list(f.atom_norms), "omega_norms": list(f.omega_norms)}

    return document


def _group_spec(group):
    return "custom:{0},{1}".format(group.n1, group.n2)
