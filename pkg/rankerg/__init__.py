# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

# builtin
import logging

# internal
from rankerg.version import __version__  # noqa

formatter = logging.Formatter("[%(name)s] [%(levelname)-7s] [%(asctime)s] %(message)s")

# Console Handler for rankerg messages
ch = logging.StreamHandler()
ch.setFormatter(formatter)

# Module-level logger
log = logging.getLogger(__name__)
log.addHandler(ch)
log.propagate = False


def group(spec, rho_prime=None):
    """Return the RankOneGroup described by a group spec string such as
    ``"so:3"`` or ``"custom:2,0"``."""
    from rankerg import groups

    return groups.parse_group(spec, rho_prime=rho_prime)


def load(path):
    """Load a spectrum configuration file.

    Returns:
        A (PuritySpectrum, SpectralVector) pair.
    """
    from rankerg import config

    return config.load_spectrum(path)
