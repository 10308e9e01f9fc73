"""Spectral estimators with non-asymptotic error certificates."""

from ._specbound import *  # noqa: F401,F403
from ._specbound import constants  # noqa: F401

__version__ = "0.1.0"
