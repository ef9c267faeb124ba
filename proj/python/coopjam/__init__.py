"""Cooperative jamming power allocation and secrecy outage analysis."""

from ._coopjam import *  # noqa: F401,F403
from ._coopjam import __doc__  # noqa: F401

__version__ = "0.1.0"
