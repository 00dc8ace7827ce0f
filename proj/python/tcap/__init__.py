"""Outage probability and transmission capacity of Poisson networks."""

from ._tcap import *  # noqa: F401,F403
from ._tcap import DomainError, IoError, NumericError, TcapError, __doc__  # noqa: F401

__version__ = "0.1.0"
