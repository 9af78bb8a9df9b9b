"""Dissipative-triple toolkit.

Thin wrapper around the C++ core: measures and their Cauchy transforms,
Weyl/characteristic function evaluation, half-plane automorphism transforms
with invariance checks, and the dense-oracle discretization utilities.
"""

from ._livsic import *  # noqa: F401,F403
from ._livsic import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
