"""Finite-level algebra and explicit bounds for entanglement in Kummer extensions.

Import the submodules directly; the top level only carries
the version and the public error types.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
