"""MDL-guided consensus over noisy graph samples."""

from mdlgraph._core import *  # noqa: F401,F403
from mdlgraph._core import __version__  # noqa: F401
