"""liberation-lab - fake Haar unitaries, free moment calculus and partition-lattice checks."""

__version__ = "1.0.0"
__author__ = "Liberation Lab Team"

from .config import config

__all__ = ["config", "__version__", "__author__"]
