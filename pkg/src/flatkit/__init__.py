"""flatkit: exact-arithmetic toolkit for translation surfaces and origamis."""

from . import flatcore, gl2, hyperell, origami, spin, strata

__version__ = "0.1.0"

__all__ = ["flatcore", "origami", "spin", "strata", "hyperell", "gl2", "cli", "__version__"]
