"""
Support code shared by the library and the command line.

``ingest`` and ``synthetic`` build data-model objects and are imported
explicitly (``from spatialvar.utils import ingest``) to keep this package
importable from ``spatialvar.fields``.
"""

from . import summation, grids, tables

__all__ = ["summation", "grids", "tables"]
