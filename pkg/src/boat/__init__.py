"""Analytics over de-identified hospital discharge extracts (SPARCS style).

The pipeline is ``ingest`` (CSV or snapshot -> Frame), ``engine`` (filter,
group, sort, bin, describe), ``analytics`` (cost comparison, trends, cap
analysis) and ``report`` (plot-ready data documents).
"""

from boat.engine import Frame

__all__ = ["Frame"]
__version__ = "0.1.0"
