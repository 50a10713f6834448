"""Weighted least gradient minimizers on discrete grids.

Constructs solutions level set by level set via exact min cuts, solves the
same problem with a primal-dual TV solver for cross-validation, and exposes
the weighted-geometry functionals (perimeter, total variation, coarea,
conformal mass) plus the graph-patch minimal surface machinery.
"""

from ._wlg import *  # noqa: F401,F403
from ._wlg import __doc__  # noqa: F401

__version__ = "0.1.0"
