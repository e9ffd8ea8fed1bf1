"""Numeric tolerances shared by the whole package."""

import os

DEFAULT_TOLERANCE = 1e-9

# Gap/tie/cost comparisons. OMATCH_TOLERANCE overrides it; the default is preferred.
TOL = float(os.environ.get("OMATCH_TOLERANCE", DEFAULT_TOLERANCE))

# Relaxation threshold inside the assignment solver.
SOLVER_EPS = 1e-12

# Slack used when certifying adversary lower bounds.
BOUND_TOL = 1e-6
