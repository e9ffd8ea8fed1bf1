"""Online metric matching with capacitated servers.

GREEDY, an exact offline optimum, the two-server input reductions, and the
adaptive lower-bound adversaries for two servers and for three, four and
five unit-spaced servers on a line.
"""

from .metric import (
    Instance,
    Metric,
    RequestSequence,
    Server,
    distance,
    line_instance,
    ofal_instance,
    omm2_instance,
    validate,
)
from .offline import AssignmentPlan, assignment_cost, brute_force_assignment, optimal_assignment
from .online import GameTrace, Greedy, SidePolicy, classify_types, greedy_serve, is_surrounding_oriented, run_online
from .reductions import make_anti_opt, make_one_sided_priority, rate, ratio

__version__ = "0.1.0"
