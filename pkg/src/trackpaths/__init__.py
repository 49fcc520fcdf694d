"""Exact minimum tracking sets for graphs with a small structural modulator."""

from .api import solve
from .cvd import solve_cvd
from .dcm import Solution, check_dcm, solve_dcm
from .errors import (GraphError, InstanceFormatError, ModulatorError, PathCapExceeded,
                     SolverInvariantError, TrackPathsError)
from .fileformat import export_dot, parse_instance, serialize_instance
from .generators import generate_instance
from .graph import Graph, Instance, Kind, build_graph
from .reductions import reduce_fixpoint
from .vc import solve_vc
from .verify import is_tracking_set, min_tracking_set_bruteforce

__version__ = "0.1.0"
