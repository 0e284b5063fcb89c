"""DPillar topology, single-path routing and evaluation toolkit."""

from .errors import DPillarError
from .marked_cycle import MarkedCycle, canonicalize
from .routing import diameter, dpillar_min_path, dpillar_sp_path, route
from .topology import Server, Switch, TopologyParams

__all__ = [
    "DPillarError",
    "MarkedCycle",
    "Server",
    "Switch",
    "TopologyParams",
    "canonicalize",
    "diameter",
    "dpillar_min_path",
    "dpillar_sp_path",
    "route",
]
__version__ = "0.1.0"
