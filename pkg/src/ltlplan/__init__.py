"""Multi-robot LTL path planning on grid workspaces."""

from .workspace import Cell, GridWorkspace, load_workspace
from .ltl import (
    BuchiAutomaton,
    TransitionCondition,
    export_hoa,
    import_hoa,
    ltl_to_buchi,
    normalize,
    parse_ltl,
)

__version__ = "0.1.0"
