from .conditions import TRUE_CONDITION, TransitionCondition, make_condition
from .formulas import (
    Always,
    And,
    Eventually,
    FalseF,
    Formula,
    Implies,
    LTLError,
    Next,
    Not,
    Or,
    Prop,
    Release,
    TrueF,
    Until,
    nnf,
    normalize,
    parse_ltl,
    propositions,
)
from .buchi import BuchiAutomaton
from .translate import ltl_to_buchi, prune_automaton, reduce_automaton
from .hoa import HOAError, export_hoa, import_hoa

__all__ = [
    "TRUE_CONDITION",
    "TransitionCondition",
    "make_condition",
    "Always",
    "And",
    "Eventually",
    "FalseF",
    "Formula",
    "Implies",
    "LTLError",
    "Next",
    "Not",
    "Or",
    "Prop",
    "Release",
    "TrueF",
    "Until",
    "nnf",
    "normalize",
    "parse_ltl",
    "propositions",
    "BuchiAutomaton",
    "ltl_to_buchi",
    "prune_automaton",
    "reduce_automaton",
    "HOAError",
    "export_hoa",
    "import_hoa",
]
