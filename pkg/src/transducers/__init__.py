"""String-to-string transducer toolkit.

Machine models (sequential, nondeterministic one-way, two-way, register),
combinator expressions over them, decision procedures for functionality and
equivalence, and the constructions tying the models together.
"""

from .symbols import Alphabet, Word, parse_word, display_word, reverse_word, word_over
from .nfa import (
    Nfa,
    dfa_equiv,
    nfa_accepts,
    nfa_ambiguous,
    nfa_determinize,
    nfa_trim,
)
from .machines import (
    EvalOutcome,
    Nft,
    RegisterTransducer,
    SequentialTransducer,
    TwoWayDft,
    eval_2dft,
    eval_nft,
    eval_register,
    eval_sequential,
    strip_endmarkers,
    validate_copyless,
    validate_machine,
)
from .analysis import (
    FunctionalityVerdict,
    bruteforce_functional,
    check_functional,
    equiv_functional,
    nft_disjoint_union,
)
from .constructions import (
    ElgotDecomposition,
    LookaheadDft,
    compose_sequential,
    determinize_with_lookahead,
    elgot_decompose,
    elgot_eval,
    eval_lookahead,
    lookahead_to_unambiguous,
)
from .rte import (
    RteExpr,
    check_unambiguous,
    eval_rte,
    rewrite,
    rte_domain,
    stdlib_expr,
)
from .rte_parser import parse_rte
from .serialization import export_dot, load_machine, machine_from_dict, machine_to_dict, save_machine

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
