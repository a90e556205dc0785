"""r2wb: a symbolic workbench for the ordinal structure (Ord; <=, <=1, <=2).

Hereditary notation terms, tracking sequences and chains, the order
isomorphism between ordinals and chains, and decision procedures for
the <=1/<=2 relations, predecessors, successors and reach."""

import sys as _sys

# the evaluation recursions span many interpreter frames per level; the
# structural depth of kernel recursion stays small, so this is safe
if _sys.getrecursionlimit() < 30000:
    _sys.setrecursionlimit(30000)

from ._kernel import KERNEL
from .terms import (
    ZERO, ONE, OMEGA, cmp, add, mul, omega_pow, theta, upsilon,
    from_nat, anf, mnf, end, log, logend, left_div,
    OrdError, NoLeftQuotient, UndefinedOperator, DomainError,
)
from .grammar import parse, print_term, parse_chain, print_chain, ParseError
from .upsilon import upsilon_seg, term_length, TermUniverse, enumerate_terms
from .trackseq import (
    lambda_ts, eval_o_ts, o_ts, lseq, is_lambda_rs, is_lambda_ts, is_ts,
    ts_rel, InvariantError,
)
from .chains import (
    validate, tc_assign, eval_o_tc, ec, me, me_plus, close, cmp_tc,
    modify_last, is_upsilon_sequence, ChainError, Chain,
)
from .queries import (
    pred1, pred2, le1, le2, lh, lh2, succ2_enum, gbo, in_I,
    substructure, is_covering, PredResult, ReachValue,
)
from .r1 import r1_lh

__version__ = "0.1.0"
