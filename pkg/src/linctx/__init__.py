"""Linear PCF and its non-deterministic monadic extension: typing, reduction,
trace semantics, linear contexts and executable metatheory."""
import sys

# Substitution, typing and printing recurse over term structure, and fix
# unrollings build deep terms.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

from .errors import *  # noqa: E402,F401,F403
from .syntax import (BOOL, NAT, App, Arrow, Bind, BoolLit, BoolType, Choice, Eq, EqN, Fix,  # noqa: E402,F401
                     If, IsZero, Lam, LinArrow, Monad, NatLit, NatType, Pair, Pred, Proj, Succ,
                     TensorIntro, TensorLet, TensorType, Val, Var, WithType, alpha_eq, free_vars,
                     omega, size, substitute)
from .grammar import (parse, parse_term, parse_trace, parse_traces, parse_type,  # noqa: E402,F401
                      print_term, print_trace, print_type)
from .typecheck import TypingEnv, check, check_linear_context, check_program  # noqa: E402,F401
from .reduction import Convergence, evaluate, is_canonical, may_converge, step  # noqa: E402,F401
from .pool import ArgumentPool, parse_pool  # noqa: E402,F401
from .lts import (EquivKind, TraceEngine, VerdictKind, classify_trace, external_transitions,  # noqa: E402,F401
                  has_trace, trace_equiv, trace_leq, traces)
from .contexts import (LinearContext, classify_lcr, context_trace, context_transitions,  # noqa: E402,F401
                       plug, synthesize_s_context)
from .generate import Enumerator, GenConfig, gen_linear_context, gen_typed_term  # noqa: E402,F401
from .metatheory import Bounds, CheckReport, check_names, run_check  # noqa: E402,F401
