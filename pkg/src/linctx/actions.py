"""Transition labels and traces.

Terms embedded in labels are stored alpha-normalised, so structural equality
of actions coincides with alpha-equivalence.  Bodies of tensor labels use the
free variables ``z1`` and ``z2`` for the two components.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

from .syntax import Term, alpha_normalize

TENSOR_VARS = ("z1", "z2")


@dataclass(frozen=True)
class ConstNat:
    n: int


@dataclass(frozen=True)
class ConstBool:
    b: bool


@dataclass(frozen=True)
class AppArg:
    arg: Term

    def __post_init__(self):
        object.__setattr__(self, "arg", alpha_normalize(self.arg))


@dataclass(frozen=True)
class ProjAct:
    index: int


@dataclass(frozen=True)
class TensorAct:
    body: Term

    def __post_init__(self):
        object.__setattr__(self, "body", alpha_normalize(self.body))


@dataclass(frozen=True)
class TAct:
    pass


Action = Union[ConstNat, ConstBool, AppArg, ProjAct, TensorAct, TAct]
Trace = Tuple[Action, ...]


def is_constant(a: Action) -> bool:
    return isinstance(a, (ConstNat, ConstBool))


def well_formed_trace(s: Trace) -> bool:
    """No constant action may be followed by another action."""
    return not any(is_constant(a) for a in s[:-1])
