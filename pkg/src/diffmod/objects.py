"""Formal object expressions shared by both models and the axiom engine.

An object is a tuple of atomic factors (the strict/skeletal reading of a
tensor product: associativity is concatenation, the unit is the empty
tuple). Factors are a base space, a bang (the modality applied to a
factor), or a degree-indexed truncation of a bang.

Basis elements of a composite object are flat tuples, one slot per factor;
bang-factor elements are multisets of inner-factor elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .combinatorics import Multiset


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Bang:
    inner: "Factor"


@dataclass(frozen=True)
class BangLeq:
    grade: int
    inner: "Factor"

    def __post_init__(self):
        if self.grade < 0:
            raise ValueError("truncation grade must be a natural number")


Factor = Union[Base, Bang, BangLeq]
Obj = tuple  # tuple[Factor, ...]

UNIT: Obj = ()


def obj(*factors: Factor) -> Obj:
    return tuple(factors)


def obj_tensor(*objs: Obj) -> Obj:
    out: tuple = ()
    for o in objs:
        out = out + o
    return out


def fmt_factor(f: Factor) -> str:
    if isinstance(f, Base):
        return f.name
    if isinstance(f, Bang):
        return f"!{fmt_factor(f.inner)}"
    if isinstance(f, BangLeq):
        return f"!<={f.grade}({fmt_factor(f.inner)})"
    raise TypeError(f"not a factor: {f!r}")


def fmt_obj(o: Obj) -> str:
    if not o:
        return "I"
    return " (x) ".join(fmt_factor(f) for f in o)


def fmt_value(v) -> str:
    if isinstance(v, Multiset):
        return "[" + ",".join(fmt_value(e) for e in v.elements()) + "]"
    if isinstance(v, tuple):
        return "(" + ",".join(fmt_value(e) for e in v) + ")"
    return str(v)


def fmt_elem(e: tuple) -> str:
    """Render a composite basis element (a flat tuple, one slot per factor)."""
    if e == ():
        return "*"
    if len(e) == 1:
        return fmt_value(e[0])
    return "(" + ", ".join(fmt_value(x) for x in e) + ")"
