"""Bundled example structures and constraint sets.

Four instances ship with the package:

``example1``
    Three people, one smoker, a small friendship graph; the running example
    for subset and substitution statistics.
``path``
    A directed path on three constants; its periodic expansions are worked
    through in the expansion docs and tests.
``pigeonhole``
    A one-predicate constraint ("some pair disagrees") realizable only at
    domain size 2, the smallest demonstration that realizability can be lost
    as the domain grows.
``three_color``
    A complete directed triangle with three vertex colors; its width-2
    statistics are realizable at size 3 but at no larger size.  The world
    space at size 4 has 2^28 elements, beyond the enumeration cap, so this
    instance is for statistics and sampling, not for exact solving.
"""

from __future__ import annotations

from importlib import resources

from ..data import GlobalExample, parse_facts
from ..errors import DomainError
from ..stats import MarginalConstraint, parse_constraints

__all__ = [
    "list_examples",
    "list_constraint_sets",
    "load_example",
    "load_constraints",
]


def _read(filename: str) -> str:
    ref = resources.files(__package__) / filename
    if not ref.is_file():
        raise DomainError(f"no bundled fixture {filename!r}")
    return ref.read_text(encoding="utf-8")


def list_examples() -> tuple[str, ...]:
    return ("example1", "path", "pigeonhole", "three_color")


def list_constraint_sets() -> tuple[str, ...]:
    return ("pigeonhole", "three_color")


def load_example(name: str) -> GlobalExample:
    if name not in list_examples():
        raise DomainError(
            f"unknown fixture {name!r}; available: {', '.join(list_examples())}"
        )
    return parse_facts(_read(f"{name}.facts"), source=f"{name}.facts")


def load_constraints(name: str) -> tuple[MarginalConstraint, ...]:
    if name not in list_constraint_sets():
        raise DomainError(
            f"unknown constraint set {name!r}; available: "
            f"{', '.join(list_constraint_sets())}"
        )
    return tuple(parse_constraints(_read(f"{name}.constraints"), source=f"{name}.constraints"))
