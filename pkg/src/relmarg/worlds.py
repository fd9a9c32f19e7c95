"""Exhaustive possible-world spaces over a fixed domain and vocabulary.

A world is a subset of the ground atoms, encoded as an integer bit pattern
over a dense, deterministic atom order.  A world space enumerates every
pattern satisfying the hard rules, in ascending pattern order, and caches the
per-world statistic counts that the max-entropy solver and the polytope code
share.  The atom count is capped because everything downstream is exponential
in it by design.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .data import GlobalExample, GroundAtom
from .errors import CapExceededError, DomainError
from .logic import Formula, constants_of, free_vars, holds, merge_vocabulary, vocabulary_of
from .stats import (
    ModelA,
    ModelKind,
    count_fragments_over,
    count_injective_groundings,
    universal_parts,
)

DEFAULT_ATOM_CAP = 24


@dataclass
class WorldSpace:
    constants: tuple[str, ...]
    vocabulary: dict[str, int]
    hard_rules: tuple[Formula, ...]
    atoms: tuple[GroundAtom, ...]
    worlds: np.ndarray  # int64 bit patterns, ascending
    _index: dict[GroundAtom, int] = field(repr=False, default_factory=dict)
    _counts: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.worlds)

    def world_atoms(self, bits: int) -> frozenset[GroundAtom]:
        return frozenset(a for i, a in enumerate(self.atoms) if bits >> i & 1)

    def world_example(self, bits: int) -> GlobalExample:
        return GlobalExample(self.constants, self.world_atoms(bits), self.vocabulary)

    def encode(self, world) -> int:
        """Bit pattern of a GlobalExample or atom iterable; must be over this space."""
        if isinstance(world, GlobalExample):
            if set(world.constants) != set(self.constants):
                raise DomainError("world is over a different constant set")
            atoms = world.atoms
        else:
            atoms = world
        bits = 0
        for atom in atoms:
            i = self._index.get(atom)
            if i is None:
                raise DomainError(f"atom {atom} does not exist in this world space")
            bits |= 1 << i
        return bits

    def contains(self, bits: int) -> bool:
        i = int(np.searchsorted(self.worlds, bits))
        return i < len(self.worlds) and int(self.worlds[i]) == bits

    def world_index(self, bits: int) -> int:
        i = int(np.searchsorted(self.worlds, bits))
        if i >= len(self.worlds) or int(self.worlds[i]) != bits:
            raise DomainError(f"bit pattern {bits} is not a world of this space (hard rules?)")
        return i

    # -- statistics ---------------------------------------------------------

    def normalizers(self, formulas: Sequence[Formula], kind: ModelKind) -> np.ndarray:
        """Statistic denominators: subset count for Model A, injective
        substitution count per formula for Model B."""
        m = len(self.constants)
        out = []
        for f in formulas:
            if isinstance(kind, ModelA):
                if not 1 <= kind.width <= m:
                    raise DomainError(f"width {kind.width} outside 1..{m}")
                out.append(math.comb(m, kind.width))
            else:
                vs, _ = universal_parts(f)
                if len(vs) > m:
                    raise DomainError(
                        f"formula has {len(vs)} variables but the domain has {m} constants"
                    )
                out.append(math.perm(m, len(vs)))
        return np.array(out, dtype=np.int64)

    def count_matrix(self, formulas: Sequence[Formula], kind: ModelKind) -> np.ndarray:
        """Unnormalized statistic counts, one row per world, one column per formula."""
        key = (tuple(formulas), kind)
        cached = self._counts.get(key)
        if cached is not None:
            return cached
        for f in formulas:
            if free_vars(f):
                raise DomainError("constraint formulas must be closed")
            merge_vocabulary(vocabulary_of(f), self.vocabulary)
        self.normalizers(formulas, kind)  # width/variable-count validation
        parts = None if isinstance(kind, ModelA) else [universal_parts(f) for f in formulas]
        out = np.zeros((len(self.worlds), len(formulas)), dtype=np.int64)
        for w, bits in enumerate(self.worlds):
            atoms = self.world_atoms(int(bits))
            for j, f in enumerate(formulas):
                if isinstance(kind, ModelA):
                    out[w, j] = count_fragments_over(f, atoms, self.constants, kind.width)
                else:
                    vs, matrix = parts[j]
                    out[w, j] = count_injective_groundings(matrix, vs, atoms, self.constants)
        self._counts[key] = out
        return out

    def feature_vector(
        self, world, formulas: Sequence[Formula], kind: ModelKind
    ) -> tuple[Fraction, ...]:
        """Normalized statistics of one world, exact."""
        bits = world if isinstance(world, int) else self.encode(world)
        idx = self.world_index(bits)
        counts = self.count_matrix(tuple(formulas), kind)[idx]
        norms = self.normalizers(formulas, kind)
        return tuple(Fraction(int(c), int(n)) for c, n in zip(counts, norms))


def enumerate_worlds(
    constants: Iterable[str],
    vocabulary: Mapping[str, int],
    hard_rules: Iterable[Formula] = (),
    cap: int = DEFAULT_ATOM_CAP,
) -> WorldSpace:
    """Build the world space over ``constants`` filtered by ``hard_rules``.

    Worlds are int bit patterns over the deterministic atom order (predicates
    sorted by name, argument tuples in product order over the constant order).
    """
    constants = tuple(constants)
    if len(set(constants)) != len(constants):
        raise DomainError("duplicate constants")
    vocabulary = dict(vocabulary)
    n_atoms = sum(len(constants) ** arity for arity in vocabulary.values())
    if n_atoms > cap:
        raise CapExceededError(
            f"{n_atoms} ground atoms exceed the enumeration cap of {cap}", n_atoms, cap
        )
    atoms = []
    for pred in sorted(vocabulary):
        for args in itertools.product(constants, repeat=vocabulary[pred]):
            atoms.append(GroundAtom(pred, args))
    hard_rules = tuple(hard_rules)
    cset = set(constants)
    for rule in hard_rules:
        if free_vars(rule):
            raise DomainError("hard rules must be closed formulas")
        unknown = constants_of(rule) - cset
        if unknown:
            raise DomainError(f"hard rule uses unknown constant(s): {', '.join(sorted(unknown))}")
        merge_vocabulary(vocabulary_of(rule), vocabulary)
    accepted = []
    for bits in range(1 << n_atoms):
        if hard_rules:
            world = frozenset(a for i, a in enumerate(atoms) if bits >> i & 1)
            if not all(holds(r, world, constants) for r in hard_rules):
                continue
        accepted.append(bits)
    space = WorldSpace(
        constants,
        vocabulary,
        hard_rules,
        tuple(atoms),
        np.array(accepted, dtype=np.int64),
    )
    space._index = {a: i for i, a in enumerate(atoms)}
    return space
