"""Free products of finitely generated abelian groups.

A factor ``Z^n x Z/d_1 x ... x Z/d_t`` is an :class:`AbelianFactor`, and a free
product of factors is a :class:`Presentation`.  By the Kurosh uniqueness
theorem two presentations describe isomorphic groups exactly when their
normalized factor lists agree, so ``==`` on presentations is the isomorphism
test.

Canonical factor order (part of the certificate wire format): factors are
sorted by the pair (free rank, torsion tuple) in descending order, tuples
compared lexicographically; so ``Z^2`` precedes ``(Z x Z/6)``, which precedes
``Z``, which precedes ``Z/4``.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, groupby, repeat
from math import prod

from .errors import MalformedFactorError
from .lattice import diag_chain


def canonical_torsion(orders):
    """Invariant factors of the product of cyclic groups of the given orders.

    >>> canonical_torsion([4, 6])
    [2, 12]
    """
    orders = list(orders)
    for o in orders:
        if not isinstance(o, int) or o < 2:
            raise MalformedFactorError(f"cyclic order must be an integer >= 2, got {o!r}")
    return diag_chain(orders)


@dataclass(frozen=True, order=False)
class AbelianFactor:
    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 0:
            raise MalformedFactorError(f"rank must be a non-negative integer, got {self.rank!r}")
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        for i, d in enumerate(t):
            if not isinstance(d, int) or d < 2:
                raise MalformedFactorError(f"invariant factor must be >= 2, got {d!r}")
            if i and d % t[i - 1]:
                raise MalformedFactorError(f"torsion {t} is not a divisibility chain")

    @classmethod
    def of(cls, rank=0, orders=()):
        """Build a factor from arbitrary cyclic orders (canonicalized)."""
        return cls(rank, tuple(canonical_torsion(orders)))

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def is_finite(self):
        return self.rank == 0

    @property
    def torsion_order(self):
        return prod(self.torsion)

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    def sort_key(self):
        return (self.rank, self.torsion)

    def __str__(self):
        from .parser import format_factor
        return format_factor(self)


Z = AbelianFactor(1)


class Presentation:
    """A normalized free product of nontrivial abelian factors in canonical order.

    Stored as runs ``(factor, multiplicity)``; the flat ``factors`` tuple is
    built on first use, since large covers produce thousands of equal factors.
    Immutable and hashable.
    """

    __slots__ = ("_runs", "_len", "_flat")

    def __init__(self, factors=()):
        runs = []
        for f, group in groupby(factors):
            n = sum(1 for _ in group)
            runs.append((f, n))
        if any(f.is_trivial for f, _ in runs):
            raise ValueError("presentation contains a trivial factor; use normalize()")
        keys = [f.sort_key() for f, _ in runs]
        if keys != sorted(set(keys), reverse=True):
            raise ValueError("presentation factors are not in canonical order; use normalize()")
        self._set(tuple(runs))

    def _set(self, runs):
        object.__setattr__(self, "_runs", runs)
        object.__setattr__(self, "_len", sum(k for _, k in runs))
        object.__setattr__(self, "_flat", None)

    @classmethod
    def _from_runs(cls, runs):
        """Trusted constructor for runs already in canonical order with distinct factors."""
        self = object.__new__(cls)
        self._set(tuple(runs))
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Presentation is immutable")

    @property
    def runs(self):
        """``(factor, multiplicity)`` pairs in canonical order."""
        return self._runs

    @property
    def factors(self):
        if self._flat is None:
            object.__setattr__(self, "_flat", tuple(chain.from_iterable(repeat(f, k) for f, k in self._runs)))
        return self._flat

    def __len__(self):
        return self._len

    def __iter__(self):
        return chain.from_iterable(repeat(f, k) for f, k in self._runs)

    def __getitem__(self, i):
        return self.factors[i]

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self._runs == other._runs

    def __hash__(self):
        return hash(self._runs)

    def __repr__(self):
        return f"Presentation({str(self)!r})"

    @property
    def is_torsion_free(self):
        return all(not f.torsion for f, _ in self._runs)

    def count(self, rank):
        """Number of factors of the given free rank."""
        return sum(k for f, k in self._runs if f.rank == rank)

    def __str__(self):
        from .parser import format_group
        return format_group(self)


def normalize_counts(pairs):
    """Presentation from ``(factor, multiplicity)`` pairs in any order, repeats allowed."""
    counts = Counter()
    for f, k in pairs:
        if k and not f.is_trivial:
            counts[f] += k
    return Presentation._from_runs((f, counts[f]) for f in sorted(counts, key=AbelianFactor.sort_key, reverse=True))


def normalize(factors):
    """Drop trivial factors and sort into canonical order.

    Accepts an iterable of :class:`AbelianFactor` (or an existing
    :class:`Presentation`); idempotent.
    """
    if isinstance(factors, Presentation):
        return factors
    # runs of one repeated object are common; merge them before hashing
    return normalize_counts((run[0], len(run)) for run in (list(g) for _, g in groupby(factors, key=id)))


def free_group(rank):
    return Presentation._from_runs(((Z, rank),) if rank else ())


def factor_chi(f):
    if f.rank:
        return Fraction(0)
    return Fraction(1, f.torsion_order)


def chi(P):
    """Rational Euler characteristic.

    Uses chi(Z^n) = 0 for n >= 1, chi(F) = 1/|F| for finite F and
    chi(A * B) = chi(A) + chi(B) - 1.
    """
    if not len(P):
        return Fraction(1)
    total = sum((k * factor_chi(f) for f, k in P.runs), Fraction(0))
    return total - (len(P) - 1)


def signature(P):
    """Set of free ranks >= 2 occurring among the factors."""
    return frozenset(f.rank for f, _ in P.runs if f.rank >= 2)


FINITE = "finite"
TWO_ENDED = "two_ended"
ONE_ENDED = "one_ended"
INF_ENDS = "inf_ends"


@dataclass(frozen=True)
class QIClass:
    """Commensurability class: finite, two-ended, one-ended Z^n, or
    infinitely-ended with a rank signature."""

    kind: str
    rank: int = 0
    signature: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "signature", frozenset(self.signature))
        if self.kind not in (FINITE, TWO_ENDED, ONE_ENDED, INF_ENDS):
            raise ValueError(f"unknown class {self.kind!r}")
        if self.kind == ONE_ENDED and self.rank < 2:
            raise ValueError("one-ended class needs rank >= 2")
        if self.kind != ONE_ENDED and self.rank:
            raise ValueError("only the one-ended class carries a rank")
        if self.kind != INF_ENDS and self.signature:
            raise ValueError("only the infinitely-ended class carries a signature")
        if any(n < 2 for n in self.signature):
            raise ValueError("signature entries must be >= 2")

    def to_json(self):
        out = {"class": self.kind}
        if self.kind == ONE_ENDED:
            out["rank"] = self.rank
        elif self.kind == INF_ENDS:
            out["signature"] = sorted(self.signature)
        return out

    def __str__(self):
        if self.kind == ONE_ENDED:
            return f"OneEnded({self.rank})"
        if self.kind == INF_ENDS:
            return "InfEnds({" + ",".join(map(str, sorted(self.signature))) + "})"
        return {FINITE: "Finite", TWO_ENDED: "TwoEnded"}[self.kind]


_DIHEDRAL = (AbelianFactor(0, (2,)), AbelianFactor(0, (2,)))


def classify(P):
    """Commensurability class of a normalized presentation.

    The rank-set signature is only a complete invariant among infinitely
    ended groups; finite, virtually-Z and one-ended groups are split off
    first.  ``Z/2 * Z/2`` is the only free product here that is virtually Z.
    """
    if len(P) == 0 or (len(P) == 1 and P[0].is_finite):
        return QIClass(FINITE)
    if len(P) == 1:
        n = P[0].rank
        return QIClass(TWO_ENDED) if n == 1 else QIClass(ONE_ENDED, rank=n)
    if P.runs == ((_DIHEDRAL[0], 2),):
        return QIClass(TWO_ENDED)
    return QIClass(INF_ENDS, signature=signature(P))


@dataclass(frozen=True)
class Decision:
    commensurable: bool
    qi: bool
    class1: QIClass
    class2: QIClass

    def to_json(self):
        return {
            "commensurable": self.commensurable,
            "qi": self.qi,
            "class1": self.class1.to_json(),
            "class2": self.class2.to_json(),
        }


def decide(P1, P2):
    c1, c2 = classify(P1), classify(P2)
    same = c1 == c2
    return Decision(same, same, c1, c2)
