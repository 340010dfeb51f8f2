"""Exact free m-ary algebras: tree words and rational linear combinations.

A :class:`Signature` fixes an arity ``m >= 2``, whether the bracket is
symmetric (invariant under every permutation of its arguments), whether a
unit element is adjoined (binary case only) and the number of free
generators.  A :class:`Word` is a rooted tree whose leaves are generators
``x1..xn`` (or the unit) and whose internal nodes carry exactly ``m``
children.  Symmetric words are kept canonical by sorting children in
non-increasing word order, and the unit is absorbed into brackets, so
structural equality of canonical words is algebra equality and every
computation stays exact over ``Fraction`` coefficients.

The word order is total: shorter words first, generators by index, nodes
lexicographically by their children.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


class AlgebraError(Exception):
    """Domain error: malformed word, mismatched signature, bad argument."""


class ArityError(AlgebraError):
    """A bracket does not carry exactly the signature's number of arguments."""


class TruncationError(AlgebraError):
    """A computation needed degrees beyond a truncated quotient's window."""


class _Unknown:
    __slots__ = ()

    def __repr__(self) -> str:
        return "unknown"

    def __bool__(self) -> bool:
        return False


#: Sentinel returned by bounded searches that a truncation cut short:
#: the property could neither be confirmed nor refuted inside the window.
UNKNOWN = _Unknown()


@dataclass(frozen=True)
class Signature:
    """Shape of a free algebra: arity, symmetry, unit, generator count."""

    arity: int = 2
    symmetric: bool = True
    unital: bool = False
    num_generators: int = 1

    def __post_init__(self) -> None:
        if self.arity < 2:
            raise AlgebraError("arity must be at least 2")
        if self.unital and self.arity != 2:
            raise AlgebraError("a unit is only supported in the binary case")
        if self.num_generators < 1:
            raise AlgebraError("need at least one generator")


_NODE = -1
_HOLE = -2


class Word:
    """Immutable tree word.

    Instances are interned: build them through :func:`generator`,
    :data:`UNIT` and :func:`node`, never directly.  Raw (non-canonical)
    trees are accepted only by :func:`normalize`; every other operation
    expects canonical input.  ``key`` is a total-order sort key that also
    encodes the full tree, so key equality is structural equality.
    """

    __slots__ = ("gen", "children", "length", "key", "_hash")

    def __init__(self, gen: int, children: tuple["Word", ...], length: int, key: tuple):
        self.gen = gen
        self.children = children
        self.length = length
        self.key = key
        self._hash = hash(key)

    @property
    def is_unit(self) -> bool:
        return self.gen == 0

    @property
    def is_generator(self) -> bool:
        return self.gen > 0

    @property
    def is_node(self) -> bool:
        return self.gen == _NODE

    @property
    def is_hole(self) -> bool:
        return self.gen == _HOLE

    @property
    def is_leaf(self) -> bool:
        return self.gen != _NODE

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Word) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return self.key < other.key

    def __le__(self, other: "Word") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "Word") -> bool:
        return self.key > other.key

    def __ge__(self, other: "Word") -> bool:
        return self.key >= other.key

    def __str__(self) -> str:
        if self.is_unit:
            return "1"
        if self.is_generator:
            return f"x{self.gen}"
        if self.is_hole:
            return f"<hole:{self.length}>"
        return "(" + " ".join(str(c) for c in self.children) + ")"

    def __repr__(self) -> str:
        return str(self)


UNIT = Word(0, (), 0, (0, 0))

_GEN_CACHE: dict[int, Word] = {}
_NODE_CACHE: dict[tuple, Word] = {}
_HOLE_CACHE: dict[int, Word] = {}


def generator(i: int) -> Word:
    """The generator leaf ``x_i`` (indices are 1-based)."""
    w = _GEN_CACHE.get(i)
    if w is None:
        if i < 1:
            raise AlgebraError("generator indices are 1-based")
        w = _GEN_CACHE[i] = Word(i, (), 1, (1, 0, i))
    return w


def node(children: Iterable[Word]) -> Word:
    """A bracket node over the given children, without canonicalization."""
    tup = tuple(children)
    w = _NODE_CACHE.get(tup)
    if w is None:
        length = sum(c.length for c in tup)
        key = (length, 1) + tuple(c.key for c in tup)
        w = _NODE_CACHE[tup] = Word(_NODE, tup, length, key)
    return w


def hole(length: int) -> Word:
    """A placeholder leaf of prescribed length.

    Used when enumerating one-hole contexts; it sorts strictly after every
    genuine word of the same length, and :func:`normalize` rejects it.
    """
    w = _HOLE_CACHE.get(length)
    if w is None:
        if length < 1:
            raise AlgebraError("hole length must be positive")
        w = _HOLE_CACHE[length] = Word(_HOLE, (), length, (length, 2))
    return w


def compare_words(u: Word, v: Word) -> int:
    """Total order on canonical words; returns -1, 0 or 1.

    Shorter words come first, generators compare by index, nodes compare
    lexicographically by their (already sorted) children.
    """
    if u.key == v.key:
        return 0
    return -1 if u.key < v.key else 1


def bracket_words(sig: Signature, children: Sequence[Word]) -> Word:
    """Canonical bracket of canonical words: absorbs the unit, sorts
    symmetric children non-increasingly."""
    if len(children) != sig.arity:
        raise ArityError(
            f"bracket of {len(children)} arguments in arity {sig.arity}"
        )
    if sig.unital:
        if children[0].is_unit:
            return children[1]
        if children[1].is_unit:
            return children[0]
    if sig.symmetric:
        children = sorted(children, reverse=True)
    return node(children)


def normalize(sig: Signature, w: Word) -> Word:
    """Canonical form of a raw tree.

    Validates leaf indices and node arities against the signature, absorbs
    unit children (binary unital case) and sorts the children of symmetric
    nodes.  Idempotent on canonical words.
    """
    if w.is_generator:
        if w.gen > sig.num_generators:
            raise AlgebraError(f"generator x{w.gen} outside signature")
        return w
    if w.is_unit:
        if not sig.unital:
            raise AlgebraError("unit in a non-unital signature")
        return w
    if w.is_hole:
        raise AlgebraError("a hole placeholder is not an algebra word")
    if len(w.children) != sig.arity:
        raise ArityError(
            f"node with {len(w.children)} children in arity {sig.arity}"
        )
    return bracket_words(sig, [normalize(sig, c) for c in w.children])


def is_canonical(sig: Signature, w: Word) -> bool:
    """Whether ``w`` is already in the canonical form of ``sig``."""
    if w.is_generator:
        return w.gen <= sig.num_generators
    if w.is_unit:
        return sig.unital
    if w.is_hole or len(w.children) != sig.arity:
        return False
    if any(c.is_unit for c in w.children):
        return False
    if sig.symmetric:
        kids = w.children
        if any(kids[i] < kids[i + 1] for i in range(len(kids) - 1)):
            return False
    return all(is_canonical(sig, c) for c in w.children)


def format_linear(items: Iterable[tuple[str, Fraction]]) -> str:
    """Render ``(text, coefficient)`` pairs as a signed sum.

    Unit coefficients are suppressed, the first sign attaches without a
    space, and an empty sum renders as ``0``.
    """
    chunks: list[str] = []
    for text, c in items:
        mag = abs(c)
        body = text if mag == 1 else f"{mag}*{text}"
        if not chunks:
            chunks.append(f"-{body}" if c < 0 else body)
        else:
            chunks.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(chunks) if chunks else "0"


class Element:
    """A finite rational linear combination of canonical words.

    Terms are stored as an association tuple sorted in increasing word
    order, which makes equality, hashing and printing deterministic.
    Supports addition, subtraction, scalar multiplication and (in the
    binary case) ``a * b`` as the bracket.
    """

    __slots__ = ("sig", "terms")

    def __init__(self, sig: Signature, data: Mapping[Word, object] | Iterable = ()):
        items = data.items() if isinstance(data, Mapping) else data
        acc: dict[Word, Fraction] = {}
        for w, c in items:
            c = Fraction(c)
            if c:
                prev = acc.get(w)
                total = c if prev is None else prev + c
                if total:
                    acc[w] = total
                elif prev is not None:
                    del acc[w]
        self.sig = sig
        self.terms = tuple(sorted(acc.items(), key=lambda t: t[0].key))

    @classmethod
    def zero(cls, sig: Signature) -> "Element":
        return cls(sig)

    @classmethod
    def from_word(cls, sig: Signature, w: Word, coeff=1) -> "Element":
        return cls(sig, [(w, coeff)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w: Word) -> Fraction:
        for u, c in self.terms:
            if u == w:
                return c
        return Fraction(0)

    def support(self) -> tuple[Word, ...]:
        return tuple(w for w, _ in self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "Element") -> None:
        if self.sig != other.sig:
            raise AlgebraError("mixed signatures")

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms:
            acc[w] = acc.get(w, 0) + c
        return Element(self.sig, acc)

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms:
            acc[w] = acc.get(w, 0) - c
        return Element(self.sig, acc)

    def __neg__(self) -> "Element":
        return Element(self.sig, [(w, -c) for w, c in self.terms])

    def scale(self, c) -> "Element":
        c = Fraction(c)
        if not c:
            return Element(self.sig)
        return Element(self.sig, [(w, c * k) for w, k in self.terms])

    def __rmul__(self, c) -> "Element":
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Element):
            if self.sig.arity != 2:
                raise ArityError("a * b is binary; use bracket() for m > 2")
            return bracket([self, other])
        return NotImplemented

    def __truediv__(self, c) -> "Element":
        return self.scale(Fraction(1, 1) / Fraction(c))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Element)
            and self.sig == other.sig
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.sig, self.terms))

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({w.length for w, _ in self.terms}))

    def degree_part(self, d: int) -> "Element":
        return Element(self.sig, [(w, c) for w, c in self.terms if w.length == d])

    def homogeneous_parts(self) -> dict[int, "Element"]:
        return {d: self.degree_part(d) for d in self.degrees()}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __str__(self) -> str:
        return format_linear((str(w), c) for w, c in reversed(self.terms))

    def __repr__(self) -> str:
        return str(self)


def generators(sig: Signature) -> tuple[Element, ...]:
    """The generators of the free algebra, as elements."""
    return tuple(
        Element.from_word(sig, generator(i))
        for i in range(1, sig.num_generators + 1)
    )


def unit_element(sig: Signature) -> Element:
    if not sig.unital:
        raise AlgebraError("unit in a non-unital signature")
    return Element.from_word(sig, UNIT)


def bracket(args: Sequence[Element]) -> Element:
    """The m-linear bracket of m elements (canonical result)."""
    if not args:
        raise ArityError("empty bracket")
    sig = args[0].sig
    for a in args[1:]:
        if a.sig != sig:
            raise AlgebraError("mixed signatures in bracket")
    if len(args) != sig.arity:
        raise ArityError(f"bracket of {len(args)} arguments in arity {sig.arity}")
    acc: dict[Word, Fraction] = {}
    for combo in itertools.product(*(a.terms for a in args)):
        w = bracket_words(sig, [t[0] for t in combo])
        c = combo[0][1]
        for t in combo[1:]:
            c = c * t[1]
        acc[w] = acc.get(w, 0) + c
    return Element(sig, acc)


_ENUM_CACHE: dict[tuple[Signature, int], tuple[Word, ...]] = {}


def enumerate_reduced(sig: Signature, length: int) -> tuple[Word, ...]:
    """All canonical words of the given length, in increasing word order.

    Lengths that no word of the signature can attain (for instance even
    lengths when m = 3, or 0 in the non-unital case) give the empty tuple.
    """
    key = (sig, length)
    cached = _ENUM_CACHE.get(key)
    if cached is None:
        cached = _ENUM_CACHE[key] = tuple(sorted(_enumerate(sig, length)))
    return cached


def _enumerate(sig: Signature, length: int) -> list[Word]:
    if length < 0:
        return []
    if length == 0:
        return [UNIT] if sig.unital else []
    if length == 1:
        return [generator(i) for i in range(1, sig.num_generators + 1)]
    m = sig.arity
    out: list[Word] = []
    if sig.symmetric:
        # children in non-increasing order, so each tuple is canonical
        def rec(bound: Word | None, slots: int, budget: int):
            if slots == 0:
                if budget == 0:
                    yield ()
                return
            for l in range(1, budget - slots + 2):
                for w in enumerate_reduced(sig, l):
                    if bound is not None and bound < w:
                        break
                    for rest in rec(w, slots - 1, budget - l):
                        yield (w,) + rest

        for tup in rec(None, m, length):
            out.append(node(tup))
    else:
        def rec(slots: int, budget: int):
            if slots == 0:
                if budget == 0:
                    yield ()
                return
            for l in range(1, budget - slots + 2):
                for w in enumerate_reduced(sig, l):
                    for rest in rec(slots - 1, budget - l):
                        yield (w,) + rest

        for tup in rec(m, length):
            out.append(node(tup))
    return out


def substitute(template: Element, images: Mapping[int, Element]) -> Element:
    """Evaluate a template word-by-word, sending generator ``i`` to
    ``images[i]``.

    The images fix the target signature (their arity must agree with the
    template's); every generator occurring in the template must be
    assigned.  A symmetric template may not be evaluated in a
    non-symmetric target, where its canonical representative would be an
    arbitrary choice.
    """
    if not images:
        raise AlgebraError("empty assignment")
    vals = list(images.values())
    target = vals[0].sig
    for v in vals[1:]:
        if v.sig != target:
            raise AlgebraError("mixed signatures in assignment")
    if target.arity != template.sig.arity:
        raise AlgebraError("arity mismatch between template and images")
    if template.sig.symmetric and not target.symmetric:
        raise AlgebraError("symmetric template over a non-symmetric target")

    cache: dict[Word, Element] = {}

    def ev(w: Word) -> Element:
        got = cache.get(w)
        if got is None:
            if w.is_generator:
                try:
                    got = images[w.gen]
                except KeyError:
                    raise AlgebraError(f"unassigned variable x{w.gen}") from None
            elif w.is_unit:
                got = unit_element(target)
            else:
                got = bracket([ev(c) for c in w.children])
            cache[w] = got
        return got

    acc: dict[Word, Fraction] = {}
    for w, c in template.terms:
        for u, k in ev(w).terms:
            acc[u] = acc.get(u, 0) + c * k
    return Element(target, acc)


def generator_degrees(w: Word) -> dict[int, int]:
    """Leaf multiplicities of a word: generator index -> occurrence count."""
    counts: dict[int, int] = {}
    stack = [w]
    while stack:
        u = stack.pop()
        if u.is_generator:
            counts[u.gen] = counts.get(u.gen, 0) + 1
        elif u.is_node:
            stack.extend(u.children)
    return counts
