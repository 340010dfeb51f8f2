"""Finitely based varieties: T-ideal quotients of free algebras at
bounded degree.

A :class:`VarietyPresentation` is a signature together with finitely many
homogeneous identities over auxiliary variables.  Over the rationals the
T-ideal of an identity equals the T-ideal of its full multilinearization,
so the engine multilinearizes every identity first.  The homogeneous
component of degree ``d`` of the T-ideal is then spanned by one-hole
contexts filled with substitution instances:

* an *instance* substitutes reduced words (of total length ``D``) for the
  variables of a multilinear identity;
* a *context* is a canonical tree of total length ``d`` whose leaves are
  generators except for exactly one hole of length ``D``; the hole sorts
  after genuine words of equal length, and filling it re-canonicalizes
  along the path.

Each level is row-reduced exactly with pivots on the *smallest* words, so
normal forms are spanned by the later (larger) words of each degree and
rewrite signs match hand computation.  A :class:`QuotientSpace` caches the
levels up to its truncation degree and provides normal forms, bases,
dimensions, left-multiplication operator matrices and a bounded Engel
probe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .freealg import (
    UNIT,
    UNKNOWN,
    AlgebraError,
    Element,
    Signature,
    TruncationError,
    Word,
    bracket,
    bracket_words,
    enumerate_reduced,
    generator,
    generator_degrees,
    hole,
    node,
    substitute,
)
from .rowreduce import RowReducer


class Identity:
    """A multihomogeneous polynomial identity over auxiliary variables.

    The element lives in a free algebra whose generators play the role of
    the variables; every term must have the same multidegree.
    """

    __slots__ = ("element", "multidegree")

    def __init__(self, element: Element):
        if element.is_zero:
            raise AlgebraError("the zero element presents no identity")
        nvars = element.sig.num_generators
        counts: tuple[int, ...] | None = None
        for w, _ in element.terms:
            degs = generator_degrees(w)
            tup = tuple(degs.get(i, 0) for i in range(1, nvars + 1))
            if counts is None:
                counts = tup
            elif counts != tup:
                raise AlgebraError("identity is not multihomogeneous")
        self.element = element
        self.multidegree = counts

    @property
    def degree(self) -> int:
        return sum(self.multidegree)

    @property
    def is_multilinear(self) -> bool:
        return all(d <= 1 for d in self.multidegree)

    def variables(self) -> tuple[int, ...]:
        """Indices of the variables that actually occur."""
        return tuple(i for i, d in enumerate(self.multidegree, 1) if d > 0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Identity) and self.element == other.element

    def __hash__(self) -> int:
        return hash(self.element)

    def __str__(self) -> str:
        return str(self.element)

    def __repr__(self) -> str:
        return f"Identity({self.element})"


def _multilinear_part(e: Element, nvars: int) -> Element:
    keep = []
    for w, c in e.terms:
        degs = generator_degrees(w)
        if all(degs.get(i, 0) == 1 for i in range(1, nvars + 1)):
            keep.append((w, c))
    return Element(e.sig, keep)


def multilinearize(ident: Identity) -> Identity:
    """Full multilinearization.

    Each variable of degree ``d`` is replaced by a sum of ``d`` fresh
    variables and the component linear in every fresh variable is kept.
    Over the rationals this generates the same T-ideal as the original
    identity; an already multilinear identity comes back unchanged.
    """
    if ident.is_multilinear:
        return ident
    sig = ident.element.sig
    total = sum(ident.multidegree)
    new_sig = Signature(sig.arity, sig.symmetric, sig.unital, total)
    fresh = [Element.from_word(new_sig, generator(j)) for j in range(1, total + 1)]
    images: dict[int, Element] = {}
    pos = 0
    for i, d in enumerate(ident.multidegree, 1):
        if d == 0:
            continue
        img = fresh[pos]
        for j in range(pos + 1, pos + d):
            img = img + fresh[j]
        images[i] = img
        pos += d
    expanded = substitute(ident.element, images)
    return Identity(_multilinear_part(expanded, total))


def partial_linearize(ident: Identity, var: int = 1) -> Identity:
    """One linearization step in a single variable.

    Substitutes ``z_var -> z_var + z_new`` (``z_new`` a fresh last
    variable) and keeps the component of degree one in ``z_new``.
    """
    d = ident.multidegree[var - 1]
    if d < 2:
        raise AlgebraError(f"variable {var} has degree {d}; nothing to linearize")
    sig = ident.element.sig
    new_sig = Signature(sig.arity, sig.symmetric, sig.unital, sig.num_generators + 1)
    fresh = Element.from_word(new_sig, generator(new_sig.num_generators))
    images = {
        i: Element.from_word(new_sig, generator(i))
        for i in range(1, sig.num_generators + 1)
    }
    images[var] = images[var] + fresh
    expanded = substitute(ident.element, images)
    keep = []
    for w, c in expanded.terms:
        if generator_degrees(w).get(new_sig.num_generators, 0) == 1:
            keep.append((w, c))
    return Identity(Element(new_sig, keep))


@dataclass(frozen=True)
class VarietyPresentation:
    """A signature with finitely many defining identities."""

    sig: Signature
    identities: tuple[Identity, ...] = ()

    def __post_init__(self) -> None:
        for ident in self.identities:
            isig = ident.element.sig
            if isig.arity != self.sig.arity:
                raise AlgebraError("identity arity differs from the variety's")
            if isig.symmetric and not self.sig.symmetric:
                raise AlgebraError("symmetric identity over a non-symmetric variety")
            if isig.unital and not self.sig.unital:
                raise AlgebraError("unital identity over a non-unital variety")


def variety(sig: Signature, *relations) -> VarietyPresentation:
    """Convenience constructor accepting elements and/or identities."""
    idents = tuple(
        r if isinstance(r, Identity) else Identity(r) for r in relations
    )
    return VarietyPresentation(sig, idents)


def default_truncation(sig: Signature) -> int:
    return 8 if sig.arity == 2 else 9


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _word_subst(sig: Signature, w: Word, images: dict[int, Word]) -> Word:
    if w.is_generator:
        return images[w.gen]
    if w.is_unit:
        return UNIT
    return bracket_words(sig, [_word_subst(sig, c, images) for c in w.children])


_INSTANCE_CACHE: dict = {}


def _instances(sig: Signature, ident: Identity, total: int) -> list[dict[Word, Fraction]]:
    """Distinct substitution instances of a multilinear identity whose
    word arguments have lengths summing to ``total``."""
    key = (sig, ident, total)
    got = _INSTANCE_CACHE.get(key)
    if got is not None:
        return got
    variables = ident.variables()
    k = len(variables)
    out: list[dict[Word, Fraction]] = []
    seen: set[frozenset] = set()
    for lengths in _compositions(total, k):
        pools = [enumerate_reduced(sig, l) for l in lengths]
        if any(not p for p in pools):
            continue
        for combo in itertools.product(*pools):
            images = dict(zip(variables, combo))
            inst: dict[Word, Fraction] = {}
            for w, c in ident.element.terms:
                nw = _word_subst(sig, w, images)
                inst[nw] = inst.get(nw, 0) + c
            inst = {w: c for w, c in inst.items() if c}
            if not inst:
                continue
            fs = frozenset(inst.items())
            if fs not in seen:
                seen.add(fs)
                out.append(inst)
    _INSTANCE_CACHE[key] = out
    return out


_CONTEXT_CACHE: dict = {}


def one_hole_contexts(sig: Signature, length: int, hole_length: int) -> tuple[Word, ...]:
    """Canonical trees of the given total length whose leaves are
    generators except for exactly one hole counted with ``hole_length``."""
    key = (sig, length, hole_length)
    got = _CONTEXT_CACHE.get(key)
    if got is not None:
        return got
    out: list[Word] = []
    if length == hole_length:
        out.append(hole(hole_length))
    if length > hole_length:
        seen: set[Word] = set()
        m = sig.arity
        for comp in _compositions(length, m):
            for s in range(m):
                subs = one_hole_contexts(sig, comp[s], hole_length)
                if not subs:
                    continue
                pools = []
                feasible = True
                for t in range(m):
                    if t == s:
                        continue
                    ws = enumerate_reduced(sig, comp[t])
                    if not ws:
                        feasible = False
                        break
                    pools.append(ws)
                if not feasible:
                    continue
                for ctx_child in subs:
                    for words in itertools.product(*pools):
                        kids = list(words[:s]) + [ctx_child] + list(words[s:])
                        if sig.symmetric:
                            kids.sort(reverse=True)
                        w = node(kids)
                        if w not in seen:
                            seen.add(w)
                            out.append(w)
    out.sort()
    result = tuple(out)
    _CONTEXT_CACHE[key] = result
    return result


def _fill(sig: Signature, ctx: Word, w: Word) -> Word:
    if ctx.is_hole:
        return w
    if ctx.is_leaf:
        return ctx
    return bracket_words(sig, [_fill(sig, c, w) for c in ctx.children])


@lru_cache(maxsize=None)
def _multilinearized(presentation: VarietyPresentation) -> tuple[Identity, ...]:
    return tuple(multilinearize(i) for i in presentation.identities)


_ROWS_CACHE: dict = {}


def relation_rows(presentation: VarietyPresentation, degree: int) -> list[dict[Word, Fraction]]:
    """Spanning rows of the degree-``degree`` component of the T-ideal,
    as sparse word-keyed vectors (deduplicated, not row-reduced)."""
    key = (presentation, degree)
    got = _ROWS_CACHE.get(key)
    if got is not None:
        return got
    sig = presentation.sig
    out: list[dict[Word, Fraction]] = []
    seen: set[frozenset] = set()
    for ident in _multilinearized(presentation):
        k = len(ident.variables())
        for total in range(k, degree + 1):
            instances = _instances(sig, ident, total)
            if not instances:
                continue
            contexts = one_hole_contexts(sig, degree, total)
            for ctx in contexts:
                for inst in instances:
                    row: dict[Word, Fraction] = {}
                    for w, c in inst.items():
                        filled = _fill(sig, ctx, w)
                        row[filled] = row.get(filled, 0) + c
                    row = {w: c for w, c in row.items() if c}
                    if not row:
                        continue
                    fs = frozenset(row.items())
                    if fs not in seen:
                        seen.add(fs)
                        out.append(row)
    _ROWS_CACHE[key] = out
    return out


def relation_space(presentation: VarietyPresentation, degree: int) -> list[Element]:
    """The spanning set of T-ideal relations at one degree, as elements."""
    return [
        Element(presentation.sig, row)
        for row in relation_rows(presentation, degree)
    ]


class _Level:
    __slots__ = ("words", "index", "reducer", "basis")

    def __init__(self, words, index, reducer, basis):
        self.words = words
        self.index = index
        self.reducer = reducer
        self.basis = basis


class QuotientSpace:
    """Degreewise normal forms modulo the T-ideal, up to a truncation.

    Create through :func:`quotient_space`, which caches instances, so
    contexts are shared across derivations and envelope computations.
    """

    def __init__(self, presentation: VarietyPresentation, truncation: int | None = None):
        self.presentation = presentation
        self.sig = presentation.sig
        self.truncation = (
            default_truncation(presentation.sig) if truncation is None else truncation
        )
        if self.truncation < 1:
            raise AlgebraError("truncation must be positive")
        self._levels: dict[int, _Level] = {}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuotientSpace)
            and self.presentation == other.presentation
            and self.truncation == other.truncation
        )

    def __hash__(self) -> int:
        return hash((self.presentation, self.truncation))

    def _level(self, degree: int) -> _Level:
        lv = self._levels.get(degree)
        if lv is None:
            if degree > self.truncation:
                raise TruncationError(
                    f"degree {degree} beyond truncation {self.truncation}"
                )
            words = enumerate_reduced(self.sig, degree)
            index = {w: j for j, w in enumerate(words)}
            reducer = RowReducer()
            for row in relation_rows(self.presentation, degree):
                reducer.add({index[w]: c for w, c in row.items()})
            pivots = set(reducer.pivot_columns())
            basis = tuple(w for j, w in enumerate(words) if j not in pivots)
            lv = self._levels[degree] = _Level(words, index, reducer, basis)
        return lv

    def dimension(self, degree: int) -> int:
        if degree == 0:
            return 1 if self.sig.unital else 0
        return len(self._level(degree).basis)

    def basis(self, degree: int) -> tuple[Word, ...]:
        """Normal-form words at one degree (non-pivot words, increasing)."""
        if degree == 0:
            return (UNIT,) if self.sig.unital else ()
        return self._level(degree).basis

    def reduce(self, a: Element) -> Element:
        """Normal form of an element; raises
        :class:`~derivalg.freealg.TruncationError` beyond the window."""
        if a.sig != self.sig:
            raise AlgebraError("element signature mismatch")
        acc: dict[Word, Fraction] = {}
        for degree, part in a.homogeneous_parts().items():
            if degree == 0:
                # no relations reach the unit's degree
                for w, c in part.terms:
                    acc[w] = acc.get(w, 0) + c
                continue
            lv = self._level(degree)
            row = {lv.index[w]: c for w, c in part.terms}
            for j, v in lv.reducer.reduce(row).items():
                w = lv.words[j]
                acc[w] = acc.get(w, 0) + v
        return Element(self.sig, acc)

    def doubled(self) -> "QuotientSpace":
        """The same variety presented on twice as many generators, used
        as the coefficient algebra for universal-derivation computations."""
        dsig = Signature(
            self.sig.arity,
            self.sig.symmetric,
            self.sig.unital,
            2 * self.sig.num_generators,
        )
        return quotient_space(
            VarietyPresentation(dsig, self.presentation.identities),
            self.truncation,
        )


@lru_cache(maxsize=None)
def quotient_space(
    presentation: VarietyPresentation, truncation: int | None = None
) -> QuotientSpace:
    """Shared, cached quotient context for a presentation."""
    return QuotientSpace(presentation, truncation)


def quotient_basis(
    presentation: VarietyPresentation, degree: int, truncation: int | None = None
) -> tuple[Word, ...]:
    return quotient_space(presentation, truncation).basis(degree)


def reduce(
    a: Element, presentation: VarietyPresentation, truncation: int | None = None
) -> Element:
    return quotient_space(presentation, truncation).reduce(a)


def left_mul_matrix(
    b: Element,
    presentation: VarietyPresentation,
    degree: int,
    truncation: int | None = None,
) -> list[list[Fraction]]:
    """Matrix of ``a -> <b, ..., b, a>`` between quotient bases.

    ``b`` must be homogeneous; the operator maps degree ``degree`` to
    ``degree + (m-1) * deg b``.  Rows are indexed by the target basis,
    columns by the source basis, both in increasing word order.
    """
    space = quotient_space(presentation, truncation)
    b = space.reduce(b)
    if b.is_zero:
        degs = [0]
    else:
        degs = b.degrees()
    if len(degs) > 1:
        raise AlgebraError("left multiplication needs a homogeneous element")
    step = (space.sig.arity - 1) * degs[0]
    source = space.basis(degree)
    target = space.basis(degree + step)
    tindex = {w: i for i, w in enumerate(target)}
    matrix = [[Fraction(0)] * len(source) for _ in target]
    for j, w in enumerate(source):
        img = space.reduce(
            bracket([b] * (space.sig.arity - 1) + [Element.from_word(space.sig, w)])
        )
        for u, c in img.terms:
            matrix[tindex[u]][j] = c
    return matrix


def mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    """Product of dense Fraction matrices (zero-row/column tolerant)."""
    if a and b and len(a[0]) != len(b):
        raise AlgebraError("matrix shape mismatch")
    cols = len(b[0]) if b else 0
    out = [[Fraction(0)] * cols for _ in a]
    for i, arow in enumerate(a):
        for k, v in enumerate(arow):
            if v:
                brow = b[k]
                orow = out[i]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += v * brow[j]
    return out


def mat_is_zero(a: list[list[Fraction]]) -> bool:
    return all(not v for row in a for v in row)


def engel_index(
    presentation: VarietyPresentation,
    bound: int = 10,
    truncation: int | None = None,
):
    """Least ``q <= bound`` such that the q-th power of left multiplication
    by the first generator vanishes on every degree the truncation lets us
    test; ``None`` when every ``q`` up to the bound fails on a computed
    degree; ``UNKNOWN`` when the window admits no test at all."""
    space = quotient_space(presentation, truncation)
    sig = space.sig
    x = Element.from_word(sig, generator(1))
    step = sig.arity - 1
    m = sig.arity
    for q in range(1, bound + 1):
        top = space.truncation - q * step
        if top < 1:
            return UNKNOWN
        vanished = True
        for d in range(1, top + 1):
            for w in space.basis(d):
                e = Element.from_word(sig, w)
                for _ in range(q):
                    e = space.reduce(bracket([x] * (m - 1) + [e]))
                    if e.is_zero:
                        break
                if not e.is_zero:
                    vanished = False
                    break
            if not vanished:
                break
        if vanished:
            return q
    return None
