"""Group models with a solvable word problem.

Four families are supported, covering every group used in the experiments:

* finite groups given by a multiplication table (``cyclic:n`` or ``table:FILE``),
* free abelian groups ``z^n`` (integer vectors),
* free groups ``free:k`` (freely reduced words),
* free products of finite groups ``freeprod:A,B,...`` (alternating syllable words).

Elements are small immutable values carrying a canonical key, so equality of
group elements is plain key equality.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Hashable, Iterable, Sequence

from .errors import InvalidTable, ModelMismatch, ParseError

__all__ = [
    "Element",
    "GenSet",
    "GroupModel",
    "FiniteTableGroup",
    "FreeAbelianGroup",
    "FreeGroup",
    "FreeProductGroup",
    "cyclic",
    "parse_group",
    "parse_genset",
    "make_genset",
    "mul",
    "inv",
    "power_union",
    "generates_check",
]


@dataclass(frozen=True)
class Element:
    key: Hashable
    model_id: str

    def __repr__(self) -> str:
        return f"Element({self.key!r})"


class GroupModel:
    """Common interface of the group families.

    Subclasses implement the ``_mul``/``_inv`` primitives on raw keys; the
    public ``mul``/``inv`` methods add the ownership check.
    """

    model_id: str
    kind: str

    # -- primitives overridden by subclasses --------------------------------
    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def _identity_key(self):
        raise NotImplementedError

    def sort_key(self, key):
        return key

    def format_key(self, key) -> str:
        return str(key)

    def parse_atom(self, text: str) -> Element:
        raise NotImplementedError

    @property
    def order(self) -> int | None:
        return None

    # -- public API ----------------------------------------------------------
    @property
    def identity(self) -> Element:
        return Element(self._identity_key(), self.model_id)

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def element(self, key) -> Element:
        return Element(key, self.model_id)

    def check(self, *elements: Element) -> None:
        for x in elements:
            if not isinstance(x, Element) or x.model_id != self.model_id:
                raise ModelMismatch(f"{x!r} does not belong to {self.model_id}")

    def mul(self, a: Element, b: Element) -> Element:
        self.check(a, b)
        return Element(self._mul(a.key, b.key), self.model_id)

    def inv(self, a: Element) -> Element:
        self.check(a)
        return Element(self._inv(a.key), self.model_id)

    def format(self, x: Element) -> str:
        self.check(x)
        return self.format_key(x.key)

    def parse(self, text: str) -> Element:
        """Parse a word: ``*``-separated atoms multiplied left to right."""
        text = text.strip()
        if not text:
            raise ParseError("empty word")
        result = self.identity
        for part in text.split("*"):
            result = self.mul(result, self.parse_atom(part.strip()))
        return result

    @property
    def default_generators(self) -> tuple[Element, ...]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.model_id}>"


# ---------------------------------------------------------------------------
# finite groups
# ---------------------------------------------------------------------------


class FiniteTableGroup(GroupModel):
    """Finite group on ``0..n-1`` given by its multiplication table."""

    kind = "finite-table"

    def __init__(self, table: Sequence[Sequence[int]], model_id: str | None = None):
        table = [list(map(int, row)) for row in table]
        n = len(table)
        if n == 0:
            raise InvalidTable("table is empty")
        if any(len(row) != n for row in table):
            raise InvalidTable("table is not square")
        full = set(range(n))
        for row in table:
            if set(row) != full:
                raise InvalidTable("table rows are not permutations of 0..n-1")
        for c in range(n):
            if {table[r][c] for r in range(n)} != full:
                raise InvalidTable("table columns are not permutations of 0..n-1")
        ident = [e for e in range(n) if table[e] == list(range(n))]
        if not ident or any(table[x][ident[0]] != x for x in range(n)):
            raise InvalidTable("no two-sided identity")
        e = ident[0]
        # associativity is cubic; tables of the size used here are small
        if n <= 64:
            for a, b, c in product(range(n), repeat=3):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise InvalidTable(f"not associative at ({a},{b},{c})")
        self.table = tuple(tuple(row) for row in table)
        self.n = n
        self._e = e
        self._inverse = tuple(table[a].index(e) for a in range(n))
        self.model_id = model_id or f"table[{n}]"
        self._gens: tuple[Element, ...] | None = None

    @property
    def order(self) -> int:
        return self.n

    def _identity_key(self):
        return self._e

    def _mul(self, a, b):
        return self.table[a][b]

    def _inv(self, a):
        return self._inverse[a]

    def elements(self) -> list[Element]:
        return [Element(k, self.model_id) for k in range(self.n)]

    def closure(self, keys: Iterable[int]) -> set[int]:
        keys = list(keys)
        seen = {self._e}
        queue = deque([self._e])
        while queue:
            x = queue.popleft()
            for s in keys:
                for y in (self.table[x][s], self.table[x][self._inverse[s]]):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
        return seen

    @property
    def default_generators(self) -> tuple[Element, ...]:
        # greedy: smallest element not yet generated
        if self._gens is None:
            chosen: list[int] = []
            span = {self._e}
            for x in range(self.n):
                if x not in span:
                    chosen.append(x)
                    span = self.closure(chosen)
            self._gens = tuple(Element(x, self.model_id) for x in chosen)
        return self._gens

    def parse_atom(self, text: str) -> Element:
        try:
            k = int(text)
        except ValueError:
            raise ParseError(f"{self.model_id}: expected an element index, got {text!r}") from None
        if not 0 <= k < self.n:
            raise ParseError(f"{self.model_id}: element {k} out of range")
        return Element(k, self.model_id)


def cyclic(n: int) -> FiniteTableGroup:
    if n < 1:
        raise ParseError("cyclic group order must be positive")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteTableGroup(table, model_id=f"cyclic:{n}")


# ---------------------------------------------------------------------------
# free abelian groups
# ---------------------------------------------------------------------------

_BASIS_TOKEN = re.compile(r"(-?)e(\d+)(?:\^\(?(-?\d+)\)?|(⁻¹))?")


class FreeAbelianGroup(GroupModel):
    kind = "free-abelian"

    def __init__(self, rank: int):
        if rank < 1:
            raise ParseError("rank must be positive")
        self.rank = rank
        self.model_id = f"z^{rank}"

    def _identity_key(self):
        return (0,) * self.rank

    def _mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _inv(self, a):
        return tuple(-x for x in a)

    def sort_key(self, key):
        return (sum(abs(x) for x in key), key)

    def format_key(self, key) -> str:
        return "(" + ",".join(str(x) for x in key) + ")"

    def basis(self, i: int) -> Element:
        v = [0] * self.rank
        v[i] = 1
        return Element(tuple(v), self.model_id)

    @property
    def default_generators(self) -> tuple[Element, ...]:
        return tuple(self.basis(i) for i in range(self.rank))

    def parse_atom(self, text: str) -> Element:
        text = text.replace(" ", "")
        if text.startswith("(") and text.endswith(")"):
            try:
                vec = tuple(int(x) for x in text[1:-1].split(","))
            except ValueError:
                raise ParseError(f"bad vector {text!r}") from None
            if len(vec) != self.rank:
                raise ParseError(f"vector {text!r} does not have rank {self.rank}")
            return Element(vec, self.model_id)
        if re.fullmatch(r"-?\d+", text):
            if self.rank != 1:
                raise ParseError(f"bare integer {text!r} only valid in z^1")
            return Element((int(text),), self.model_id)
        vec = [0] * self.rank
        pos = 0
        while pos < len(text):
            m = _BASIS_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"cannot parse {text!r} at offset {pos}")
            sign = -1 if m.group(1) else 1
            i = int(m.group(2)) - 1
            if not 0 <= i < self.rank:
                raise ParseError(f"basis vector e{i + 1} not in z^{self.rank}")
            exp = -1 if m.group(4) else int(m.group(3) or 1)
            vec[i] += sign * exp
            pos = m.end()
        return Element(tuple(vec), self.model_id)


# ---------------------------------------------------------------------------
# free groups
# ---------------------------------------------------------------------------

_LETTER_TOKEN = re.compile(r"([A-Za-z])(?:\^\(?(-?\d+)\)?|(⁻¹))?")


def _letter_exponent(m: re.Match) -> int:
    if m.group(3):
        return -1
    return int(m.group(2)) if m.group(2) is not None else 1


class FreeGroup(GroupModel):
    """Free group on ``rank`` letters ``a, b, ...``.

    Keys are tuples of nonzero ints: ``+k`` is the k-th letter (1-based),
    ``-k`` its inverse. Upper-case letters parse as inverses.
    """

    kind = "free"

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise ParseError("free group rank must be between 1 and 26")
        self.rank = rank
        self.model_id = f"free:{rank}"

    def _identity_key(self):
        return ()

    @staticmethod
    def reduce(letters: Iterable[int]) -> tuple[int, ...]:
        out: list[int] = []
        for x in letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def _mul(self, a, b):
        # both inputs are reduced, so cancellation only happens at the seam
        i = 0
        while i < len(a) and i < len(b) and a[-1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def _inv(self, a):
        return tuple(-x for x in reversed(a))

    def sort_key(self, key):
        return (len(key), tuple((abs(x), x < 0) for x in key))

    def format_key(self, key) -> str:
        if not key:
            return "1"
        parts = []
        for x in key:
            letter = chr(ord("a") + abs(x) - 1)
            parts.append(letter if x > 0 else letter + "^-1")
        return "".join(parts)

    @property
    def default_generators(self) -> tuple[Element, ...]:
        return tuple(Element((k,), self.model_id) for k in range(1, self.rank + 1))

    def parse_atom(self, text: str) -> Element:
        text = text.replace(" ", "")
        if text == "1":
            return self.identity
        letters: list[int] = []
        pos = 0
        while pos < len(text):
            m = _LETTER_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"cannot parse {text!r} at offset {pos}")
            ch = m.group(1)
            k = ord(ch.lower()) - ord("a") + 1
            if k > self.rank:
                raise ParseError(f"letter {ch!r} not in free group of rank {self.rank}")
            sign = -1 if ch.isupper() else 1
            exp = _letter_exponent(m)
            letters.extend([sign * k if exp > 0 else -sign * k] * abs(exp))
            pos = m.end()
        return Element(self.reduce(letters), self.model_id)


# ---------------------------------------------------------------------------
# free products of finite groups
# ---------------------------------------------------------------------------

_SYLLABLE_TOKEN = re.compile(r"\[(\d+):(\d+)\]")


class FreeProductGroup(GroupModel):
    """Free product of finite table groups.

    Keys are tuples of syllables ``(factor, x)`` with ``x`` a non-identity
    element of that factor and adjacent syllables from different factors.
    Letters ``a, b, ...`` name the factors' default generators in order;
    ``[f:x]`` names element ``x`` of factor ``f`` directly.
    """

    kind = "free-product-of-finite"

    def __init__(self, factors: Sequence[FiniteTableGroup], model_id: str | None = None):
        if len(factors) < 1:
            raise ParseError("free product needs at least one factor")
        self.factors = tuple(factors)
        self.model_id = model_id or "freeprod:" + ",".join(f.model_id for f in self.factors)
        self._letters: list[tuple[int, int]] = []
        for f, grp in enumerate(self.factors):
            for g in grp.default_generators:
                self._letters.append((f, g.key))
        if len(self._letters) > 26:
            raise ParseError("too many factor generators to name with letters")

    def _identity_key(self):
        return ()

    def _mul(self, a, b):
        left = list(a)
        i = 0
        while left and i < len(b):
            f, x = left[-1]
            g, y = b[i]
            if f != g:
                break
            z = self.factors[f]._mul(x, y)
            left.pop()
            i += 1
            if z != self.factors[f]._identity_key():
                left.append((f, z))
                break
        return tuple(left) + tuple(b[i:])

    def _inv(self, a):
        return tuple((f, self.factors[f]._inv(x)) for f, x in reversed(a))

    def sort_key(self, key):
        return (len(key), key)

    def syllable(self, factor: int, x: int) -> Element:
        grp = self.factors[factor]
        if x == grp._identity_key():
            return self.identity
        return Element(((factor, x),), self.model_id)

    def format_key(self, key) -> str:
        if not key:
            return "1"
        parts = []
        for f, x in key:
            try:
                parts.append(chr(ord("a") + self._letters.index((f, x))))
            except ValueError:
                parts.append(f"[{f}:{x}]")
        return "".join(parts)

    @property
    def default_generators(self) -> tuple[Element, ...]:
        return tuple(self.syllable(f, x) for f, x in self._letters)

    def parse_atom(self, text: str) -> Element:
        text = text.replace(" ", "")
        if text == "1":
            return self.identity
        result = self.identity
        pos = 0
        while pos < len(text):
            m = _SYLLABLE_TOKEN.match(text, pos)
            if m:
                f, x = int(m.group(1)), int(m.group(2))
                if f >= len(self.factors) or not 0 <= x < self.factors[f].n:
                    raise ParseError(f"syllable {m.group(0)} out of range")
                result = self.mul(result, self.syllable(f, x))
                pos = m.end()
                continue
            m = _LETTER_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"cannot parse {text!r} at offset {pos}")
            ch = m.group(1)
            k = ord(ch.lower()) - ord("a")
            if k >= len(self._letters):
                raise ParseError(f"letter {ch!r} does not name a factor generator")
            gen = self.syllable(*self._letters[k])
            exp = _letter_exponent(m) * (-1 if ch.isupper() else 1)
            step = gen if exp > 0 else self.inv(gen)
            for _ in range(abs(exp)):
                result = self.mul(result, step)
            pos = m.end()
        return result


# ---------------------------------------------------------------------------
# group spec strings
# ---------------------------------------------------------------------------


def _parse_finite(spec: str) -> FiniteTableGroup:
    if spec.startswith("cyclic:"):
        try:
            return cyclic(int(spec[len("cyclic:"):]))
        except ValueError:
            raise ParseError(f"bad cyclic order in {spec!r}") from None
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        try:
            table = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read table {path}: {exc}") from None
        return FiniteTableGroup(table, model_id=spec)
    raise ParseError(f"not a finite group spec: {spec!r}")


def parse_group(spec: str) -> GroupModel:
    """Build a model from ``cyclic:n``, ``table:FILE``, ``z^n``, ``free:k`` or ``freeprod:...``."""
    spec = spec.strip()
    if spec.startswith(("cyclic:", "table:")):
        return _parse_finite(spec)
    m = re.fullmatch(r"z(?:\^(\d+))?", spec, flags=re.IGNORECASE)
    if m:
        return FreeAbelianGroup(int(m.group(1) or 1))
    if spec.startswith("free:"):
        try:
            return FreeGroup(int(spec[len("free:"):]))
        except ValueError:
            raise ParseError(f"bad free group rank in {spec!r}") from None
    if spec.startswith("freeprod:"):
        body = spec[len("freeprod:"):]
        factors = [_parse_finite(part) for part in body.split(",") if part]
        return FreeProductGroup(factors, model_id=spec)
    raise ParseError(f"unknown group spec {spec!r}")


# ---------------------------------------------------------------------------
# generating sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenSet:
    """Symmetrized, identity-free generating set, sorted by canonical key."""

    model_id: str
    elements: tuple[Element, ...]
    source_words: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._keyset

    @property
    def _keyset(self) -> frozenset:
        cached = self.__dict__.get("_keys")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_keys", cached)
        return cached


def make_genset(model: GroupModel, elements: Iterable[Element], source_words: Sequence[str] = ()) -> GenSet:
    found: set[Element] = set()
    for x in elements:
        model.check(x)
        found.add(x)
        found.add(model.inv(x))
    found.discard(model.identity)
    ordered = tuple(sorted(found, key=lambda x: model.sort_key(x.key)))
    return GenSet(model.model_id, ordered, tuple(source_words))


def _split_words(text: str) -> list[str]:
    # commas inside parentheses or brackets belong to vectors
    words, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            words.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    words.append("".join(cur))
    return [w.strip() for w in words if w.strip()]


def parse_genset(model: GroupModel, text: str | None) -> GenSet:
    """Parse a comma-separated generator list; ``None`` or ``default`` gives the defaults.

    ``all`` (finite models only) selects every non-identity element.
    """
    if text is None or text.strip() in ("", "default"):
        gens = model.default_generators
        return make_genset(model, gens, [model.format(g) for g in gens])
    if text.strip() == "all":
        if not isinstance(model, FiniteTableGroup):
            raise ParseError("'all' is only available for finite groups")
        return make_genset(model, model.elements(), ["all"])
    words = _split_words(text)
    return make_genset(model, [model.parse(w) for w in words], words)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def mul(model: GroupModel, a: Element, b: Element) -> Element:
    return model.mul(a, b)


def inv(model: GroupModel, a: Element) -> Element:
    return model.inv(a)


def power_union(model: GroupModel, gens: GenSet, k: int) -> GenSet:
    """All products of 1 to ``k`` generators, symmetrized, without the identity."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if gens.model_id != model.model_id:
        raise ModelMismatch(f"generating set belongs to {gens.model_id}, not {model.model_id}")
    everything = set(gens.elements)
    layer = set(gens.elements)
    for _ in range(k - 1):
        layer = {model.mul(x, s) for x in layer for s in gens.elements}
        everything |= layer
    words = tuple(f"({w})^<={k}" for w in gens.source_words) if gens.source_words else ()
    return make_genset(model, everything, words)


def generates_check(model: GroupModel, gens: GenSet, radius: int) -> str:
    """Return ``"generates"``, ``"generates-at-least-defaults"`` or ``"unknown"``.

    Finite models are decided exactly by closure; for infinite models the
    check only confirms that every default generator has ``gens``-length at
    most ``radius``.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if gens.model_id != model.model_id:
        raise ModelMismatch(f"generating set belongs to {gens.model_id}, not {model.model_id}")
    if isinstance(model, FiniteTableGroup):
        span = model.closure(x.key for x in gens.elements)
        return "generates" if len(span) == model.order else "unknown"
    targets = set(model.default_generators)
    seen = {model.identity}
    frontier = [model.identity]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in gens.elements:
                y = model.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if targets <= seen:
            return "generates-at-least-defaults"
    return "unknown"
