"""Program states: stacks over a declared variable set and finite heaps.

All types are immutable values; every operation returns fresh objects.
Heap locations are positive naturals (0 is the null pointer and never a
valid location), contents are naturals.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Tuple

from .errors import LimitError, NotAllocated, OverlapError, UnknownVariable

DEFAULT_PARTITION_LIMIT = 20


class Stack:
    """Total map from a finite declared variable set to natural values."""

    __slots__ = ("_b", "_hash")

    def __init__(self, bindings: Dict[str, int]):
        for x, v in bindings.items():
            if v < 0:
                raise ValueError(f"stack value for {x} must be a natural")
        self._b = dict(bindings)
        self._hash = None

    def read(self, x: str) -> int:
        try:
            return self._b[x]
        except KeyError:
            raise UnknownVariable(f"variable {x!r} is not declared") from None

    def write(self, x: str, v: int) -> "Stack":
        if x not in self._b:
            raise UnknownVariable(f"variable {x!r} is not declared")
        if v < 0:
            raise ValueError("stack values are naturals")
        out = Stack.__new__(Stack)
        b = dict(self._b)
        b[x] = v
        out._b = b
        out._hash = None
        return out

    def bind(self, x: str, v: int) -> "Stack":
        """Extend (or shadow) with a quantifier-bound variable."""
        out = Stack.__new__(Stack)
        b = dict(self._b)
        b[x] = v
        out._b = b
        out._hash = None
        return out

    def variables(self) -> Iterable[str]:
        return self._b.keys()

    def __contains__(self, x: str) -> bool:
        return x in self._b

    def items(self):
        return self._b.items()

    def __eq__(self, other):
        return isinstance(other, Stack) and self._b == other._b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._b.items()))
        return self._hash

    def __repr__(self):
        inner = ",".join(f"{k}={v}" for k, v in sorted(self._b.items()))
        return "{" + inner + "}"


class Heap:
    """Finite partial map from positive locations to natural values."""

    __slots__ = ("_c", "_hash")

    def __init__(self, cells: Dict[int, int] | None = None):
        cells = dict(cells) if cells else {}
        for loc, v in cells.items():
            if loc <= 0:
                raise ValueError("0 is the null pointer, not a location")
            if v < 0:
                raise ValueError("heap contents are naturals")
        self._c = cells
        self._hash = None

    @staticmethod
    def empty() -> "Heap":
        return _EMPTY_HEAP

    def domain(self):
        return self._c.keys()

    def size(self) -> int:
        return len(self._c)

    def contains(self, loc: int) -> bool:
        return loc in self._c

    def read(self, loc: int) -> int:
        try:
            return self._c[loc]
        except KeyError:
            raise NotAllocated(f"location {loc} is not allocated") from None

    def write(self, loc: int, v: int) -> "Heap":
        if loc not in self._c:
            raise NotAllocated(f"location {loc} is not allocated")
        c = dict(self._c)
        c[loc] = v
        return _make(c)

    def remove(self, loc: int) -> "Heap":
        if loc not in self._c:
            raise NotAllocated(f"location {loc} is not allocated")
        c = dict(self._c)
        del c[loc]
        return _make(c)

    def disjoint(self, other: "Heap") -> bool:
        small, big = (self._c, other._c) if len(self._c) <= len(other._c) else (other._c, self._c)
        return not any(loc in big for loc in small)

    def union(self, other: "Heap") -> "Heap":
        if not self.disjoint(other):
            raise OverlapError("heap domains intersect; union is undefined")
        c = dict(self._c)
        c.update(other._c)
        return _make(c)

    def restrict(self, locs) -> "Heap":
        return _make({l: self._c[l] for l in locs})

    def without(self, locs) -> "Heap":
        drop = set(locs)
        return _make({l: v for l, v in self._c.items() if l not in drop})

    def cells(self) -> Dict[int, int]:
        return dict(self._c)

    def partitions(self, limit: int = DEFAULT_PARTITION_LIMIT) -> Iterator[Tuple["Heap", "Heap"]]:
        """All 2^n ordered splits (h1, h2) with h1 * h2 = self."""
        locs = sorted(self._c)
        n = len(locs)
        if n > limit:
            raise LimitError(f"heap has {n} cells; partition limit is {limit}")
        for mask in range(1 << n):
            left = {}
            right = {}
            for i, loc in enumerate(locs):
                (left if mask >> i & 1 else right)[loc] = self._c[loc]
            yield _make(left), _make(right)

    def __eq__(self, other):
        return isinstance(other, Heap) and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{l}->{v}" for l, v in sorted(self._c.items()))
        return "[" + inner + "]"


def _make(cells: Dict[int, int]) -> Heap:
    h = Heap.__new__(Heap)
    h._c = cells
    h._hash = None
    return h


_EMPTY_HEAP = Heap({})


class ProgState:
    """A stack-heap pair."""

    __slots__ = ("stack", "heap", "_hash")

    def __init__(self, stack: Stack, heap: Heap):
        self.stack = stack
        self.heap = heap
        self._hash = None

    def with_stack(self, stack: Stack) -> "ProgState":
        return ProgState(stack, self.heap)

    def with_heap(self, heap: Heap) -> "ProgState":
        return ProgState(self.stack, heap)

    def __eq__(self, other):
        return (
            isinstance(other, ProgState)
            and self.stack == other.stack
            and self.heap == other.heap
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.stack, self.heap))
        return self._hash

    def __repr__(self):
        return f"({self.stack!r}; {self.heap!r})"


def make_state(bindings: Dict[str, int] | None = None, cells: Dict[int, int] | None = None,
               declared: Iterable[str] = ()) -> ProgState:
    """Build a state; variables in `declared` but not in `bindings` default to 0."""
    b = dict(bindings or {})
    for x in declared:
        b.setdefault(x, 0)
    return ProgState(Stack(b), Heap(cells or {}))


# Spec-facing functional aliases.

def heap_disjoint(h1: Heap, h2: Heap) -> bool:
    return h1.disjoint(h2)


def heap_union(h1: Heap, h2: Heap) -> Heap:
    return h1.union(h2)


def heap_partitions(h: Heap, limit: int = DEFAULT_PARTITION_LIMIT):
    return h.partitions(limit)


def stack_write(s: Stack, x: str, v: int) -> Stack:
    return s.write(x, v)


def heap_write(h: Heap, loc: int, v: int) -> Heap:
    return h.write(loc, v)


def heap_remove(h: Heap, loc: int) -> Heap:
    return h.remove(loc)
