"""Finite posets, meet semilattices, and the divisor/MIN lattice families.

Explicit posets are stored as cover edges plus per-element reachability
bitsets, so order queries are O(1) after construction.  The divisor and
MIN lattices on the positive integers are never materialized: they answer
order, meet, and lower-set queries directly and hand out finite lower
closed covering grids ({1..m} and its powers) on request.
"""

from __future__ import annotations

import heapq
import math
import os
from functools import cached_property, lru_cache
from itertools import product as iter_product

from .errors import (
    AmbientNotEnumerableError,
    CycleError,
    DuplicateElementError,
    NotASemilatticeError,
)
from .intfun import divisors, mobius_int


class Poset:
    """Finite poset over opaque element ids, built from Hasse cover edges."""

    kind = "explicit"

    def __init__(self, elements, cover_edges=()):
        elems = list(elements)
        if not elems:
            raise ValueError("a poset needs at least one element")
        index = {}
        for e in elems:
            if e in index:
                raise DuplicateElementError(f"duplicate element {e!r}")
            index[e] = len(index)
        self.elements = tuple(elems)
        self._index = index
        edges = []
        for a, b in cover_edges:
            if a not in index or b not in index:
                raise ValueError(f"cover edge ({a!r}, {b!r}) references an unknown element")
            if a == b:
                raise CycleError(f"self-loop on {a!r}")
            edges.append((a, b))
        self.cover_edges = tuple(edges)
        self._down = self._reachability()
        self.least = self._find_least()
        self._covering = None

    def _reachability(self):
        n = len(self.elements)
        succ = [[] for _ in range(n)]
        indeg = [0] * n
        for a, b in self.cover_edges:
            succ[self._index[a]].append(self._index[b])
            indeg[self._index[b]] += 1
        down = [1 << i for i in range(n)]
        ready = [i for i in range(n) if indeg[i] == 0]
        seen = 0
        while ready:
            i = ready.pop()
            seen += 1
            for j in succ[i]:
                down[j] |= down[i]
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if seen != n:
            raise CycleError("cover edges contain a cycle")
        return down

    def _find_least(self):
        minimal = [i for i, mask in enumerate(self._down) if mask == 1 << i]
        if len(minimal) == 1:
            return self.elements[minimal[0]]
        return None

    def leq(self, x, y):
        """True when x is below or equal to y."""
        return (self._down[self._index[y]] >> self._index[x]) & 1 == 1

    def contains(self, x):
        return x in self._index

    def lower_set(self, x):
        mask = self._down[self._index[x]]
        return [e for i, e in enumerate(self.elements) if (mask >> i) & 1]

    def covering_set(self, bound=None):
        """The whole element set; a finite poset is its own covering."""
        if self._covering is None:
            self._covering = ElementSubset(self, self.elements)
        return self._covering

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Poset({len(self.elements)} elements, {len(self.cover_edges)} covers)"


def build_poset(elements, cover_edges=()):
    """Validated poset from element ids and Hasse cover edges."""
    return Poset(elements, cover_edges)


class MeetSemilattice:
    """Explicit finite meet semilattice: a poset plus its total meet table.

    Construction fails with NotASemilatticeError as soon as some pair of
    elements has no greatest lower bound.
    """

    kind = "explicit"

    def __init__(self, poset):
        self.poset = poset
        n = len(poset.elements)
        down = poset._down
        table = {}
        for i in range(n):
            for j in range(i, n):
                common = down[i] & down[j]
                m = -1
                probe = common
                while probe:
                    low = probe & -probe
                    k = low.bit_length() - 1
                    if down[k] & common == common:
                        m = k
                        break
                    probe ^= low
                if m < 0:
                    raise NotASemilatticeError(
                        f"elements {poset.elements[i]!r} and {poset.elements[j]!r} have no meet"
                    )
                table[(i, j)] = m
        self._table = table
        self._covering = None

    @property
    def elements(self):
        return self.poset.elements

    @property
    def least(self):
        return self.poset.least

    def leq(self, x, y):
        return self.poset.leq(x, y)

    def contains(self, x):
        return self.poset.contains(x)

    def lower_set(self, x):
        return self.poset.lower_set(x)

    def meet(self, x, y):
        i = self.poset._index[x]
        j = self.poset._index[y]
        if i > j:
            i, j = j, i
        return self.elements[self._table[(i, j)]]

    def covering_set(self, bound=None):
        if self._covering is None:
            self._covering = ElementSubset(self, self.elements)
        return self._covering

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"MeetSemilattice({len(self.elements)} elements)"


class DivisorLattice:
    """Positive integers under divisibility; meet is gcd, least element 1."""

    kind = "divisor"
    least = 1

    def __init__(self):
        self._covers = {}

    def leq(self, x, y):
        return y % x == 0

    def meet(self, x, y):
        return math.gcd(x, y)

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x >= 1

    def lower_set(self, x):
        return list(divisors(x))

    def covering_set(self, bound):
        if bound not in self._covers:
            self._covers[bound] = ElementSubset(self, range(1, bound + 1), _presorted=True)
        return self._covers[bound]

    def ambient_mobius(self, x, y):
        return mobius_int(y // x) if y % x == 0 else 0

    def __eq__(self, other):
        return isinstance(other, DivisorLattice)

    def __hash__(self):
        return hash(DivisorLattice)

    def __repr__(self):
        return "DivisorLattice()"


class MinLattice:
    """Positive integers under <=; meet is min, least element 1."""

    kind = "min"
    least = 1

    def __init__(self):
        self._covers = {}

    def leq(self, x, y):
        return x <= y

    def meet(self, x, y):
        return min(x, y)

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x >= 1

    def lower_set(self, x):
        return list(range(1, x + 1))

    def covering_set(self, bound):
        if bound not in self._covers:
            self._covers[bound] = ElementSubset(self, range(1, bound + 1), _presorted=True)
        return self._covers[bound]

    def ambient_mobius(self, x, y):
        # chain: 1 on the diagonal, -1 one step up, 0 beyond
        if y == x:
            return 1
        if y == x + 1:
            return -1
        return 0

    def __eq__(self, other):
        return isinstance(other, MinLattice)

    def __hash__(self):
        return hash(MinLattice)

    def __repr__(self):
        return "MinLattice()"


class ProductLattice:
    """Cartesian product of meet semilattices under the componentwise order.

    Elements are tuples; the meet is taken componentwise, which is the
    greatest lower bound for the product order.
    """

    kind = "product"

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a product needs at least one factor")
        self.factors = factors
        leasts = [getattr(f, "least", None) for f in factors]
        self.least = tuple(leasts) if all(v is not None for v in leasts) else None
        self._covers = {}

    @property
    def arity(self):
        return len(self.factors)

    def leq(self, x, y):
        return all(f.leq(a, b) for f, a, b in zip(self.factors, x, y))

    def meet(self, x, y):
        return tuple(f.meet(a, b) for f, a, b in zip(self.factors, x, y))

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(f.contains(c) for f, c in zip(self.factors, x))
        )

    def lower_set(self, x):
        parts = []
        for f, c in zip(self.factors, x):
            lower = getattr(f, "lower_set", None)
            if lower is None:
                raise AmbientNotEnumerableError(f"factor {f!r} cannot enumerate lower sets")
            parts.append(lower(c))
        return [tuple(t) for t in iter_product(*parts)]

    def covering_set(self, bound):
        if bound not in self._covers:
            self._covers[bound] = product_subset([f.covering_set(bound) for f in self.factors])
        return self._covers[bound]

    def __eq__(self, other):
        return isinstance(other, ProductLattice) and self.factors == other.factors

    def __hash__(self):
        return hash((ProductLattice, self.factors))

    def __repr__(self):
        return f"ProductLattice({list(self.factors)!r})"


@lru_cache(maxsize=None)
def divisor_lattice(d=1):
    """The divisor lattice, or its d-fold product with tuple elements."""
    if d == 1:
        return DivisorLattice()
    return ProductLattice((divisor_lattice(1),) * d)


@lru_cache(maxsize=None)
def min_lattice(d=1):
    """The MIN lattice, or its d-fold product with tuple elements."""
    if d == 1:
        return MinLattice()
    return ProductLattice((min_lattice(1),) * d)


def product_lattice(factors):
    """Product semilattice; a single factor is returned unchanged."""
    factors = list(factors)
    if len(factors) == 1:
        return factors[0]
    return ProductLattice(factors)


def linear_extension(lattice, members):
    """Stable topological order of the members.

    x comes before y whenever x is strictly below y; incomparable members
    keep the order in which they were given.
    """
    xs = list(members)
    n = len(xs)
    npred = [0] * n
    succs = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and lattice.leq(xs[i], xs[j]):
                npred[j] += 1
                succs[i].append(j)
    heap = [i for i in range(n) if npred[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        i = heapq.heappop(heap)
        out.append(xs[i])
        for j in succs[i]:
            npred[j] -= 1
            if npred[j] == 0:
                heapq.heappush(heap, j)
    if len(out) != n:
        raise CycleError("order relation on the members is cyclic")
    return out


class ElementSubset:
    """Ordered finite subset of a lattice.

    Members are kept in a stable linear extension of the lattice order:
    if x_i is below x_j then i <= j, and incomparable members keep their
    input order.  Subsets are immutable once built.
    """

    def __init__(self, lattice, members, _presorted=False, factor_subsets=None):
        xs = list(members)
        if not xs:
            raise ValueError("subset must be nonempty")
        seen = set()
        for x in xs:
            if x in seen:
                raise DuplicateElementError(f"duplicate member {x!r}")
            seen.add(x)
            if not lattice.contains(x):
                raise ValueError(f"{x!r} is not an element of the lattice")
        self.lattice = lattice
        self.members = tuple(xs if _presorted else linear_extension(lattice, xs))
        self.factor_subsets = factor_subsets
        self._pos = {x: i for i, x in enumerate(self.members)}

    def index(self, x):
        return self._pos[x]

    def leq(self, x, y):
        return self.lattice.leq(x, y)

    def meet(self, x, y):
        meet = getattr(self.lattice, "meet", None)
        if meet is None:
            raise NotASemilatticeError("parent poset has no meet operation")
        return meet(x, y)

    @cached_property
    def meet_closed(self):
        ms = self.members
        for i, x in enumerate(ms):
            for y in ms[i + 1:]:
                if self.meet(x, y) not in self._pos:
                    return False
        return True

    @cached_property
    def lower_closed(self):
        lower = getattr(self.lattice, "lower_set", None)
        if lower is None:
            raise AmbientNotEnumerableError("ambient lattice cannot enumerate lower sets")
        for x in self.members:
            for z in lower(x):
                if z not in self._pos:
                    return False
        return True

    @property
    def least_member(self):
        """The member below every other member, or None."""
        m0 = self.members[0]
        if all(self.leq(m0, x) for x in self.members):
            return m0
        return None

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return x in self._pos

    def __repr__(self):
        shown = list(self.members[:6])
        tail = ", ..." if len(self.members) > 6 else ""
        return f"ElementSubset({shown}{tail})"


def subset(lattice, members):
    """Ordered subset of a lattice (stable linear-extension order)."""
    return ElementSubset(lattice, members)


def is_meet_closed(s):
    return s.meet_closed


def is_lower_closed(s):
    return s.lower_closed


def meet_closure(s):
    """Smallest meet closed superset, as a new ordered subset."""
    items = list(s.members)
    have = set(items)
    changed = True
    while changed:
        changed = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                m = s.meet(items[i], items[j])
                if m not in have:
                    items.append(m)
                    have.add(m)
                    changed = True
    return ElementSubset(s.lattice, items)


def lower_closure(s):
    """Smallest lower closed superset, as a new ordered subset."""
    lower = getattr(s.lattice, "lower_set", None)
    if lower is None:
        raise AmbientNotEnumerableError("ambient lattice cannot enumerate lower sets")
    items = list(s.members)
    have = set(items)
    for x in s.members:
        for z in lower(x):
            if z not in have:
                items.append(z)
                have.add(z)
    return ElementSubset(s.lattice, items)


def product_subset(subsets):
    """Cartesian product subset in lexicographic order of the factors.

    The lexicographic order of linear extensions is itself a linear
    extension of the product order, so the members can be taken as given.
    """
    subsets = list(subsets)
    if not subsets:
        raise ValueError("need at least one factor subset")
    if len(subsets) == 1:
        return subsets[0]
    lattice = ProductLattice([s.lattice for s in subsets])
    members = [tuple(c) for c in iter_product(*(s.members for s in subsets))]
    return ElementSubset(lattice, members, _presorted=True, factor_subsets=tuple(subsets))


def load_hasse(source):
    """Parse a lattice description.

    Line format: ``elem ID``, ``edge LOWER UPPER``, comments starting with
    ``#``.  Alternatively a single ``family divisor d=2`` (or ``family min
    d=1``) line names an implicit integer family.  Returns a
    MeetSemilattice for an explicit description, or the named family.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    else:
        lines = list(source)

    elements = []
    edges = []
    family = None
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elem" and len(parts) == 2:
            elements.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        elif parts[0] == "family" and len(parts) >= 2:
            if family is not None:
                raise ValueError("multiple family declarations")
            d = 1
            for opt in parts[2:]:
                key, _, value = opt.partition("=")
                if key != "d":
                    raise ValueError(f"unknown family option {opt!r}")
                d = int(value)
            if d < 1:
                raise ValueError("family arity must be at least 1")
            if parts[1] == "divisor":
                family = divisor_lattice(d)
            elif parts[1] == "min":
                family = min_lattice(d)
            else:
                raise ValueError(f"unknown family {parts[1]!r}")
        else:
            raise ValueError(f"cannot parse line: {raw.rstrip()}")

    if family is not None:
        if elements or edges:
            raise ValueError("family declarations cannot be mixed with elem/edge records")
        return family
    return MeetSemilattice(build_poset(elements, edges))
