"""Incidence functions on finite ordered domains.

Convolution, the order indicator zeta, the equality indicator delta, and
Mobius functions, all in exact rational arithmetic.  A function is defined
on ordered pairs (x, y) with x below y inside a fixed finite domain (an
ElementSubset or a whole finite poset); everything outside the order
relation is implicitly zero.
"""

from fractions import Fraction
from weakref import WeakKeyDictionary

from .errors import NoLeastElementError, NotMeetClosedError, PosetMismatchError
from .posets import ElementSubset, ProductLattice, product_subset

_ZERO = Fraction(0)


def _as_subset(domain):
    if isinstance(domain, ElementSubset):
        return domain
    return domain.covering_set(None)


def _domains_match(a, b):
    return a is b or (a.members == b.members and a.lattice == b.lattice)


class IncidenceFunction:
    """Rational-valued function on comparable pairs of a finite domain."""

    def __init__(self, domain, values):
        self.subset = _as_subset(domain)
        leq = self.subset.leq
        vals = {}
        for (x, y), v in values.items():
            if x not in self.subset or y not in self.subset or not leq(x, y):
                raise ValueError(f"pair ({x!r}, {y!r}) is outside the order relation")
            q = Fraction(v)
            if q:
                vals[(x, y)] = q
        self._values = vals

    def __call__(self, x, y):
        return self._values.get((x, y), _ZERO)

    def pairs(self):
        """Copy of the nonzero values, keyed by (lower, upper)."""
        return dict(self._values)

    def __eq__(self, other):
        if not isinstance(other, IncidenceFunction):
            return NotImplemented
        return _domains_match(self.subset, other.subset) and self._values == other._values

    def __repr__(self):
        return f"IncidenceFunction({len(self.subset)} elements, {len(self._values)} nonzero pairs)"


def zeta(domain):
    """Order indicator: 1 on every pair x below y."""
    s = _as_subset(domain)
    ms = s.members
    vals = {}
    for i, x in enumerate(ms):
        for y in ms[i:]:
            if s.leq(x, y):
                vals[(x, y)] = 1
    return IncidenceFunction(s, vals)


def delta(domain):
    """Equality indicator: 1 on the diagonal, 0 elsewhere."""
    s = _as_subset(domain)
    return IncidenceFunction(s, {(x, x): 1 for x in s.members})


_MOBIUS_CACHE = WeakKeyDictionary()


def mobius(domain):
    """Convolution inverse of zeta, by direct inversion over the domain.

    mu(x, x) = 1 and mu(x, y) = -sum of mu(x, z) over x <= z < y.  The
    result is cached per domain object.
    """
    try:
        cached = _MOBIUS_CACHE.get(domain)
    except TypeError:  # unexpected unhashable domain
        cached = None
    if cached is not None:
        return cached
    s = _as_subset(domain)
    ms = s.members
    n = len(ms)
    leq = s.leq
    vals = {}
    for i in range(n):
        x = ms[i]
        vals[(x, x)] = Fraction(1)
        for j in range(i + 1, n):
            y = ms[j]
            if not leq(x, y):
                continue
            total = _ZERO
            for k in range(i, j):
                z = ms[k]
                if leq(x, z) and leq(z, y):
                    total += vals.get((x, z), _ZERO)
            if total:
                vals[(x, y)] = -total
    fn = IncidenceFunction(s, vals)
    try:
        _MOBIUS_CACHE[domain] = fn
    except TypeError:
        pass
    return fn


def convolve(f, g):
    """(f * g)(x, y) = sum of f(x, z) g(z, y) over z between x and y."""
    if not _domains_match(f.subset, g.subset):
        raise PosetMismatchError("operands live on different domains")
    s = f.subset
    ms = s.members
    n = len(ms)
    leq = s.leq
    vals = {}
    for i in range(n):
        x = ms[i]
        for j in range(i, n):
            y = ms[j]
            if not leq(x, y):
                continue
            total = _ZERO
            for k in range(i, j + 1):
                z = ms[k]
                if leq(x, z) and leq(z, y):
                    total += f(x, z) * g(z, y)
            if total:
                vals[(x, y)] = total
    return IncidenceFunction(s, vals)


def mobius_of_subset(s):
    """Mobius function of a meet closed subset, by inversion within it."""
    if not s.meet_closed:
        raise NotMeetClosedError("subset is not meet closed")
    return mobius(s)


def mobius_product(mu_left, mu_right, domain=None):
    """Mobius function of a product order as the product of component values."""
    prod = product_subset([mu_left.subset, mu_right.subset])
    if domain is not None and not _domains_match(prod, _as_subset(domain)):
        raise PosetMismatchError("declared product domain does not match the factors")
    vals = {}
    for (x1, y1), v1 in mu_left.pairs().items():
        for (x2, y2), v2 in mu_right.pairs().items():
            vals[((x1, x2), (y1, y2))] = v1 * v2
    return IncidenceFunction(prod, vals)


def _require_least(s):
    bottom = s.least_member
    if bottom is None:
        raise NoLeastElementError("domain has no least member")
    return bottom


def from_point_function(domain, fn):
    """Incidence function supported on (least, x) pairs, holding fn(x) there."""
    s = _as_subset(domain)
    bottom = _require_least(s)
    return IncidenceFunction(s, {(bottom, x): Fraction(fn(x)) for x in s.members})


def mobius_invert(fr):
    """Invert a bottom-row function: returns fr * mobius on the same domain.

    Round trip: convolving the result with zeta restores fr exactly.
    """
    _require_least(fr.subset)
    return convolve(fr, mobius(fr.subset))


def ambient_mobius(lattice, x, y):
    """Mobius value of the ambient lattice between two comparable elements.

    Uses the closed form of the lattice family when it has one (divisor,
    MIN, products of those); explicit finite posets fall back to cached
    inversion over their full element set.
    """
    if isinstance(lattice, ProductLattice):
        total = Fraction(1)
        for f, a, b in zip(lattice.factors, x, y):
            v = ambient_mobius(f, a, b)
            if v == 0:
                return _ZERO
            total *= v
        return total
    closed = getattr(lattice, "ambient_mobius", None)
    if closed is not None:
        return Fraction(closed(x, y))
    return mobius(lattice)(x, y)


def mobius_subset_via_ambient(s):
    """Mobius function of a meet closed subset via ambient Mobius sums.

    Alternative route used as a cross-check oracle: the value at
    (x_i, x_j) is the sum of ambient mu(x_i, z) over ambient z below x_j
    that are not below any earlier member x_k, k < j.
    """
    if not s.meet_closed:
        raise NotMeetClosedError("subset is not meet closed")
    lattice = s.lattice
    ms = s.members
    vals = {}
    for j, xj in enumerate(ms):
        earlier = ms[:j]
        zs = [
            z
            for z in lattice.lower_set(xj)
            if not any(lattice.leq(z, xk) for xk in earlier)
        ]
        for xi in ms[: j + 1]:
            if not lattice.leq(xi, xj):
                continue
            total = _ZERO
            for z in zs:
                if lattice.leq(xi, z):
                    total += ambient_mobius(lattice, xi, z)
            if total:
                vals[(xi, xj)] = total
    return IncidenceFunction(s, vals)
