"""Small number-theoretic helpers shared by the lattice and arithmetic layers.

A smallest-prime-factor sieve is grown on demand; everything here is desk
scale (n up to about 10**5).
"""

from functools import lru_cache

_spf = [0, 1]  # smallest prime factor; _spf[1] = 1 by convention


def _grow_sieve(limit):
    global _spf
    if limit < len(_spf):
        return
    size = max(limit + 1, 2 * len(_spf))
    spf = list(range(size))
    p = 2
    while p * p < size:
        if spf[p] == p:
            for q in range(p * p, size, p):
                if spf[q] == q:
                    spf[q] = p
        p += 1
    _spf = spf


def factorize(n):
    """Prime factorization as a dict prime -> exponent."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    _grow_sieve(n)
    out = {}
    while n > 1:
        p = _spf[n]
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


@lru_cache(maxsize=None)
def divisors(n):
    """Sorted tuple of the positive divisors of n."""
    ds = [1]
    for p, k in factorize(n).items():
        ds = [d * p ** e for d in ds for e in range(k + 1)]
    return tuple(sorted(ds))


def mobius_int(n):
    """Classical Mobius function: (-1)**m on squarefree products of m primes."""
    result = 1
    for _, k in factorize(n).items():
        if k > 1:
            return 0
        result = -result
    return result
