"""Singer perfect difference sets and Sidon/B_h[g] analysis of integer supports.

A Singer set is a subset of Z/qZ, q = p^2 + p + 1 with p prime, of size
p + 1 in which every nonzero residue mod q occurs exactly once as a
difference of two elements.  The construction realizes GF(p^3) as
GF(p)[x]/(f) for a monic primitive cubic f (so that x generates the
multiplicative group) and collects the exponents i, reduced mod q, for
which x^i lies in the plane spanned by 1 and x.  The raw set depends on
the cubic chosen; the returned set is canonicalized to the
lexicographically least among its q translates, which always starts at 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from decimal import Decimal, getcontext
from typing import Iterable, Mapping

from flatlab import _backend
from flatlab.errors import LimitExceeded, NotPrime, OutOfRange

#: Largest prime accepted by :func:`singer_set`.  The exponent scan is
#: O(p^3); 500 keeps worst-case construction around a second.
MAX_PRIME = 500


# ---------------------------------------------------------------------------
# small number theory helpers

def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (intended range is small)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# supports

def as_support(elements: Iterable[int]) -> tuple[int, ...]:
    """Validate and canonicalize a support set (strictly increasing, >= 0)."""
    sup = tuple(sorted(set(int(e) for e in elements)))
    if sup and sup[0] < 0:
        raise OutOfRange(f"support elements must be nonnegative, got {sup[0]}")
    return sup


@dataclass(frozen=True)
class DifferenceStats:
    """Multiplicities of the positive differences of a support set.

    ``multiplicities[d]`` counts ordered pairs (i, j), i < j, with
    s_j - s_i = d.  ``distinct`` is the number of distinct positive
    differences and ``max_multiplicity`` their largest count (0 for
    supports of size < 2).  The counts always satisfy
    sum(multiplicities.values()) == n(n-1)/2.
    """

    multiplicities: Mapping[int, int]
    distinct: int
    max_multiplicity: int


@dataclass(frozen=True)
class CubicFieldContext:
    """Internal record of the field realization used by the construction."""

    p: int
    modulus: tuple[int, int, int]  # monic x^3 + a x^2 + b x + c as (a, b, c)
    generator: str = "x"


@dataclass(frozen=True)
class SingerSet:
    """A canonical perfect difference set mod q = p^2 + p + 1."""

    p: int
    q: int
    residues: tuple[int, ...]
    field: CubicFieldContext


# ---------------------------------------------------------------------------
# construction

def _poly_mult_mod(u, v, tail, p):
    # coefficient triples (c0, c1, c2); x^3 reduces to tail
    w = [0] * 5
    for i in range(3):
        if u[i]:
            for j in range(3):
                w[i + j] = (w[i + j] + u[i] * v[j]) % p
    for deg in (4, 3):
        c = w[deg]
        if c:
            w[deg] = 0
            for j in range(3):
                w[deg - 3 + j] = (w[deg - 3 + j] + c * tail[j]) % p
    return (w[0], w[1], w[2])


def _poly_pow(base, e, tail, p):
    result = (1, 0, 0)
    while e:
        if e & 1:
            result = _poly_mult_mod(result, base, tail, p)
        base = _poly_mult_mod(base, base, tail, p)
        e >>= 1
    return result


def _find_primitive_cubic(p: int) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """First monic cubic (lexicographic in (a, b, c)) that is irreducible
    over GF(p) with x of multiplicative order exactly p^3 - 1.

    Returns ((a, b, c), tail) where tail holds x^3 = tail0 + tail1*x + tail2*x^2.
    """
    order = p ** 3 - 1
    cofactors = [order // r for r in _prime_factors(order)]
    for a in range(p):
        for b in range(p):
            for c in range(p):
                # a cubic is irreducible iff it has no root in GF(p)
                if any((((t * t + a * t + b) * t + c) % p) == 0 for t in range(p)):
                    continue
                tail = ((-c) % p, (-b) % p, (-a) % p)
                if all(_poly_pow((0, 1, 0), e, tail, p) != (1, 0, 0)
                       for e in cofactors):
                    return (a, b, c), tail
    raise RuntimeError(f"no primitive cubic over GF({p})")  # unreachable for prime p


def _lex_least_translate(residues: Iterable[int], q: int) -> tuple[int, ...]:
    # the lex-least translate must contain 0, so only |S| shifts are candidates
    base = sorted(residues)
    best = None
    for s in base:
        cand = tuple(sorted((r - s) % q for r in base))
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best


def singer_set(p: int) -> SingerSet:
    """Construct the canonical Singer perfect difference set for prime p.

    Raises NotPrime for composite p and LimitExceeded above MAX_PRIME.
    The result is verified exhaustively before being returned; the
    algebra is never trusted silently.
    """
    p = int(p)
    if not is_prime(p):
        raise NotPrime(f"p must be prime, got {p}")
    if p > MAX_PRIME:
        raise LimitExceeded(f"p={p} exceeds the supported limit {MAX_PRIME}")
    q = p * p + p + 1
    (a, b, c), tail = _find_primitive_cubic(p)
    raw = _backend.singer_exponent_scan(p, tail[0], tail[1], tail[2], q)
    residues = _lex_least_translate((int(r) for r in raw), q)
    if len(residues) != p + 1 or not verify_perfect_difference_set(residues, q):
        raise RuntimeError(f"construction self-check failed for p={p}")
    return SingerSet(p=p, q=q, residues=residues,
                     field=CubicFieldContext(p=p, modulus=(a, b, c)))


# ---------------------------------------------------------------------------
# verification and structure analysis

def verify_perfect_difference_set(elements: Iterable[int], q: int) -> bool:
    """True iff every nonzero residue mod q is an ordered difference of the
    elements exactly once.  Integer arithmetic only."""
    els = [int(e) for e in elements]
    for e in els:
        if not 0 <= e < q:
            raise OutOfRange(f"element {e} outside [0, {q})")
    seen = set()
    for x, y in itertools.permutations(els, 2):
        d = (x - y) % q
        if d == 0 or d in seen:
            return False
        seen.add(d)
    return len(seen) == q - 1


def difference_stats(elements: Iterable[int]) -> DifferenceStats:
    """Count the positive differences of a support with multiplicity."""
    sup = as_support(elements)
    mult: dict[int, int] = {}
    for i, j in itertools.combinations(range(len(sup)), 2):
        d = sup[j] - sup[i]
        mult[d] = mult.get(d, 0) + 1
    return DifferenceStats(
        multiplicities=dict(sorted(mult.items())),
        distinct=len(mult),
        max_multiplicity=max(mult.values()) if mult else 0,
    )


def is_sidon(elements: Iterable[int]) -> bool:
    """True iff all pairwise sums s + t (s <= t) are distinct, equivalently
    all positive differences are distinct."""
    sup = as_support(elements)
    stats = difference_stats(sup)
    return stats.max_multiplicity <= 1


def is_bhg(elements: Iterable[int], h: int, g: int) -> bool:
    """True iff every integer has at most g representations as a sum of h
    elements of the support, counted up to permutation."""
    if h < 2 or g < 1:
        raise OutOfRange(f"need h >= 2 and g >= 1, got h={h}, g={g}")
    sup = as_support(elements)
    counts: dict[int, int] = {}
    for combo in itertools.combinations_with_replacement(sup, h):
        s = sum(combo)
        counts[s] = counts.get(s, 0) + 1
        if counts[s] > g:
            return False
    return True


def lindstrom_bound_check(elements: Iterable[int], H: int) -> bool:
    """True iff |S| < sqrt(H) + H^(1/4) + 1 for S contained in [0, H].

    Evaluated with 50-digit decimals so boundary cases (H a perfect
    fourth power) are classified exactly.
    """
    sup = as_support(elements)
    for e in sup:
        if e > H:
            raise OutOfRange(f"element {e} exceeds H={H}")
    getcontext().prec = 50
    root = Decimal(H).sqrt()
    fourth = root.sqrt()
    return Decimal(len(sup)) < root + fourth + 1
