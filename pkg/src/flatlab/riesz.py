"""Dissociation analysis, rank-one spectral polynomials, dilation selection,
exact partial products of squared moduli, and Mahler-measure products.

All coefficient arithmetic in this module is exact: squared-modulus
expansions of uniform-support factors have rational coefficients, and the
partial products convolve Fraction dictionaries.  Floats appear only at
reporting boundaries (Mahler measures, grids).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from flatlab.errors import BudgetExceeded, InvalidFactor, InvalidParams
from flatlab.trigpoly import (DEFAULT_QUADRATURE, QuadratureConfig, TrigPoly,
                              mahler_jensen, mahler_measure,
                              squared_modulus_expansion)

#: partial products refuse to expand past this many stored coefficients
TERM_CAP = 5_000_000

#: dissociation checks refuse formal expansions past this many combinations
COMBINATION_CAP = 2_000_000


@dataclass(frozen=True)
class RankOneParams:
    """Cutting and spacer parameters.

    ``cuts[k]`` = m_k >= 2 pieces at stage k; ``spacers[k]`` holds the
    m_k - 1 spacer counts above the first m_k - 1 columns.  A spacer list
    of length m_k whose final entry is 0 is accepted and trimmed (a
    nonzero final entry only shifts the next height and must be expressed
    at the next level, so it is rejected).
    """

    cuts: tuple[int, ...]
    spacers: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.cuts) != len(self.spacers):
            raise InvalidParams("need one spacer list per cut")
        trimmed = []
        for k, (m, sp) in enumerate(zip(self.cuts, self.spacers)):
            if m < 2:
                raise InvalidParams(f"cut m_{k}={m}; every stage must cut into >= 2 columns")
            sp = tuple(int(a) for a in sp)
            if any(a < 0 for a in sp):
                raise InvalidParams(f"negative spacer at stage {k}")
            if len(sp) == m and sp[-1] == 0:
                sp = sp[:-1]
            if len(sp) != m - 1:
                raise InvalidParams(
                    f"stage {k} needs {m - 1} spacers (got {len(sp)}); a nonzero "
                    "final-column spacer must be expressed at the next level")
            trimmed.append(sp)
        object.__setattr__(self, "cuts", tuple(int(m) for m in self.cuts))
        object.__setattr__(self, "spacers", tuple(trimmed))

    @classmethod
    def constant(cls, m: int, levels: int) -> "RankOneParams":
        """m-fold cutting with no spacers at every stage."""
        return cls(cuts=(m,) * levels, spacers=(((0,) * (m - 1)),) * levels)


def heights(params: RankOneParams) -> list[int]:
    """Stack heights h_0 = 1, h_{k+1} = m_k h_k + sum(spacers[k])."""
    h = [1]
    for m, sp in zip(params.cuts, params.spacers):
        h.append(m * h[-1] + sum(sp))
    return h


def rank_one_polynomials(params: RankOneParams, levels: int) -> list[TrigPoly]:
    """Spectral factors P_k(z) = (1/sqrt(m_k)) (1 + sum_j z^{-(j h_k + s_j)})
    where s_j is the partial spacer sum a_1 + ... + a_j at stage k."""
    if levels > len(params.cuts):
        raise InvalidParams(f"levels={levels} exceeds {len(params.cuts)} stages")
    hs = heights(params)
    out = []
    for k in range(levels):
        m, sp = params.cuts[k], params.spacers[k]
        exps = [0]
        acc = 0
        for j in range(1, m):
            acc += sp[j - 1] if j - 1 < len(sp) else 0
            exps.append(-(j * hs[k] + acc))
        out.append(TrigPoly.from_support(exps, normalize=True))
    return out


# ---------------------------------------------------------------------------
# dissociation

@dataclass(frozen=True)
class DissociationResult:
    is_dissociated: bool
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...], int]]
    # witness: two distinct frequency choices (one per factor) with equal sums


def dissociation(factors: Sequence[tuple[TrigPoly, int]],
                 cap: int = COMBINATION_CAP) -> DissociationResult:
    """Check that all formal term combinations of prod_j P_j(z^{N_j}) land
    on distinct total powers (computed exactly over the signed supports).

    The first collision found is reported as a witness.
    """
    supports = []
    count = 1
    for poly, dilation in factors:
        if dilation < 1:
            raise InvalidParams(f"dilation must be >= 1, got {dilation}")
        sup = tuple(f * dilation for f in poly.frequencies)
        if not sup:
            raise InvalidFactor("empty factor")
        supports.append(sup)
        count *= len(sup)
        if count > cap:
            raise BudgetExceeded(f"formal expansion has {count} combinations (cap {cap})")
    seen: dict[int, tuple[int, ...]] = {}
    for combo in itertools.product(*supports):
        total = sum(combo)
        if total in seen:
            return DissociationResult(False, (seen[total], combo, total))
        seen[total] = combo
    return DissociationResult(True, None)


# ---------------------------------------------------------------------------
# dynamical-origin dilations

@dataclass(frozen=True)
class RieszFactor:
    poly: TrigPoly
    dilation: int

    def __post_init__(self):
        if self.dilation < 1:
            raise InvalidParams(f"dilation must be >= 1, got {self.dilation}")
        if self.poly.l2_norm_sq_exact() != 1:
            raise InvalidFactor("factor polynomials must have exact unit L2 norm")
        if 0 not in self.poly.coeffs:
            raise InvalidFactor("factor polynomials need a nonzero constant term")


@dataclass(frozen=True)
class RieszProductSpec:
    """Ordered dilated factors with the derived height sequence."""

    factors: tuple[RieszFactor, ...]
    heights: tuple[int, ...]
    dynamical: bool                  # exponent/height constraints satisfied
    vanishing_top_product: bool      # |top coefficient| < 1 for every factor


def _dilated_exponents(factor: RieszFactor) -> list[int]:
    return [f * factor.dilation for f in factor.poly.frequencies]


def validate_dynamical_origin(spec: RieszProductSpec) -> tuple[bool, str]:
    """Recompute the height recursion and check the exponent constraints
    (first exponent and consecutive gaps at level j all >= h_{j-1})."""
    h = 1
    for j, factor in enumerate(spec.factors, start=1):
        exps = _dilated_exponents(factor)
        if exps[0] != 0:
            return False, f"factor {j} is not analytic with constant term"
        if len(exps) < 2:
            return False, f"factor {j} is constant"
        gaps = [exps[i + 1] - exps[i] for i in range(len(exps) - 1)]
        if exps[1] < h:
            return False, f"factor {j}: first exponent {exps[1]} < height {h}"
        for i, g in enumerate(gaps):
            if g < h:
                return False, f"factor {j}: gap {g} at position {i} < height {h}"
        h = exps[-1] + h
    return True, "ok"


def spec_from_factors(polys: Sequence[TrigPoly],
                      dilations: Sequence[int]) -> RieszProductSpec:
    """Assemble a product spec from explicit dilations, deriving heights
    and the dynamical/vanishing flags."""
    if len(polys) != len(dilations):
        raise InvalidParams("need one dilation per factor")
    factors = tuple(RieszFactor(poly=p, dilation=int(n))
                    for p, n in zip(polys, dilations))
    hs = [1]
    tops_vanish = True
    for factor in factors:
        exps = _dilated_exponents(factor)
        hs.append(exps[-1] + hs[-1])
        top = factor.poly.coeffs[factor.poly.frequencies[-1]]
        if (abs(complex(top)) ** 2 if not isinstance(top, Fraction)
                else top * top) == 1:
            tops_vanish = False
    spec = RieszProductSpec(factors=factors, heights=tuple(hs),
                            dynamical=False, vanishing_top_product=tops_vanish)
    ok, _ = validate_dynamical_origin(spec)
    return RieszProductSpec(factors=factors, heights=tuple(hs),
                            dynamical=ok and tops_vanish,
                            vanishing_top_product=tops_vanish)


def dynamical_origin_dilations(polys: Sequence[TrigPoly]) -> RieszProductSpec:
    """Choose each dilation N_j as the least positive integer meeting the
    exponent/height constraints (first exponent and gaps >= h_{j-1}, with
    h_j = top dilated exponent + h_{j-1}, h_0 = 1).

    Factors must be analytic with a nonzero constant term and exact unit
    L2 norm; factors whose top coefficient has modulus 1 are admitted but
    mark the product as non-dynamical (their infinite top-coefficient
    product cannot vanish).
    """
    factors = []
    hs = [1]
    tops_vanish = True
    for poly in polys:
        freqs = poly.frequencies
        if not freqs or freqs[0] != 0 or poly.coeffs.get(0, 0) == 0:
            raise InvalidFactor("factors must be analytic with nonzero constant term")
        if len(freqs) < 2:
            raise InvalidFactor("constant factors admit no dissociating dilation")
        if any(f < 0 for f in freqs):
            raise InvalidFactor("factors must have nonnegative exponents "
                                "(reflect z -> 1/z first; |P|^2 is unchanged)")
        gaps = [freqs[i + 1] - freqs[i] for i in range(len(freqs) - 1)]
        min_gap = min(min(gaps), freqs[1])
        h_prev = hs[-1]
        dilation = -(-h_prev // min_gap)  # ceil division
        factors.append(RieszFactor(poly=poly, dilation=dilation))
        hs.append(freqs[-1] * dilation + h_prev)
        top = poly.coeffs[freqs[-1]]
        top_mod_sq = (top * top if isinstance(top, Fraction)
                      else abs(complex(top)) ** 2)
        if top_mod_sq == 1:
            tops_vanish = False
    spec = RieszProductSpec(factors=tuple(factors), heights=tuple(hs),
                            dynamical=True, vanishing_top_product=tops_vanish)
    ok, reason = validate_dynamical_origin(spec)
    if not ok:
        raise RuntimeError(f"dilation selection self-check failed: {reason}")
    if not tops_vanish:
        spec = RieszProductSpec(factors=spec.factors, heights=spec.heights,
                                dynamical=False, vanishing_top_product=False)
    return spec


# ---------------------------------------------------------------------------
# exact partial products

def _exact_sq_modulus(factor: RieszFactor) -> dict[int, Fraction]:
    """Exact |P(z^N)|^2 coefficients as a Fraction dict."""
    poly = factor.poly
    if poly.uniform_support is not None:
        expansion = squared_modulus_expansion(poly)
    elif poly.is_exact:
        expansion = poly.multiply(poly.conjugate_reflect())
    else:
        raise InvalidFactor("exact products need uniform-support or rational factors")
    return {f * factor.dilation: Fraction(c)
            for f, c in expansion.coeffs.items()}


def partial_product(spec: RieszProductSpec, K: int,
                    cap: int = TERM_CAP) -> TrigPoly:
    """Exact Fourier coefficients of prod_{j<=K} |P_j(z^{N_j})|^2 by
    iterated convolution in rational arithmetic."""
    if K < 0 or K > len(spec.factors):
        raise InvalidParams(f"K={K} outside 0..{len(spec.factors)}")
    acc: dict[int, Fraction] = {0: Fraction(1)}
    for factor in spec.factors[:K]:
        nxt = _exact_sq_modulus(factor)
        if len(acc) * len(nxt) > cap:
            raise BudgetExceeded(
                f"projected {len(acc) * len(nxt)} coefficients exceed cap {cap}")
        out: dict[int, Fraction] = {}
        for f1, c1 in acc.items():
            for f2, c2 in nxt.items():
                f = f1 + f2
                prev = out.get(f)
                out[f] = c1 * c2 if prev is None else prev + c1 * c2
        acc = {f: c for f, c in out.items() if c != 0}
        if len(acc) > cap:
            raise BudgetExceeded(f"{len(acc)} coefficients exceed cap {cap}")
    return TrigPoly(acc)


def mahler_product(spec: RieszProductSpec, K: int,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                   method: str = "jensen") -> float:
    """prod_{j<=K} M(P_j^2).  Dilation leaves the Mahler measure invariant,
    so each factor is measured undilated.  The root-product form is exact
    for the factor degrees used here; quadrature is available for
    cross-checks."""
    if K < 0 or K > len(spec.factors):
        raise InvalidParams(f"K={K} outside 0..{len(spec.factors)}")
    out = 1.0
    for factor in spec.factors[:K]:
        if method == "jensen":
            m = mahler_jensen(factor.poly)
        elif method == "quadrature":
            m = mahler_measure(factor.poly, cfg).value
        else:
            raise InvalidParams(f"unknown method {method!r}")
        out *= m * m
    return out
