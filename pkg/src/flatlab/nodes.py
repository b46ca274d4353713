"""Nodal families on and near the circle, discrete means, sampling
inequalities (Marcinkiewicz-Zygmund upper check, Bernstein ratio), and
uniform-separation analysis in the disc.

Angles are turns in [0, 1).  A family carries a radius rho in (0, 1] used
only by the separation analysis, which places the nodes at rho*e^{2 pi i t}
inside the disc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from flatlab.errors import (DegenerateFamily, GridTooSmall, InvalidParam,
                            NotPrime)
from flatlab.singer import is_prime
from flatlab.trigpoly import (DEFAULT_QUADRATURE, QuadratureConfig, TrigPoly,
                              evaluate_grid)

_KINDS = ("roots", "perturbed", "interleaved")


@dataclass(frozen=True)
class NodalFamily:
    """A finite family of sample points with an associated disc radius.

    kinds:
      roots        q angles r/q
      perturbed    q angles r/q + sign * delta / (q * p^(1/2 + epsilon))
      interleaved  2q angles alternating r/q and r/q + delta/q
    """

    kind: str
    q: int
    delta: float
    epsilon: float
    radius: float
    angles: tuple[float, ...]
    p: Optional[int] = None
    sign: int = 1

    @property
    def size(self) -> int:
        return len(self.angles)

    def points(self) -> np.ndarray:
        """Disc points rho * e^{2 pi i t}."""
        t = np.asarray(self.angles)
        return self.radius * np.exp(2j * np.pi * t)


def build_nodes(kind: str, q: int, p: Optional[int] = None, delta: float = 0.0,
                epsilon: float = 0.0, radius: Optional[float] = None,
                sign: int = 1) -> NodalFamily:
    """Build a nodal family.  radius defaults to 1 - 1/(2q) (equivalently
    (2q-1)/(2q) for the interleaved kind; the two expressions coincide)."""
    if kind not in _KINDS:
        raise InvalidParam(f"kind must be one of {_KINDS}, got {kind!r}")
    if q < 1:
        raise InvalidParam(f"q must be >= 1, got {q}")
    if delta < 0:
        raise InvalidParam(f"delta must be >= 0, got {delta}")
    if radius is None:
        radius = 1.0 - 1.0 / (2 * q)
    if not 0.0 < radius <= 1.0:
        raise InvalidParam(f"radius must be in (0, 1], got {radius}")
    base = [r / q for r in range(q)]
    if kind == "roots":
        angles = base
    elif kind == "perturbed":
        if p is None or p < 1:
            raise InvalidParam("perturbed families need the prime parameter p")
        shift = sign * delta / (q * p ** (0.5 + epsilon))
        angles = [(t + shift) % 1.0 for t in base]
    else:
        angles = []
        for t in base:
            angles.append(t)
            angles.append((t + delta / q) % 1.0)
    if len(set(angles)) != len(angles):
        raise DegenerateFamily("two nodes coincide; adjust delta")
    return NodalFamily(kind=kind, q=q, delta=float(delta), epsilon=float(epsilon),
                       radius=float(radius), angles=tuple(angles), p=p,
                       sign=int(sign))


def _node_values(poly: TrigPoly, nodes: NodalFamily) -> np.ndarray:
    # every family is a union of offset uniform grids, so the FFT fold path
    # applies; this keeps node evaluation as accurate as grid evaluation
    if nodes.kind == "roots":
        return evaluate_grid(poly, nodes.q)
    if nodes.kind == "perturbed":
        offset = nodes.angles[0]
        return evaluate_grid(poly, nodes.q, offset)
    even = evaluate_grid(poly, nodes.q)
    odd = evaluate_grid(poly, nodes.q, nodes.delta / nodes.q)
    out = np.empty(2 * nodes.q, dtype=np.complex128)
    out[0::2] = even
    out[1::2] = odd
    return out


def discrete_mean(poly: TrigPoly, nodes: NodalFamily, alpha: float) -> float:
    """(1/|nodes|) sum |P(node)|^alpha over the family's circle points."""
    if alpha <= 0:
        raise InvalidParam(f"alpha must be positive, got {alpha}")
    vals = _node_values(poly, nodes)
    return float(np.mean(np.abs(vals) ** alpha))


def singer_node_mean(p: int, alpha: float) -> Union[float, Fraction]:
    """Closed-form discrete mean of |P_S|^alpha over the q-th roots of unity
    for the Singer polynomial of prime p:

        (1/q) * ((p+1)^(alpha/2) + (q-1) * (p/(p+1))^(alpha/2))

    Returns an exact Fraction when alpha is an even integer (the mean is 1
    exactly at alpha = 2).
    """
    if not is_prime(p):
        raise NotPrime(f"p must be prime, got {p}")
    if alpha <= 0:
        raise InvalidParam(f"alpha must be positive, got {alpha}")
    q = p * p + p + 1
    half = alpha / 2
    if float(half).is_integer():
        k = int(half)
        return (Fraction(p + 1) ** k + (q - 1) * Fraction(p, p + 1) ** k) / q
    return ((p + 1) ** half + (q - 1) * (p / (p + 1)) ** half) / q


# ---------------------------------------------------------------------------
# convex test functions for the sampling inequality

@dataclass(frozen=True)
class PhiSpec:
    """Nonnegative nondecreasing convex test function: x^alpha (alpha >= 1)
    or the shifted ramp max(0, x - c)."""

    kind: str                # "power" | "ramp"
    param: float

    def __call__(self, x):
        if self.kind == "power":
            return np.asarray(x) ** self.param
        return np.maximum(0.0, np.asarray(x) - self.param)


def phi_power(alpha: float) -> PhiSpec:
    if alpha < 1:
        raise InvalidParam("power test functions need alpha >= 1 for convexity")
    return PhiSpec("power", float(alpha))


def phi_ramp(c: float) -> PhiSpec:
    if c < 0:
        raise InvalidParam("ramp offset must be >= 0")
    return PhiSpec("ramp", float(c))


@dataclass(frozen=True)
class MZCheck:
    lhs: float
    rhs: float
    holds: bool
    tol: float


def mz_upper_check(poly: TrigPoly, phi: PhiSpec, kappa: float, m: int,
                   offset: float = 0.0,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> MZCheck:
    """Check the one-sided sampling inequality

        mean over the m-point step measure of phi(A_kappa * |Q|)
            <= integral of phi(|Q|),

    with A_kappa = 1/(1 + 1/kappa), admissible once m >= (1+kappa) * 2n
    for Q of degree n.  The right side is computed by doubling quadrature;
    the comparison tolerance tracks its error estimate.
    """
    if kappa <= 0:
        raise InvalidParam(f"kappa must be positive, got {kappa}")
    n = poly.max_abs_frequency
    need = (1 + kappa) * 2 * n
    if m < need:
        raise GridTooSmall(f"m={m} below admissible size {need}")
    a_kappa = 1.0 / (1.0 + 1.0 / kappa)
    node_vals = np.abs(evaluate_grid(poly, m, offset))
    lhs = float(np.mean(phi(a_kappa * node_vals)))

    from flatlab.trigpoly import _doubling_quadrature

    def mean(vals):
        return float(np.mean(phi(np.abs(vals))))

    rhs_est = _doubling_quadrature(mean, poly, cfg)
    tol = max(1e-9, 4.0 * rhs_est.est_error)
    return MZCheck(lhs=lhs, rhs=rhs_est.value,
                   holds=lhs <= rhs_est.value + tol, tol=tol)


def bernstein_ratio(poly: TrigPoly, exponent: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """||P'||_p / ||P||_p with P' the derivative in the radian angle.

    The two norms are sampled on the same grids and the loop stops when
    the ratio stabilizes, so shared quadrature bias cancels (exactly, for
    the cosine equality case).
    """
    if exponent < 1:
        raise InvalidParam("bernstein_ratio needs exponent >= 1")
    if poly.is_zero:
        raise InvalidParam("ratio undefined for the zero polynomial")
    deriv = poly.derivative()
    span = max(1, poly.degree_span)
    m = max(cfg.min_grid, cfg.initial_grid_multiplier * span)
    m = 1 << (m - 1).bit_length()
    prev = None
    while True:
        pv = np.abs(evaluate_grid(poly, m)) ** exponent
        dv = np.abs(evaluate_grid(deriv, m)) ** exponent
        denom = float(np.mean(pv))
        ratio = (float(np.mean(dv)) / denom) ** (1.0 / exponent)
        if prev is not None and abs(ratio - prev) <= 1e-11 * max(1.0, ratio):
            return ratio
        if 2 * m > cfg.max_grid:
            return ratio
        prev = ratio
        m *= 2


# ---------------------------------------------------------------------------
# uniform separation

@dataclass(frozen=True)
class SeparationReport:
    """Pseudo-hyperbolic separation of a nodal family inside the disc."""

    min_pairwise_product: float   # inf over k of prod_{j != k} d(xi_j, xi_k)
    min_pairwise_distance: float
    gamma_sq_partial: float
    lower_bound: float            # gamma^2 * delta / sqrt(1 + delta^2)
    pairwise_bound_ok: Optional[bool]  # circular-index bound; None if n/a


def gamma_squared(terms: int) -> float:
    """Partial product prod_{t=1..T} (1 - 1/(1+t^2)); converges to
    pi/sinh(pi) as T grows."""
    if terms < 1:
        raise InvalidParam("terms must be >= 1")
    total = 1.0
    chunk = 1 << 20
    t0 = 1
    while t0 <= terms:
        t1 = min(terms, t0 + chunk - 1)
        t = np.arange(t0, t1 + 1, dtype=float)
        total *= float(np.prod(t * t / (1.0 + t * t)))
        t0 = t1 + 1
    return total


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None] - points[None, :]
    denom = 1.0 - np.conj(points[None, :]) * points[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        d = np.abs(diff) / np.abs(denom)
    np.fill_diagonal(d, 1.0)  # neutral element for row products
    return d


def _circular_index_bound_ok(d: np.ndarray, idx: np.ndarray, q: int,
                             slack: float) -> bool:
    # d restricted to the given index subset, against dc^2/(1+dc^2)
    for a in range(len(idx)):
        for b in range(a):
            dc = min((idx[a] - idx[b]) % q, (idx[b] - idx[a]) % q)
            bound = dc * dc / (1.0 + dc * dc)
            if d[idx[a], idx[b]] ** 2 < bound - slack:
                return False
    return True


def separation_analysis(nodes: NodalFamily, gamma_terms: int = 1 << 20,
                        slack: float = 1e-12) -> SeparationReport:
    """Pairwise pseudo-hyperbolic distances |a-b| / |1 - conj(b) a| of the
    scaled nodes, the minimum over k of the product over j != k, and the
    circular-index separation bound where it applies (within each
    equally-spaced subfamily)."""
    if not nodes.radius < 1.0:
        raise InvalidParam("separation analysis needs radius < 1")
    pts = nodes.points()
    n = len(pts)
    if n < 2:
        raise InvalidParam("need at least two nodes")
    raw = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(raw, np.inf)
    if raw.min() == 0.0:
        raise DegenerateFamily("two scaled nodes coincide")
    d = _pairwise_distances(pts)
    off = ~np.eye(n, dtype=bool)
    min_dist = float(d[off].min())
    prods = np.exp(np.sum(np.log(d), axis=1))  # diagonal contributes log 1
    min_prod = float(prods.min())
    g2 = gamma_squared(gamma_terms)
    lower = g2 * nodes.delta / math.sqrt(1.0 + nodes.delta ** 2)
    if nodes.kind in ("roots", "perturbed"):
        ok = _circular_index_bound_ok(d, np.arange(nodes.q), nodes.q, slack)
    elif nodes.kind == "interleaved":
        ok = (_circular_index_bound_ok(d[0::2][:, 0::2], np.arange(nodes.q),
                                       nodes.q, slack)
              and _circular_index_bound_ok(d[1::2][:, 1::2], np.arange(nodes.q),
                                           nodes.q, slack))
    else:
        ok = None
    return SeparationReport(min_pairwise_product=min_prod,
                            min_pairwise_distance=min_dist,
                            gamma_sq_partial=g2,
                            lower_bound=lower,
                            pairwise_bound_ok=ok)
