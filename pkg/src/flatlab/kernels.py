"""Classical kernels (Dirichlet, Fejer, de la Vallee Poussin, Poisson),
step measures, conjugate functions, and the outer-modulus and weight
boundedness checks used by the sampling-family analysis.

Conventions: the trigonometric kernels (dirichlet/fejer/vallee_poussin
variants) take the angle in turns, matching their closed forms
sin(pi(2n+1)x)/sin(pi x); the Poisson kernels take radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from flatlab.errors import InvalidParam
from flatlab.trigpoly import TrigPoly

_SIN_EPS = 1e-8  # below this |sin(pi x)| the closed forms switch to series


@dataclass(frozen=True)
class KernelSpec:
    """Kernel selector.

    kinds and parameters:
      dirichlet(n), fejer(n), vallee_poussin(n), vallee_poussin_order(n, h),
      poisson(r), conjugate_poisson(r)
    """

    kind: str
    n: Optional[int] = None
    h: Optional[int] = None
    r: Optional[float] = None

    def __post_init__(self):
        if self.kind in ("dirichlet", "fejer", "vallee_poussin"):
            if self.n is None or self.n < 0:
                raise InvalidParam(f"{self.kind} needs n >= 0")
        elif self.kind == "vallee_poussin_order":
            if self.n is None or self.n < 1 or self.h is None or self.h < 1:
                raise InvalidParam("vallee_poussin_order needs n >= 1 and h >= 1")
        elif self.kind in ("poisson", "conjugate_poisson"):
            if self.r is None or not 0.0 < self.r < 1.0:
                raise InvalidParam(f"{self.kind} needs r in (0, 1)")
        else:
            raise InvalidParam(f"unknown kernel kind {self.kind!r}")


def _dirichlet(n: int, x: np.ndarray) -> np.ndarray:
    s = np.sin(np.pi * x)
    small = np.abs(s) < _SIN_EPS
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.sin(np.pi * (2 * n + 1) * x) / s
    if np.any(small):
        # exponential-sum form is exact and cancellation-free near integers
        xs = np.asarray(x)[small]
        j = np.arange(-n, n + 1)
        out[small] = np.cos(2 * np.pi * np.outer(xs, j)).sum(axis=1)
    return out


def _fejer(n: int, x: np.ndarray) -> np.ndarray:
    s = np.sin(np.pi * x)
    small = np.abs(s) < _SIN_EPS
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.sin(np.pi * (n + 1) * x) / s
        out = ratio * ratio / (n + 1)
    if np.any(small):
        xs = np.asarray(x)[small]
        j = np.arange(-n, n + 1)
        w = 1.0 - np.abs(j) / (n + 1)
        out[small] = (w * np.cos(2 * np.pi * np.outer(xs, j))).sum(axis=1)
    return out


def kernel_eval(spec: KernelSpec, x) -> np.ndarray:
    """Evaluate the kernel at x (turns for the trigonometric kernels,
    radians for the Poisson pair).  Scalar input gives scalar output."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if spec.kind == "dirichlet":
        out = _dirichlet(spec.n, arr)
    elif spec.kind == "fejer":
        out = _fejer(spec.n, arr)
    elif spec.kind == "vallee_poussin":
        out = 2.0 * _fejer(2 * spec.n + 1, arr) - _fejer(spec.n, arr)
    elif spec.kind == "vallee_poussin_order":
        n, h = spec.n, spec.h
        out = (1.0 + n / h) * _fejer(n + h - 1, arr) - (n / h) * _fejer(n - 1, arr)
    elif spec.kind == "poisson":
        r = spec.r
        out = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(arr) + r * r)
    else:  # conjugate_poisson
        r = spec.r
        out = 2.0 * r * np.sin(arr) / (1.0 - 2.0 * r * np.cos(arr) + r * r)
    return out if np.ndim(x) else float(out[0])


def kernel_coeffs(spec: KernelSpec) -> TrigPoly:
    """Exact Fourier coefficients of the trigonometric kernels (Fractions).

    Poisson kernels have infinite expansions and are rejected.
    """
    if spec.kind == "dirichlet":
        return TrigPoly({j: Fraction(1) for j in range(-spec.n, spec.n + 1)})
    if spec.kind == "fejer":
        n = spec.n
        return TrigPoly({j: 1 - Fraction(abs(j), n + 1)
                         for j in range(-n, n + 1)})
    if spec.kind == "vallee_poussin":
        big = kernel_coeffs(KernelSpec("fejer", n=2 * spec.n + 1)).scale(2)
        return big.add(kernel_coeffs(KernelSpec("fejer", n=spec.n)).scale(-1))
    if spec.kind == "vallee_poussin_order":
        n, h = spec.n, spec.h
        big = kernel_coeffs(KernelSpec("fejer", n=n + h - 1)).scale(Fraction(h + n, h))
        if n >= 1:
            small = kernel_coeffs(KernelSpec("fejer", n=n - 1)).scale(Fraction(n, h))
            return big.add(small.scale(-1))
        return big
    raise InvalidParam(f"{spec.kind} has no finite coefficient table")


# ---------------------------------------------------------------------------
# step measures

@dataclass(frozen=True)
class StepMeasure:
    """The normalized m-point step measure with jumps at xi0 + j/m (turns)."""

    m: int
    xi0: float = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParam(f"m must be >= 1, got {self.m}")

    def jump_points(self) -> np.ndarray:
        return self.xi0 + np.arange(self.m) / self.m


def step_integral(f: Callable[[np.ndarray], np.ndarray],
                  measure: StepMeasure) -> complex:
    """(1/m) sum_j f(xi0 + j/m): the normalized Riemann-Stieltjes integral
    of f against the step measure.  f receives turn angles."""
    vals = np.asarray(f(measure.jump_points()))
    return complex(np.mean(vals))


def conjugate_function(coeffs: dict[int, complex], r: float = 1.0) -> dict[int, complex]:
    """Fourier multiplier of the (radial) conjugate function:
    c_n -> -i * sign(n) * r^|n| * c_n, with the mean (n = 0) removed."""
    if not 0.0 < r <= 1.0:
        raise InvalidParam(f"r must be in (0, 1], got {r}")
    out = {}
    for n, c in coeffs.items():
        if n == 0:
            continue
        sign = 1.0 if n > 0 else -1.0
        val = -1j * sign * (r ** abs(n)) * c
        if val != 0:
            out[n] = val
    return out


def outer_modulus_check(r: float, theta0: float, truncation: int,
                        grid: int) -> float:
    """Max absolute discrepancy on the grid between log|1 - r e^{i(t-t0)}|^2
    and its truncated cosine series -2 sum_{n>=1} (r^n / n) cos(n(t-t0)).

    The tail is geometrically small once r^truncation is negligible.
    """
    if not 0.0 < r < 1.0:
        raise InvalidParam(f"r must be in (0, 1), got {r}")
    theta = 2.0 * np.pi * np.arange(grid) / grid - theta0
    exact = np.log(np.abs(1.0 - r * np.exp(1j * theta)) ** 2)
    n = np.arange(1, truncation + 1)
    series = -2.0 * (r ** n / n) @ np.cos(np.outer(n, theta))
    return float(np.max(np.abs(exact - series)))


# ---------------------------------------------------------------------------
# weight boundedness checks for the doubled nodal family

@dataclass(frozen=True)
class UBoundReport:
    sup_u: float
    bound: float
    holds: bool
    rho_n: float
    rho_kappa: float


def _radii(q: int, kappa: float) -> tuple[float, float]:
    n = 2 * q - 1
    rho_n = 1.0 - 1.0 / (n + 1)
    rho_kappa = max(0.5, 1.0 - kappa / (n + 1))
    return rho_n, rho_kappa


def _series_terms(rho: float, q: int) -> int:
    # smallest L with rho^(L q) < 1e-15
    if rho <= 0.0:
        return 1
    return max(2, int(math.ceil(-15.0 * math.log(10.0) / (q * math.log(rho)))) + 1)


def helson_szego_u_bound(q: int, kappa: float, delta: float,
                         truncation: Optional[int] = None, grid: int = 4096,
                         phase_scale: float = 1.0) -> UBoundReport:
    """Sup of the bounded factor u(theta) comparing the nodal zero product
    at radius rho_n with its pulled-in companion at rho_{n,kappa}:

        u = 2 Re sum_{l>=1} ((rho_kappa^{lq} - rho_n^{lq}) / l)
                 * (1 + e^{-i pi l delta * phase_scale}) e^{i l q theta},

    against the closed bound 2/(1-e^{-kappa/2}) + 2/(1-e^{-1/2}).  The
    delta phase normalization is exposed as phase_scale (the node spacing
    admits two readings, delta/q and delta/(2q)); the bound holds for both.
    """
    if kappa <= 0:
        raise InvalidParam(f"kappa must be positive, got {kappa}")
    rho_n, rho_kappa = _radii(q, kappa)
    L = truncation or max(_series_terms(rho_n, q), _series_terms(rho_kappa, q))
    theta = 2.0 * np.pi * np.arange(grid) / grid
    total = np.zeros(grid, dtype=np.complex128)
    for l in range(1, L + 1):
        dl = (rho_kappa ** (l * q) - rho_n ** (l * q)) / l
        phase = 1.0 + np.exp(-1j * np.pi * l * delta * phase_scale)
        total += dl * phase * np.exp(1j * l * q * theta)
    sup_u = float(np.max(np.abs(2.0 * total.real)))
    bound = 2.0 / (1.0 - math.exp(-kappa / 2.0)) + 2.0 / (1.0 - math.exp(-0.5))
    return UBoundReport(sup_u=sup_u, bound=bound, holds=sup_u <= bound,
                        rho_n=rho_n, rho_kappa=rho_kappa)


@dataclass(frozen=True)
class VBoundReport:
    sup_v: float
    bound_i: float
    bound_ii: float
    within_pi_half: bool


def helson_szego_v_report(q: int, kappa: float, delta: float,
                          truncation: Optional[int] = None,
                          grid: int = 4096) -> VBoundReport:
    """Sup of v = I + II for the pulled-in zero product, where

        I  = 2 sum_{l>=1} rho_kappa^{lq} sin(l q theta) / l
        II = 2 sum_{l>=1} rho_kappa^{lq} sin(l q (theta - 2 pi delta/q)) / l
             - 2 pi delta,

    reported against the series bounds |I| <= -4 log(1 - rho_kappa^q) and
    |II| <= 2 pi delta - 4 log(1 - e^{-kappa/2}).  For large kappa and
    delta < 1/8 the sup stays below pi/2.
    """
    if kappa <= 0:
        raise InvalidParam(f"kappa must be positive, got {kappa}")
    _, rho_kappa = _radii(q, kappa)
    L = truncation or _series_terms(rho_kappa, q)
    theta = 2.0 * np.pi * np.arange(grid) / grid
    shifted = theta - 2.0 * np.pi * delta / q
    part_i = np.zeros(grid)
    part_ii = np.zeros(grid)
    for l in range(1, L + 1):
        w = rho_kappa ** (l * q) / l
        part_i += 2.0 * w * np.sin(l * q * theta)
        part_ii += 2.0 * w * np.sin(l * q * shifted)
    v = part_i + part_ii - 2.0 * math.pi * delta
    sup_v = float(np.max(np.abs(v)))
    bound_i = -4.0 * math.log(1.0 - rho_kappa ** q)
    bound_ii = 2.0 * math.pi * delta - 4.0 * math.log(1.0 - math.exp(-kappa / 2.0))
    return VBoundReport(sup_v=sup_v, bound_i=bound_i, bound_ii=bound_ii,
                        within_pi_half=sup_v < math.pi / 2.0)
