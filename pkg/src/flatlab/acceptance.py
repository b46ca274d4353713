"""The acceptance suite: one callable per criterion, shared by the CLI
``verify-all`` command and the test suite.

Every criterion pins its tolerance here.  Detail dictionaries contain only
deterministic values (no timings), so reports are byte-reproducible;
runtime budgets are enforced as booleans measured internally.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from flatlab import kernels, nodes, riesz, singer, trigpoly

PRIMES_31 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
FLATNESS_PRIMES = (5, 13, 31, 61, 127, 199)


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = "; ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{status} {self.cid:02d} {self.name}: {detail}"


def _fmt(x: float) -> str:
    return format(float(x), ".3e")


def _seeded_poly(rng: np.random.Generator, max_degree: int = 64) -> trigpoly.TrigPoly:
    """Random trig polynomial with max |frequency| exactly n <= max_degree."""
    n = int(rng.integers(1, max_degree + 1))
    k = int(rng.integers(1, 9))
    freqs = set(int(f) for f in rng.integers(-n, n + 1, size=k))
    freqs.add(n)
    coeffs = {}
    for f in sorted(freqs):
        coeffs[f] = complex(rng.normal(), rng.normal())
    return trigpoly.TrigPoly(coeffs)


def _seeded_support(rng: np.random.Generator, max_size: int = 50,
                    max_element: int = 250) -> tuple[int, ...]:
    size = int(rng.integers(2, max_size + 1))
    sup = rng.choice(max_element, size=size, replace=False)
    return tuple(sorted(int(s) for s in sup))


# ---------------------------------------------------------------------------

def criterion_1(seed: int = 0) -> CriterionResult:
    """Exact Singer construction and verification for every prime <= 31."""
    t0 = time.perf_counter()
    ok = True
    for p in PRIMES_31:
        s = singer.singer_set(p)
        if not singer.verify_perfect_difference_set(s.residues, s.q):
            ok = False
    elapsed = time.perf_counter() - t0
    return CriterionResult(1, "singer-exactness",
                           ok and elapsed < 5.0,
                           {"primes": len(PRIMES_31), "verified": ok,
                            "within_budget": elapsed < 5.0})


def criterion_2(seed: int = 0) -> CriterionResult:
    """|P_S| = sqrt(p/(p+1)) at every nonzero q-th root of unity."""
    worst = 0.0
    for p in (2, 3, 5, 7, 13, 31):
        s = singer.singer_set(p)
        poly = trigpoly.from_support(s.residues)
        mods = np.abs(trigpoly.evaluate_grid(poly, s.q))
        target = math.sqrt(p / (p + 1))
        worst = max(worst, float(np.max(np.abs(mods[1:] - target))))
    return CriterionResult(2, "root-modulus", worst < 1e-12,
                           {"max_abs_err": _fmt(worst), "tol": "1e-12"})


def criterion_3(seed: int = 0) -> CriterionResult:
    """Discrete means over roots of unity match the closed form; the
    alpha = 2 mean is exactly 1 in rational arithmetic."""
    worst = 0.0
    for p in (2, 3, 5, 7, 13):
        s = singer.singer_set(p)
        poly = trigpoly.from_support(s.residues)
        fam = nodes.build_nodes("roots", s.q)
        for alpha in (0.5, 1.0, 2.0, 3.0, 3.9):
            got = nodes.discrete_mean(poly, fam, alpha)
            want = float(nodes.singer_node_mean(p, alpha))
            worst = max(worst, abs(got - want))
    exact_ok = all(nodes.singer_node_mean(p, 2) == Fraction(1)
                   for p in (2, 3, 5, 7, 13))
    return CriterionResult(3, "closed-form-mean",
                           worst < 1e-12 and exact_ok,
                           {"max_abs_err": _fmt(worst), "tol": "1e-12",
                            "alpha2_exactly_one": exact_ok})


def criterion_4(seed: int = 0) -> CriterionResult:
    """Defect trend of the closed-form mean: strictly smaller at p = 199
    than at p = 5, and within 2/p^(3/2) of 1/(2p) for p >= 13."""
    defect = {p: 1.0 - float(nodes.singer_node_mean(p, 1.0))
              for p in (5, 13, 17, 19, 23, 29, 31, 61, 127, 199)}
    trend = defect[199] < defect[5]
    rate_ok = all(abs(defect[p] - 1 / (2 * p)) <= 2 / p ** 1.5
                  for p in defect if p >= 13)
    return CriterionResult(4, "mean-defect-rate", trend and rate_ok,
                           {"defect_p5": _fmt(defect[5]),
                            "defect_p199": _fmt(defect[199]),
                            "trend": trend, "rate_ok": rate_ok})


def criterion_5(seed: int = 0) -> CriterionResult:
    """L1 norm of (1 + z)/sqrt(2) equals 2*sqrt(2)/pi."""
    poly = trigpoly.from_support((0, 1))
    est = trigpoly.lp_norm(poly, 1.0)
    target = 2.0 * math.sqrt(2.0) / math.pi
    err = abs(est.value - target)
    return CriterionResult(5, "two-term-l1", err < 1e-8,
                           {"value": format(est.value, ".12f"),
                            "abs_err": _fmt(err), "tol": "1e-8",
                            "grid": est.grid_size})


def criterion_6(seed: int = 0) -> CriterionResult:
    """Mahler measures of 1 + 0.6 cos(n theta): 0.9 continuous, 0.8 over
    the 2n-point discrete measure."""
    worst_c = worst_d = 0.0
    for n in (3, 10):
        poly = trigpoly.TrigPoly.cosine(0.6, n)
        cont = trigpoly.mahler_measure(poly)
        disc = trigpoly.mahler_discrete(poly, 2 * n)
        worst_c = max(worst_c, abs(cont.value - 0.9))
        worst_d = max(worst_d, abs(disc - 0.8))
    ok = worst_c < 1e-10 and worst_d < 1e-10
    return CriterionResult(6, "cosine-mahler", ok,
                           {"max_err_continuous": _fmt(worst_c),
                            "max_err_discrete": _fmt(worst_d), "tol": "1e-10"})


def criterion_7(seed: int = 0) -> CriterionResult:
    """Exact fourth-moment obstruction vs quadrature, its lower bound, and
    the Sidon equality case, over 100 random supports plus Singer sets."""
    rng = np.random.default_rng(seed)
    sups = [_seeded_support(rng) for _ in range(100)]
    sups += [singer.singer_set(p).residues for p in PRIMES_31]
    worst = 0.0
    ok = True
    for sup in sups:
        value, lower = trigpoly.l4_obstruction(sup)
        poly = trigpoly.from_support(sup)
        m = 1 << max(6, (4 * poly.degree_span + 1).bit_length())
        mods_sq = np.abs(trigpoly.evaluate_grid(poly, m)) ** 2
        quad = float(np.mean((mods_sq - 1.0) ** 2))
        worst = max(worst, abs(float(value) - quad))
        if value < lower:
            ok = False
        if (value == lower) != singer.is_sidon(sup):
            ok = False
    return CriterionResult(7, "fourth-moment-obstruction",
                           ok and worst < 1e-9,
                           {"supports": len(sups), "max_quad_gap": _fmt(worst),
                            "tol": "1e-9", "bounds_ok": ok})


def criterion_8(seed: int = 0) -> CriterionResult:
    """Continuous flatness defect decreases from p = 5 to p = 199 at desk
    scale (grids capped at 2^20), within a 2 minute budget."""
    t0 = time.perf_counter()
    cfg = trigpoly.QuadratureConfig(max_grid=1 << 20)
    defects = {}
    for p in FLATNESS_PRIMES:
        s = singer.singer_set(p)
        poly = trigpoly.from_support(s.residues)
        est = trigpoly.lp_norm(poly, 1.0, cfg)
        defects[p] = 1.0 - est.value
    elapsed = time.perf_counter() - t0
    trend = defects[199] < defects[5]
    return CriterionResult(8, "desk-scale-flatness",
                           trend and elapsed < 120.0,
                           {"defect_p5": format(defects[5], ".8f"),
                            "defect_p199": format(defects[199], ".8f"),
                            "trend": trend, "within_budget": elapsed < 120.0})


def criterion_9(seed: int = 0) -> CriterionResult:
    """Sampling upper check on 200 seeded polynomials and the derivative
    ratio bound on 200 more, equality at the pure cosine."""
    rng = np.random.default_rng(seed)
    cfg = trigpoly.QuadratureConfig(stop_rel_tol=1e-8, max_grid=1 << 18)
    mz_ok = 0
    for trial in range(200):
        poly = _seeded_poly(rng)
        kappa = (1, 2, 4)[trial % 3]
        alpha = (1, 2)[trial % 2]
        n = poly.max_abs_frequency
        m = int(math.ceil((1 + kappa) * 2 * n))
        check = nodes.mz_upper_check(poly, nodes.phi_power(alpha), kappa, m,
                                     cfg=cfg)
        if check.holds:
            mz_ok += 1
    bern_ok = 0
    for trial in range(200):
        poly = _seeded_poly(rng)
        exponent = (1, 2, 4)[trial % 3]
        ratio = nodes.bernstein_ratio(poly, exponent, cfg)
        if ratio <= poly.max_abs_frequency + 1e-9:
            bern_ok += 1
    eq_worst = 0.0
    for n in (1, 3, 8):
        cos_poly = trigpoly.TrigPoly({n: 0.5, -n: 0.5})
        for exponent in (1, 2, 4):
            ratio = nodes.bernstein_ratio(cos_poly, exponent, cfg)
            eq_worst = max(eq_worst, abs(ratio - n))
    ok = mz_ok == 200 and bern_ok == 200 and eq_worst < 1e-9
    return CriterionResult(9, "sampling-and-derivative", ok,
                           {"mz_holds": mz_ok, "bernstein_holds": bern_ok,
                            "cosine_equality_err": _fmt(eq_worst)})


def criterion_10(seed: int = 0) -> CriterionResult:
    """Separation constants: the infinite product limit pi/sinh(pi) and the
    circular-index pairwise bound on roots families."""
    g = nodes.gamma_squared(10 ** 6)
    target = math.pi / math.sinh(math.pi)
    gap = abs(g - target)
    pair_ok = True
    for q in (7, 13, 57):
        fam = nodes.build_nodes("roots", q)
        rep = nodes.separation_analysis(fam)
        if not rep.pairwise_bound_ok:
            pair_ok = False
    return CriterionResult(10, "separation-constants",
                           gap < 1e-6 and pair_ok,
                           {"gamma_sq_gap": _fmt(gap), "tol": "1e-6",
                            "pairwise_bound_ok": pair_ok})


def criterion_11(seed: int = 0) -> CriterionResult:
    """Outer-modulus series identity and the weight boundedness check."""
    worst = 0.0
    for r, trunc in ((0.3, 60), (0.6, 120), (0.9, 400)):
        worst = max(worst, kernels.outer_modulus_check(r, 0.0, trunc, 4096))
    u_ok = True
    for q in (7, 13, 57):
        for kappa in (1.0, 4.0):
            rep = kernels.helson_szego_u_bound(q, kappa, 0.1)
            if not rep.holds:
                u_ok = False
    return CriterionResult(11, "outer-and-weight", worst < 1e-10 and u_ok,
                           {"max_series_err": _fmt(worst), "tol": "1e-10",
                            "u_bound_holds": u_ok})


def criterion_12(seed: int = 0) -> CriterionResult:
    """Exact two-fold product table, unit zero-coefficient through K = 10,
    doubling dilations, and the 2^-8 Mahler product."""
    base = trigpoly.from_support((0, 1))
    spec = riesz.dynamical_origin_dilations([base] * 10)
    dil_ok = tuple(f.dilation for f in spec.factors) == tuple(2 ** j for j in range(10))
    zero_ok = True
    for K in range(1, 11):
        prod = riesz.partial_product(spec, K)
        if prod.coeffs[0] != Fraction(1):
            zero_ok = False
    table = riesz.partial_product(spec, 2)
    expected = {0: Fraction(1), 1: Fraction(3, 4), -1: Fraction(3, 4),
                2: Fraction(1, 2), -2: Fraction(1, 2),
                3: Fraction(1, 4), -3: Fraction(1, 4)}
    table_ok = dict(table.coeffs) == expected
    mp = riesz.mahler_product(spec, 8)
    mp_err = abs(mp - 2.0 ** -8)
    ok = dil_ok and zero_ok and table_ok and mp_err < 1e-9
    return CriterionResult(12, "riesz-exactness", ok,
                           {"dilations_ok": dil_ok, "zero_coeff_ok": zero_ok,
                            "k2_table_ok": table_ok,
                            "mahler_product_err": _fmt(mp_err)})


def criterion_13(seed: int = 0) -> CriterionResult:
    """Byte-identical reports for repeated CLI invocations."""
    from flatlab import cli

    argvs = [
        ["singer", "--p", "7", "--format", "json", "--seed", str(seed)],
        ["flatness", "--primes", "5,13", "--format", "csv", "--seed", str(seed)],
        ["riesz", "--preset", "dyadic", "--levels", "4", "--grid", "512",
         "--format", "json", "--seed", str(seed)],
    ]
    ok = True
    for argv in argvs:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            code = cli.run(list(argv), stream=buf)
            outs.append((code, buf.getvalue()))
        if outs[0] != outs[1] or outs[0][0] != 0:
            ok = False
    return CriterionResult(13, "cli-determinism", ok,
                           {"commands": len(argvs), "identical": ok})


CRITERIA: tuple[Callable[[int], CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    criterion_11, criterion_12, criterion_13,
)


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [c(seed) for c in CRITERIA]
