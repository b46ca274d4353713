"""flatlab: Singer difference sets, flat Newman polynomials, and
circle-sampling inequalities.

Subpackages by theme:

* :mod:`flatlab.singer`   Singer sets, Sidon / B_h[g] structure
* :mod:`flatlab.trigpoly` sparse trigonometric polynomials, norms, Mahler
* :mod:`flatlab.nodes`    nodal families, sampling and separation checks
* :mod:`flatlab.kernels`  classical kernels, step measures, conjugates
* :mod:`flatlab.riesz`    dissociation, rank-one factors, exact products
* :mod:`flatlab.cli`      the ``flatlab`` command
"""

__version__ = "0.1.0"

from flatlab._backend import backend_name
from flatlab.singer import (SingerSet, difference_stats, is_bhg, is_sidon,
                            lindstrom_bound_check, singer_set,
                            verify_perfect_difference_set)
from flatlab.trigpoly import (QuadratureConfig, TrigPoly, evaluate_grid,
                              flatness_report, from_support, l4_obstruction,
                              lp_norm, mahler_discrete, mahler_jensen,
                              mahler_measure, quasi_norm,
                              squared_modulus_expansion)

__all__ = [
    "__version__",
    "backend_name",
    "SingerSet", "singer_set", "verify_perfect_difference_set",
    "difference_stats", "is_sidon", "is_bhg", "lindstrom_bound_check",
    "TrigPoly", "QuadratureConfig", "from_support", "evaluate_grid",
    "lp_norm", "quasi_norm", "mahler_measure", "mahler_jensen",
    "mahler_discrete", "squared_modulus_expansion", "l4_obstruction",
    "flatness_report",
]
