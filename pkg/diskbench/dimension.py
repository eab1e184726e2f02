"""Dimension bound for quasicircles from the quadratic F(k, t).

F(k, t) = k^2 t^2 (1+7k)^2/4 - t + 1 has a root t_k in (1, 2) for small k,
and the Minkowski dimension of a k'-quasicircle is at most t_k with
k = 2k'/(1 + k'^2).
"""

import logging
import math
from typing import Sequence

import numpy as np

from .errors import DomainError
from .models import CheckResult, DimensionReport

logger = logging.getLogger(__name__)

#: Upper end of the interval where the closed-form root is established.
K_MAX = (math.sqrt(15.0) - 1.0) / 14.0


def _x(k: float) -> float:
    return k * k * (1.0 + 7.0 * k) ** 2


def F(k: float, t: float) -> float:
    return 0.25 * _x(k) * t * t - t + 1.0


def dF_dt(k: float, t: float) -> float:
    return 0.5 * _x(k) * t - 1.0


def _check_k(k: float):
    if not 0.0 < k < K_MAX:
        raise DomainError(f"k={k} outside the validity interval (0, {K_MAX:.6f})")


def _check_bracket(k: float):
    # F(k, 1) = x/4 > 0 and F(k, 2) = x - 1 < 0 leave one root in (1, 2)
    if not (F(k, 1.0) > 0.0 and F(k, 2.0) < 0.0):
        raise DomainError(f"no unique root of F in (1, 2) for k={k}")


def t_k(k: float) -> float:
    """The root 2/(1 + sqrt(1 - k^2 (1+7k)^2)) of F(k, .) in (1, 2).

    Raises:
        DomainError: If k is outside (0, (sqrt(15) - 1)/14)
    """
    _check_k(k)
    _check_bracket(k)
    return 2.0 / (1.0 + math.sqrt(1.0 - _x(k)))


def t_k_numeric(k: float, polish: int = 2) -> float:
    """Root of F(k, .) in (1, 2) from the companion matrix of the quadratic,
    refined by ``polish`` Newton steps."""
    _check_k(k)
    roots = np.roots([0.25 * _x(k), -1.0, 1.0])
    inside = [float(z.real) for z in roots if abs(z.imag) < 1e-9 and 1.0 < z.real < 2.0]
    if len(inside) != 1:
        raise DomainError(f"no unique root of F in (1, 2) for k={k}")
    t = inside[0]
    for _ in range(polish):
        t -= F(k, t) / dF_dt(k, t)
    return t


def symmetrize(k_prime: float) -> float:
    """k = 2k'/(1 + k'^2)."""
    if not 0.0 <= k_prime <= 1.0:
        raise DomainError(f"k' must lie in [0, 1], got {k_prime}")
    return 2.0 * k_prime / (1.0 + k_prime * k_prime)


def desymmetrize(k: float) -> float:
    """k' = k/(1 + sqrt(1 - k^2)), the inverse of :func:`symmetrize`."""
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"k must lie in [0, 1], got {k}")
    return k / (1.0 + math.sqrt(1.0 - k * k))


def smirnov_bound(k_prime: float) -> float:
    return 1.0 + k_prime * k_prime


def dim_bound(k_prime: float) -> float:
    """Dimension bound t_k for k = symmetrize(k')."""
    return t_k(symmetrize(k_prime))


def dimension_report(k_prime: float) -> DimensionReport:
    k = symmetrize(k_prime)
    root = t_k(k)
    report = DimensionReport(
        k=k,
        k_prime=k_prime,
        t_k=root,
        F_at_root=F(k, root),
        derivative_sign=math.copysign(1.0, dF_dt(k, root)),
        asymptotic_gap=root - smirnov_bound(k_prime),
    )
    logger.debug("k'=%.6g: k=%.6g t_k=%.12g gap=%.3e", k_prime, k, root, report.asymptotic_gap)
    return report


def root_check(ks: Sequence[float], tol: float = 1e-12) -> CheckResult:
    """F(k, t_k) = 0, dF/dt < 0 at the root and agreement with the numeric root."""
    worst, worst_k, descending = 0.0, None, True
    for k in ks:
        root = t_k(k)
        err = max(abs(F(k, root)), abs(root - t_k_numeric(k)))
        descending = descending and dF_dt(k, root) < 0
        if err >= worst:
            worst, worst_k = err, k
    return CheckResult("dimension root", "root of F and the descent criterion",
                       worst, tol, worst <= tol and descending, f"worst k={worst_k}")


def gap_ratio_check(k_primes: Sequence[float], limit: float = 40.0) -> CheckResult:
    """|dim_bound(k') - 1 - k'^2|/k'^3 stays below ``limit``."""
    ratios = [abs(dim_bound(kp) - smirnov_bound(kp)) / kp ** 3 for kp in k_primes]
    worst = float(max(ratios))
    return CheckResult("dimension asymptotics", "third-order gap to 1 + k'^2",
                       worst, limit, worst <= limit)


def symmetrization_check(k_primes: Sequence[float], tol: float = 1e-14) -> CheckResult:
    err = float(max(abs(desymmetrize(symmetrize(kp)) - kp) for kp in k_primes))
    return CheckResult("symmetrization", "k' to k and back", err, tol, err <= tol)
