"""Closed-form and series solution oracles for the benchmark problems.

Every oracle is residual-validated against the PDE (see
``model.pde_residual``) before it is trusted as an error reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .model import ProblemSpec

SINGULAR_TIME_3 = 1 / np.sqrt(2.0)


class QuadratureError(RuntimeError):
    pass


def _gauss_composite(f, lo: float, hi: float, tol: float) -> float:
    """Composite 16-point Gauss-Legendre with panel doubling until two
    successive refinements agree to ``tol`` absolutely."""
    xg, wg = leggauss(16)
    prev = None
    panels = 4
    while panels <= 4096:
        edges = np.linspace(lo, hi, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
        half = 0.5 * (edges[1] - edges[0])
        x = mid + half * xg[None, :]
        total = half * float(np.sum(f(x) * wg[None, :]))
        if prev is not None and abs(total - prev) <= tol:
            return total
        prev = total
        panels *= 2
    raise QuadratureError(
        f"quadrature did not reach tolerance {tol:g} within 4096 panels"
    )


@dataclass(frozen=True)
class FourierCoefficients:
    """Truncated cosine-series coefficients of the heat-kernel denominator
    for the 1D benchmark."""

    a0: float
    a: np.ndarray
    inv_re: float

    @property
    def n_trunc(self) -> int:
        return len(self.a)


def compute_fourier_coefficients(
    inv_re: float,
    n_max: int | None = None,
    quad_tol: float = 1e-13,
    t_min: float = 0.05,
) -> FourierCoefficients:
    """Integrate the coefficient formulas by self-convergent quadrature.

    When ``n_max`` is not given, terms are added until the exponentially
    damped tail at ``t_min`` drops below 1e-14, so the series value is
    insensitive to further truncation for t >= t_min.
    """
    if not inv_re > 0:
        raise ValueError("inv_re must be positive")
    scale = 1.0 / (2 * np.pi * inv_re)

    def kernel(x):
        return np.exp(-scale * (1 - np.cos(np.pi * x)))

    a0 = _gauss_composite(kernel, 0.0, 1.0, quad_tol)
    coeffs = []
    n = 1
    limit = n_max if n_max is not None else 2000
    while n <= limit:
        an = 2 * _gauss_composite(
            lambda x, n=n: kernel(x) * np.cos(n * np.pi * x), 0.0, 1.0, quad_tol
        )
        coeffs.append(an)
        if n_max is None:
            damped = abs(an) * np.exp(-(n**2) * np.pi**2 * inv_re * t_min)
            if damped < 1e-14 and n >= 8:
                break
        n += 1
    else:
        if n_max is None:
            raise QuadratureError("series tail did not fall below 1e-14")
    return FourierCoefficients(a0=a0, a=np.array(coeffs), inv_re=inv_re)


def example1_exact(x, t: float, coeffs: FourierCoefficients):
    """Series solution of the 1D problem with sin(pi x) initial data.

    Valid for t > 0; at t = 0 the series converges too slowly and the
    initial condition should be used directly.
    """
    if not t > 0:
        raise ValueError("series oracle requires t > 0; use sin(pi x) at t=0")
    x = np.asarray(x, dtype=float)
    nu = coeffs.inv_re
    n = np.arange(1, coeffs.n_trunc + 1)
    damp = coeffs.a * np.exp(-(n**2) * np.pi**2 * nu * t)
    xn = np.multiply.outer(x, n) * np.pi
    num = 2 * np.pi * nu * (np.sin(xn) @ (damp * n))
    den = coeffs.a0 + np.cos(xn) @ damp
    if np.any(np.abs(den) < 1e-300):
        raise FloatingPointError("series denominator underflowed")
    return num / den


def example2_exact(x, y, t: float, inv_re: float):
    """Closed-form 2D solution pair (denominator is bounded below by 1)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    decay = np.exp(-5 * np.pi**2 * inv_re * t)
    den = 2 + decay * np.sin(2 * np.pi * x) * np.sin(np.pi * y)
    u = -4 * np.pi * inv_re * decay * np.cos(2 * np.pi * x) * np.sin(np.pi * y) / den
    v = -2 * np.pi * inv_re * decay * np.sin(2 * np.pi * x) * np.cos(np.pi * y) / den
    return u, v


def example3_exact(x, y, t: float):
    """Spatially linear rational 2D solution; singular at t = 1/sqrt(2)."""
    if t >= SINGULAR_TIME_3:
        raise ValueError(f"solution is singular at t >= {SINGULAR_TIME_3}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    den = 1 - 2 * t**2
    u = (x + y - 2 * x * t) / den
    v = (x - y - 2 * y * t) / den
    return u, v


def example4_exact(x, y, z, t: float, variant: str = "corrected"):
    """Spatially linear 3D solution candidates.

    ``as-printed`` uses the 1 + 3t^2 denominator, which does not satisfy
    the PDE (the residual gate flags it); ``corrected`` uses 1 + 3t, which
    does.  Both agree at t = 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if variant == "as-printed":
        den = 1 + 3 * t**2
    elif variant == "corrected":
        den = 1 + 3 * t
    else:
        raise ValueError(f"unknown variant {variant!r}")
    u = (x + y + z) / den
    return u, u, u


# --- problem registrations -------------------------------------------------

def example1_spec(
    inv_re: float = 0.1,
    final_time: float = 1.0,
    coeffs: FourierCoefficients | None = None,
) -> ProblemSpec:
    """1D problem with homogeneous boundaries and sin(pi x) initial data.

    The benchmark tables for this problem were produced with 1/Re = 0.1
    (their caption says 1, but the tabulated values pin it to 0.1).
    """
    if coeffs is None:
        coeffs = compute_fourier_coefficients(inv_re)

    def initial(x):
        return (np.sin(np.pi * np.asarray(x, dtype=float)),)

    def boundary(x, t):
        return (np.zeros_like(np.asarray(x, dtype=float)),)

    def exact(x, t):
        if t == 0:
            return initial(x)
        return (example1_exact(x, t, coeffs),)

    return ProblemSpec(
        dimension=1,
        domain=((0.0, 1.0),),
        inv_re=inv_re,
        final_time=final_time,
        initial_fn=initial,
        boundary_fn=boundary,
        exact_fn=exact,
        name="example1",
    )


def example2_spec(inv_re: float = 0.1, final_time: float = 1.0) -> ProblemSpec:
    def exact(x, y, t):
        return example2_exact(x, y, t, inv_re)

    return ProblemSpec(
        dimension=2,
        domain=((0.0, 1.0), (0.0, 1.0)),
        inv_re=inv_re,
        final_time=final_time,
        initial_fn=lambda x, y: exact(x, y, 0.0),
        boundary_fn=exact,
        exact_fn=exact,
        name="example2",
    )


def example3_spec(inv_re: float = 0.1, final_time: float = 0.1) -> ProblemSpec:
    return ProblemSpec(
        dimension=2,
        domain=((0.0, 0.5), (0.0, 0.5)),
        inv_re=inv_re,
        final_time=final_time,
        initial_fn=lambda x, y: example3_exact(x, y, 0.0),
        boundary_fn=example3_exact,
        exact_fn=example3_exact,
        name="example3",
    )


def example4_spec(
    inv_re: float = 0.08,
    final_time: float = 1.0,
    variant: str = "corrected",
) -> ProblemSpec:
    def exact(x, y, z, t):
        return example4_exact(x, y, z, t, variant=variant)

    return ProblemSpec(
        dimension=3,
        domain=((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)),
        inv_re=inv_re,
        final_time=final_time,
        initial_fn=lambda x, y, z: exact(x, y, z, 0.0),
        boundary_fn=exact,
        exact_fn=exact,
        name=f"example4[{variant}]",
    )


EXAMPLES = {
    1: example1_spec,
    2: example2_spec,
    3: example3_spec,
    4: example4_spec,
}
