"""Blow-up time of the scalar comparison ODE.

The machinery that turns a superlinear differential inequality into
finite-time blow-up reduces, at its core, to the scalar problem

    y' = |y|^l - c,    y(0) = psi0 > c^(1/l),    l > 1, c >= 0,

whose solution is increasing and reaches +infinity at the finite time

                       infinity
        T_m(psi0)  =  integral  d tau / (tau^l - c).
                        psi0

This module computes T_m by quadrature with an explicit error budget, and
independently integrates the ODE itself so the two routes can be checked
against each other.

Quadrature route (blowup_time):

    split the improper integral at a cut R >= max(2*psi0, 10):

        T_m = quad(psi0, R) + integral_R^inf dtau/(tau^l - c)

    and approximate the tail by the c = 0 closed form R^(1-l)/(l-1).
    For tau >= R the exact tail is sandwiched,

        R^(1-l)/(l-1)  <=  tail  <=  R^(1-l)/(l-1) * 1/(1 - c/R^l),

    so the dropped correction is at most

        R^(1-l)/(l-1) * c/(R^l - c),

    and R is doubled until that bound is below tol/2; the finite part gets
    the remaining tol/2 as its absolute tolerance.

Integration route (integrate_comparison): explicit RK4 with the step law
dt = eta * y^(1-l), which keeps the relative growth per step bounded as
y -> infinity, so a finite threshold is reached in O(log(threshold)/eta)
steps.  The hitting time of a threshold Y underestimates T_m by exactly the
remaining tail T_m(Y).
"""
from __future__ import annotations

from dataclasses import dataclass

from scipy.integrate import quad

__all__ = ["OdeProblem", "blowup_time", "integrate_comparison"]


@dataclass(frozen=True)
class OdeProblem:
    """y' = |y|^l - c with y(0) = psi0; requires psi0 > c^(1/l) (strict)."""

    l: float
    c: float
    psi0: float

    def __post_init__(self):
        if not self.l > 1:
            raise ValueError(f"l must exceed 1, got {self.l}")
        if not self.c >= 0:
            raise ValueError(f"c must be nonnegative, got {self.c}")
        if not self.psi0 > self.c ** (1.0 / self.l):
            raise ValueError(
                f"hypothesis violated: psi0 <= c^(1/l) "
                f"({self.psi0} <= {self.c ** (1.0 / self.l)})"
            )


def blowup_time(prob: OdeProblem, tol: float = 1e-10) -> float:
    """T_m(psi0) = integral_{psi0}^inf dtau/(tau^l - c), abs error <= tol."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    l, c, psi0 = prob.l, prob.c, prob.psi0
    cut = max(2.0 * psi0, 10.0)
    if c > 0:
        # double the cut until the dropped tail correction is within budget
        while cut ** (1.0 - l) / (l - 1.0) * (c / (cut**l - c)) > 0.5 * tol:
            cut *= 2.0
    head, _ = quad(
        lambda tau: 1.0 / (tau**l - c), psi0, cut, epsabs=0.5 * tol, epsrel=1e-13,
        limit=200,
    )
    return head + cut ** (1.0 - l) / (l - 1.0)


def integrate_comparison(
    prob: OdeProblem, blow_threshold: float = 1e6, eta: float = 1e-3
) -> list[tuple[float, float]]:
    """Integrate y' = |y|^l - c until y >= blow_threshold.

    Classical RK4 with the adaptive step dt = eta*y^(1-l); the returned
    trajectory ends at the threshold crossing, located by linear
    interpolation inside the final step, so trajectory[-1] is
    (t_hit, blow_threshold).
    """
    if not blow_threshold > prob.psi0:
        raise ValueError(
            f"blow_threshold must exceed psi0 "
            f"({blow_threshold} <= {prob.psi0})"
        )
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    l, c = prob.l, prob.c

    def rhs(y):
        return abs(y) ** l - c

    t, y = 0.0, prob.psi0
    traj = [(t, y)]
    while y < blow_threshold:
        dt = eta * y ** (1.0 - l)
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y_new = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t_new = t + dt
        if y_new >= blow_threshold:
            t_hit = t + (blow_threshold - y) * dt / (y_new - y)
            traj.append((t_hit, blow_threshold))
            return traj
        t, y = t_new, y_new
        traj.append((t, y))
    return traj
