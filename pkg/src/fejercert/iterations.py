"""Iteration schemes in R^d: trajectory generation, step-size sequences,
and the residual-based approximation families the certificates talk
about.

Trajectories are deterministic and cached: replaying from x0 reproduces
identical doubles, and a fully materialized prefix is safe to share
read-only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .moduli import ApproximationFamily
from .nat import DomainError, exact_fraction
from .operators import Operator, prox_quadratic


# ---------------------------------------------------------------------------
# Closed-form real sequences (step sizes, averaging weights, error terms)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeqSpec:
    """Closed-form real sequence: constant, a + b/(n+1), geometric
    c*ratio^n, or a finite table with constant tail.  Closed forms keep
    running maxima and range conditions decidable."""

    kind: str
    params: tuple

    @staticmethod
    def const(value: float) -> "SeqSpec":
        return SeqSpec("const", (float(value),))

    @staticmethod
    def affine_inv(a: float, b: float) -> "SeqSpec":
        return SeqSpec("affine_inv", (float(a), float(b)))

    @staticmethod
    def geometric(coeff: float, ratio: float) -> "SeqSpec":
        if not 0 <= ratio < 1:
            raise ValueError("geometric ratio must be in [0, 1)")
        return SeqSpec("geometric", (float(coeff), float(ratio)))

    @staticmethod
    def table(values: Sequence[float], tail: Optional[float] = None) -> "SeqSpec":
        return SeqSpec("table", (tuple(float(v) for v in values), tail))

    def __call__(self, n: int) -> float:
        if self.kind == "const":
            return self.params[0]
        if self.kind == "affine_inv":
            a, b = self.params
            return a + b / (n + 1)
        if self.kind == "geometric":
            c, rho = self.params
            return c * rho**n
        values, tail = self.params
        if n < len(values):
            return values[n]
        if tail is None:
            raise DomainError(f"sequence table of length {len(values)} evaluated at {n}")
        return tail

    def running_max(self, k: int) -> float:
        """max over indices 0..k, in closed form where possible."""
        if self.kind == "const":
            return self.params[0]
        if self.kind == "affine_inv":
            a, b = self.params
            return max(a + b, a + b / (k + 1))  # monotone either way in n
        if self.kind == "geometric":
            c, rho = self.params
            return max(c, c * rho**k) if c >= 0 else c * rho**k
        values, tail = self.params
        scan = max(values[: min(k + 1, len(values))]) if values else -np.inf
        if k >= len(values):
            if tail is None:
                raise DomainError("running max beyond table length with no tail")
            scan = max(scan, tail)
        return scan

    def running_max_fraction(self, k: int) -> Fraction:
        return exact_fraction(self.running_max(k))

    def bounds(self) -> tuple:
        """(inf, sup) over all n, for range validation."""
        if self.kind == "const":
            v = self.params[0]
            return v, v
        if self.kind == "affine_inv":
            a, b = self.params
            return (min(a, a + b), max(a, a + b))
        if self.kind == "geometric":
            c, _ = self.params
            return (min(0.0, c), max(0.0, c))
        values, tail = self.params
        pool = list(values) + ([tail] if tail is not None else [])
        return (min(pool), max(pool))

    def to_json(self) -> dict:
        if self.kind == "const":
            return {"kind": "const", "value": self.params[0]}
        if self.kind == "affine_inv":
            return {"kind": "affine_inv", "a": self.params[0], "b": self.params[1]}
        if self.kind == "geometric":
            return {"kind": "geometric", "coeff": self.params[0], "ratio": self.params[1]}
        values, tail = self.params
        obj = {"kind": "table", "values": list(values)}
        if tail is not None:
            obj["tail"] = tail
        return obj

    @staticmethod
    def from_json(obj) -> "SeqSpec":
        kind = obj["kind"]
        if kind == "const":
            return SeqSpec.const(obj["value"])
        if kind == "affine_inv":
            return SeqSpec.affine_inv(obj["a"], obj["b"])
        if kind == "geometric":
            return SeqSpec.geometric(obj["coeff"], obj["ratio"])
        if kind == "table":
            return SeqSpec.table(obj["values"], obj.get("tail"))
        raise ValueError(f"unknown sequence kind {kind!r}")


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


class Trajectory:
    """Lazily generated point sequence with Euclidean metric.

    Single-writer cache; deterministic replay from x0.
    """

    def __init__(self, name: str, x0, step: Callable[[int, np.ndarray], np.ndarray]):
        self.name = name
        x0 = np.asarray(x0, dtype=np.float64)
        if x0.ndim != 1 or not np.all(np.isfinite(x0)):
            raise ValueError("x0 must be a finite 1-D point")
        self._step = step
        self._cache = [x0]

    @property
    def dim(self) -> int:
        return len(self._cache[0])

    def point(self, n: int) -> np.ndarray:
        while len(self._cache) <= n:
            i = len(self._cache)
            nxt = np.asarray(self._step(i - 1, self._cache[-1]), dtype=np.float64)
            if not np.all(np.isfinite(nxt)):
                raise FloatingPointError(f"trajectory {self.name} left the finite regime at {i}")
            self._cache.append(nxt)
        return self._cache[n]

    def prefix(self, n: int) -> np.ndarray:
        """Points 0..n as an (n+1, d) array (shared, do not mutate)."""
        self.point(n)
        return np.stack(self._cache[: n + 1])

    def gap(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.point(i) - self.point(j)))


def picard(op: Operator, x0) -> Trajectory:
    """x_{n+1} = T x_n."""
    return Trajectory("picard", x0, lambda n, x: op(x))


def mann(
    op: Operator,
    x0,
    lambda_seq: SeqSpec,
    eps_seq: Optional[SeqSpec] = None,
    eps_dir=None,
) -> Trajectory:
    """x_{n+1} = (1-l_n) x_n + l_n T x_n, optionally perturbed by an
    additive error of norm eps_n along a fixed unit direction."""
    direction = None
    if eps_seq is not None:
        direction = np.asarray(
            eps_dir if eps_dir is not None else [1.0] + [0.0] * (len(np.atleast_1d(x0)) - 1),
            dtype=np.float64,
        )
        nrm = np.linalg.norm(direction)
        if nrm == 0:
            raise ValueError("perturbation direction must be nonzero")
        direction = direction / nrm

    def step(n, x):
        lam = lambda_seq(n)
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"averaging weight out of [0,1] at n={n}: {lam}")
        nxt = (1.0 - lam) * x + lam * op(x)
        if eps_seq is not None:
            nxt = nxt + eps_seq(n) * direction
        return nxt

    return Trajectory("mann", x0, step)


def mann_power(op: Operator, x0, lambda_seq: SeqSpec) -> Trajectory:
    """x_{n+1} = (1-l_n) x_n + l_n T^n x_n (iterate-power averaging, used
    for asymptotically nonexpansive maps)."""

    def step(n, x):
        lam = lambda_seq(n)
        y = x
        for _ in range(n):
            y = op(y)
        return (1.0 - lam) * x + lam * op(y)

    return Trajectory("mann_power", x0, step)


def ishikawa(op: Operator, x0, lambda_seq: SeqSpec, s_seq: SeqSpec) -> Trajectory:
    """x_{n+1} = (1-l_n) x_n + l_n T((1-s_n) x_n + s_n T x_n)."""

    def step(n, x):
        lam, s = lambda_seq(n), s_seq(n)
        if not (0.0 <= lam <= 1.0 and 0.0 <= s <= 1.0):
            raise ValueError(f"Ishikawa weights out of [0,1] at n={n}")
        inner = (1.0 - s) * x + s * op(x)
        return (1.0 - lam) * x + lam * op(inner)

    return Trajectory("ishikawa", x0, step)


class PpaTrajectory(Trajectory):
    """Proximal steps x_{n+1} = (I + g_n Q)^{-1}(x_n - g_n c), exposing
    the scaled increments u_n = (x_n - x_{n+1}) / g_n."""

    def __init__(self, q, c, x0, gamma_seq: SeqSpec):
        self.q = np.asarray(q, dtype=np.float64)
        self.c = np.asarray(c, dtype=np.float64)
        self.gamma_seq = gamma_seq
        self._resolvents: dict = {}

        def step(n, x):
            return self.resolvent(gamma_seq(n))(x)

        super().__init__("ppa", x0, step)

    def resolvent(self, gamma: float) -> Operator:
        if gamma <= 0:
            raise ValueError("proximal step sizes must be > 0")
        key = float(gamma)
        if key not in self._resolvents:
            self._resolvents[key] = prox_quadratic(self.q, self.c, key)
        return self._resolvents[key]

    def u(self, n: int) -> np.ndarray:
        return (self.point(n) - self.point(n + 1)) / self.gamma_seq(n)


def ppa(q, c, x0, gamma_seq: SeqSpec) -> PpaTrajectory:
    return PpaTrajectory(q, c, x0, gamma_seq)


# ---------------------------------------------------------------------------
# Residual families
# ---------------------------------------------------------------------------


def fixed_point_family(op: Operator) -> ApproximationFamily:
    """AF_k = points with ||p - Tp|| <= 1/(k+1); residual constant in k."""

    def residual(p, k):
        return float(np.linalg.norm(p - op(p)))

    return ApproximationFamily("fixed_point", residual)


def ppa_family(traj: PpaTrajectory) -> ApproximationFamily:
    """AF_k = points within 1/(k+1) of all resolvents J_{g_i}, i <= k."""

    def residual(p, k):
        best = 0.0
        seen = set()
        for i in range(k + 1):
            gamma = float(traj.gamma_seq(i))
            if gamma in seen:
                continue
            seen.add(gamma)
            best = max(best, float(np.linalg.norm(p - traj.resolvent(gamma)(p))))
        return best

    return ApproximationFamily("ppa_zeros", residual)


def monotone_tail_family(traj: Trajectory) -> ApproximationFamily:
    """AF_k = {p : x_k <= p} for a nondecreasing scalar trajectory,
    encoded so that residual <= 1/(k+1) iff x_k <= p exactly."""

    def residual(p, k):
        return max(0.0, float(traj.point(k)[0]) - float(p[0]) + 1.0 / (k + 1))

    return ApproximationFamily("monotone_tail", residual)


def residual_family(scheme: str, op: Optional[Operator] = None, traj: Optional[Trajectory] = None):
    """The approximation family a scheme's certificates quantify over."""
    if scheme == "ppa":
        if not isinstance(traj, PpaTrajectory):
            raise ValueError("ppa residual family needs the ppa trajectory")
        return ppa_family(traj)
    if scheme == "monotone":
        if traj is None:
            raise ValueError("monotone-tail family needs the trajectory")
        return monotone_tail_family(traj)
    if op is None:
        raise ValueError("fixed-point residual family needs the operator")
    return fixed_point_family(op)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def trajectory_csv(traj: Trajectory, steps: int, family: Optional[ApproximationFamily] = None,
                   k0: int = 0) -> str:
    """CSV of the first steps+1 points: n, coordinates, residual at k0."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["n"] + [f"x_{i}" for i in range(traj.dim)] + ["residual_k0"]
    writer.writerow(header)
    pts = traj.prefix(steps)
    for n in range(steps + 1):
        res = family.residual(pts[n], k0) if family is not None else ""
        writer.writerow([n] + [repr(float(v)) for v in pts[n]] + [repr(res) if res != "" else ""])
    return buf.getvalue()
