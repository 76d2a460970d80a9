"""Operators on R^d and the sampling validators for their declared
contraction-type properties.

Operators self-certify by sampling, not proof: a scenario aborts if a
declared property fails its validator, since the certified bounds are
only claimed under those hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class Domain:
    """Convex domain the iteration lives in: a closed ball or a box."""

    kind: str  # 'ball' | 'box'
    center: np.ndarray = None
    radius: float = 0.0
    lo: np.ndarray = None
    hi: np.ndarray = None

    @staticmethod
    def ball(center, radius: float) -> "Domain":
        center = np.asarray(center, dtype=np.float64)
        if radius <= 0:
            raise ValueError("ball radius must be > 0")
        return Domain("ball", center=center, radius=float(radius))

    @staticmethod
    def box(lo, hi) -> "Domain":
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape or np.any(lo >= hi):
            raise ValueError("box needs lo < hi componentwise")
        return Domain("box", lo=lo, hi=hi)

    @property
    def dim(self) -> int:
        return len(self.center) if self.kind == "ball" else len(self.lo)

    @property
    def diameter(self) -> float:
        if self.kind == "ball":
            return 2.0 * self.radius
        return float(np.linalg.norm(self.hi - self.lo))

    def norm_bound(self) -> float:
        """Upper bound on ||x|| over the domain."""
        if self.kind == "ball":
            return float(np.linalg.norm(self.center)) + self.radius
        return float(np.linalg.norm(np.maximum(np.abs(self.lo), np.abs(self.hi))))

    def contains(self, x, tau: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "ball":
            return float(np.linalg.norm(x - self.center)) <= self.radius + tau
        return bool(np.all(x >= self.lo - tau) and np.all(x <= self.hi + tau))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "ball":
            d = self.dim
            vec = rng.normal(size=(n, d))
            vec /= np.maximum(np.linalg.norm(vec, axis=1, keepdims=True), 1e-300)
            radii = self.radius * rng.uniform(size=(n, 1)) ** (1.0 / d)
            return self.center + vec * radii
        return rng.uniform(self.lo, self.hi, size=(n, len(self.lo)))

    def to_json(self) -> dict:
        if self.kind == "ball":
            return {"kind": "ball", "center": list(map(float, self.center)), "radius": self.radius}
        return {"kind": "box", "lo": list(map(float, self.lo)), "hi": list(map(float, self.hi))}

    @staticmethod
    def from_json(obj) -> "Domain":
        if obj["kind"] == "ball":
            return Domain.ball(obj["center"], obj["radius"])
        if obj["kind"] == "box":
            return Domain.box(obj["lo"], obj["hi"])
        raise ValueError(f"unknown domain kind {obj['kind']!r}")


class PropertyViolation(RuntimeError):
    """An operator failed a sampled validation of a declared property."""


@dataclass
class Operator:
    """A self-map of the scenario domain with declared properties."""

    kind: str
    apply: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    params: dict = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        return self.apply(np.asarray(x, dtype=np.float64))

    def powers(self, x, n: int) -> np.ndarray:
        """x, Tx, ..., T^n x stacked."""
        out = [np.asarray(x, dtype=np.float64)]
        for _ in range(n):
            out.append(self(out[-1]))
        return np.stack(out)

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}


def scale(a: float) -> Operator:
    a = float(a)
    return Operator("scale", lambda x: a * x, {"a": a})


def reflection(s: float = 1.0) -> Operator:
    s = float(s)
    return Operator("reflection", lambda x: -s * x, {"scale": s})


def proj_box(lo, hi) -> Operator:
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)

    def apply(x):
        return np.clip(x, lo, hi)

    return Operator("proj_box", apply, {"lo": list(map(float, lo)), "hi": list(map(float, hi))})


def proj_ball(center, radius: float) -> Operator:
    center = np.asarray(center, dtype=np.float64)
    radius = float(radius)

    def apply(x):
        v = x - center
        norm = float(np.linalg.norm(v))
        if norm <= radius:
            return x.copy()
        return center + v * (radius / norm)

    return Operator(
        "proj_ball", apply, {"center": list(map(float, center)), "radius": radius}
    )


def affine_map(a, c) -> Operator:
    a = np.asarray(a, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)

    def apply(x):
        return a @ x + c

    return Operator("affine", apply, {"a": a.tolist(), "c": c.tolist()})


def prox_quadratic(q, c, gamma: float = 1.0) -> Operator:
    """Resolvent step of the gradient of f(x) = x'Qx/2 + c'x:
    x -> (I + gamma*Q)^{-1} (x - gamma*c).  Q must be symmetric PSD."""
    q = np.asarray(q, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    gamma = float(gamma)
    if gamma <= 0:
        raise ValueError("prox step size must be > 0")
    if not np.allclose(q, q.T, atol=1e-12):
        raise ValueError("Q must be symmetric")
    eigs = np.linalg.eigvalsh(q)
    if eigs.min() < -1e-10:
        raise ValueError("Q must be positive semidefinite")
    return Operator(
        "prox_quadratic",
        _resolvent_fn(q, c, gamma),
        {"q": q.tolist(), "c": c.tolist(), "gamma": gamma},
    )


def _resolvent_fn(q: np.ndarray, c: np.ndarray, gamma: float):
    mat = np.eye(q.shape[0]) + gamma * q
    # direct factorization, recomputed only when gamma changes (d is small)
    inv = np.linalg.inv(mat)

    def apply(x):
        return inv @ (x - gamma * c)

    return apply


def spc_from_nonexpansive(base: Operator, kappa: float) -> Operator:
    """T = (N - kappa*Id) / (1 - kappa) for a nonexpansive N.

    An algebraic computation shows the squared-increment inequality with
    constant kappa holds exactly when N is nonexpansive; the sampling
    validator is the oracle for the construction."""
    kappa = float(kappa)
    if not 0 <= kappa < 1:
        raise ValueError("kappa must be in [0, 1)")

    def apply(x):
        return (base(x) - kappa * x) / (1.0 - kappa)

    return Operator(
        "spc_from_nonexpansive", apply, {"base": base.to_json(), "kappa": kappa}
    )


def table1d(xs, ys, overrides: Optional[dict] = None) -> Operator:
    """Piecewise-linear 1-D map with optional exact point overrides
    (admits genuinely discontinuous maps)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise ValueError("table1d needs matching 1-D knot/value arrays of length >= 2")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("table1d knots must be strictly increasing")
    over = {float(k): float(v) for k, v in (overrides or {}).items()}

    def apply(x):
        t = float(x[0])
        if t in over:
            return np.array([over[t]])
        return np.array([float(np.interp(t, xs, ys))])

    return Operator(
        "table1d",
        apply,
        {"x": xs.tolist(), "y": ys.tolist(), "overrides": {str(k): v for k, v in over.items()}},
    )


_BUILDERS = {
    "scale": lambda o: scale(o["a"]),
    "reflection": lambda o: reflection(o.get("scale", 1.0)),
    "proj_box": lambda o: proj_box(o["lo"], o["hi"]),
    "proj_ball": lambda o: proj_ball(o["center"], o["radius"]),
    "affine": lambda o: affine_map(o["a"], o["c"]),
    "prox_quadratic": lambda o: prox_quadratic(o["q"], o["c"], o.get("gamma", 1.0)),
    "spc_from_nonexpansive": lambda o: spc_from_nonexpansive(
        operator_from_json(o["base"]), o["kappa"]
    ),
    "table1d": lambda o: table1d(o["x"], o["y"], o.get("overrides")),
}


def operator_from_json(obj: dict) -> Operator:
    kind = obj.get("kind")
    if kind not in _BUILDERS:
        raise ValueError(f"unknown operator kind {kind!r}")
    return _BUILDERS[kind](obj)


# ---------------------------------------------------------------------------
# Sampling validators
# ---------------------------------------------------------------------------


def _norm(v) -> float:
    return float(np.linalg.norm(v))


def _special_points(op: Operator, domain: Domain) -> list:
    """Points worth sampling exactly (discontinuity overrides, endpoints)."""
    pts = []
    if op.kind == "table1d":
        for t in op.params.get("overrides", {}):
            x = np.array([float(t)])
            if domain.contains(x):
                pts.append(x)
    if op.kind == "spc_from_nonexpansive":
        pts.extend(_special_points(operator_from_json(op.params["base"]), domain))
    return pts


def validate_operator(
    op: Operator,
    properties: list,
    domain: Domain,
    rng: np.random.Generator,
    samples: int = 1000,
    tau: float = 1e-9,
    lam: Optional[float] = None,
    kappa: Optional[float] = None,
    mu: Optional[float] = None,
    k_seq: Optional[Callable[[int], float]] = None,
    power_depth: int = 50,
) -> list:
    """Sample pairs from the domain and check every declared property
    within additive slack tau.  Returns a list of violation records
    (empty = validated)."""
    violations = []
    pts = domain.sample(rng, samples)
    qts = domain.sample(rng, samples)
    specials = _special_points(op, domain)
    for i, sp in enumerate(specials[: samples // 2]):
        pts[i] = sp  # make discontinuity points participate in pairs

    if "self_map" in properties:
        for x in pts[: min(samples, 200)]:
            tx = op(x)
            if not domain.contains(tx, tau):
                violations.append({"property": "self_map", "x": x.tolist(), "Tx": tx.tolist()})
                break

    for x, y in zip(pts, qts):
        tx, ty = op(x), op(y)
        dxy = _norm(x - y)
        if "nonexpansive" in properties:
            if _norm(tx - ty) > dxy + tau:
                violations.append(
                    {"property": "nonexpansive", "x": x.tolist(), "y": y.tolist(),
                     "lhs": _norm(tx - ty), "rhs": dxy}
                )
        if "firmly_nonexpansive" in properties:
            if lam is None or not 0 < lam < 1:
                raise ValueError("firmly_nonexpansive validation needs lambda in (0,1)")
            mid_x = (1 - lam) * x + lam * tx
            mid_y = (1 - lam) * y + lam * ty
            dmid = _norm(mid_x - mid_y)
            if _norm(tx - ty) > dmid + tau or dmid > dxy + tau:
                violations.append(
                    {"property": "firmly_nonexpansive", "x": x.tolist(), "y": y.tolist(),
                     "d_T": _norm(tx - ty), "d_mid": dmid, "d": dxy}
                )
        if "spc" in properties:
            if kappa is None or not 0 <= kappa < 1:
                raise ValueError("spc validation needs kappa in [0,1)")
            lhs = _norm(tx - ty) ** 2
            rhs = dxy**2 + kappa * _norm((x - tx) - (y - ty)) ** 2
            if lhs > rhs + tau:
                violations.append(
                    {"property": "spc", "x": x.tolist(), "y": y.tolist(),
                     "lhs": lhs, "rhs": rhs}
                )
        if "condition_e" in properties:
            if mu is None or mu < 1:
                raise ValueError("condition_e validation needs mu >= 1")
            if _norm(x - ty) > mu * _norm(tx - x) + dxy + tau:
                violations.append(
                    {"property": "condition_e", "x": x.tolist(), "y": y.tolist(),
                     "lhs": _norm(x - ty), "rhs": mu * _norm(tx - x) + dxy}
                )
        if violations:
            break

    if "asymptotically_nonexpansive" in properties and not violations:
        if k_seq is None:
            raise ValueError("asymptotically_nonexpansive validation needs the k_n sequence")
        for x, y in zip(pts[:20], qts[:20]):
            xs = op.powers(x, power_depth)
            ys = op.powers(y, power_depth)
            d0 = _norm(x - y)
            for n in range(1, power_depth + 1):
                if _norm(xs[n] - ys[n]) > (1 + k_seq(n)) * d0 + tau:
                    violations.append(
                        {"property": "asymptotically_nonexpansive", "n": n,
                         "x": x.tolist(), "y": y.tolist()}
                    )
                    break
            if violations:
                break

    return violations
