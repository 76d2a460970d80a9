"""Empirical verification of certificates and moduli against actual
trajectories: witness search, window membership, and falsification-
oriented sampling of every modulus contract.

Sampling checks are falsification-oriented: a pass means no sampled
counterexample within budget, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._kernels import max_pairwise_sq
from .moduli import ApproximationFamily, ClosednessModuli, FejerModulus, GHModuli, Modulus
from .rates import CapExceeded, Certificate

VERIFIED = "verified"
INCONCLUSIVE = "witness_found_beyond_cap_none"
MODULUS_VIOLATION = "modulus_violation"
PROPERTY_VIOLATION = "property_violation"


@dataclass
class Witness:
    n: int
    window_end: int
    max_pairwise_gap: float
    max_window_residual: Optional[float] = None

    def to_json(self):
        obj = {"N": self.n, "window_end": self.window_end, "max_gap": self.max_pairwise_gap}
        if self.max_window_residual is not None:
            obj["max_residual"] = self.max_window_residual
        return obj


@dataclass
class Verdict:
    status: str
    witness: Optional[Witness] = None
    bound: Optional[str] = None
    trials: int = 0
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_json(self):
        obj = {"status": self.status, "bound": self.bound, "trials": self.trials}
        if self.witness is not None:
            obj["witness"] = self.witness.to_json()
        if self.violations:
            obj["violations"] = self.violations[:8]
        if self.details:
            obj["details"] = self.details
        return obj


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------


def window_gap(traj, start: int, end: int) -> float:
    pts = traj.prefix(end)[start:]
    return math.sqrt(max_pairwise_sq(pts))


def find_witness(
    traj,
    k: int,
    g: Modulus,
    cap: int,
    require_membership: Optional[ApproximationFamily] = None,
    tau: float = 1e-9,
) -> Optional[Witness]:
    """Least N <= cap whose whole window [N, N+g(N)] has pairwise gaps
    within 1/(k+1) (+tau), and, when requested, lies in the k-th
    approximation set.  None if no such N exists up to cap."""
    thresh = 1.0 / (k + 1) + tau
    for n in range(cap + 1):
        end = n + g(n)
        gap = window_gap(traj, n, end)
        if gap > thresh:
            continue
        max_res = None
        if require_membership is not None:
            pts = traj.prefix(end)[n:]
            max_res = max(require_membership.residual(p, k) for p in pts)
            if max_res > thresh:
                continue
        return Witness(n, end, gap, max_res)
    return None


# ---------------------------------------------------------------------------
# Membership samplers
# ---------------------------------------------------------------------------


def sample_member(
    family: ApproximationFamily,
    level: int,
    center: np.ndarray,
    rng: np.random.Generator,
    extra_candidates: Optional[list] = None,
    attempts: int = 40,
) -> Optional[np.ndarray]:
    """Rejection-sample a point of AF_level: the known member itself,
    perturbations of it at shrinking radii, then any extra candidates.
    Membership is tested without slack so no borderline point can later
    masquerade as a counterexample."""
    center = np.asarray(center, dtype=np.float64)
    if family.member(center, level):
        candidates = [center]
    else:
        candidates = []
    target = 1.0 / (level + 1)
    scale = 2.0 * target
    for _ in range(attempts):
        p = center + rng.uniform(-scale, scale, size=center.shape)
        if family.member(p, level):
            candidates.append(p)
            break
        scale *= 0.5
    for p in extra_candidates or []:
        if family.member(p, level):
            candidates.append(p)
    if not candidates:
        return None
    return candidates[int(rng.integers(len(candidates)))]


# ---------------------------------------------------------------------------
# Modulus checks
# ---------------------------------------------------------------------------


def check_fejer_modulus(
    traj,
    chi: FejerModulus,
    gh: GHModuli,
    family: ApproximationFamily,
    fixed_point,
    trials: int,
    rng: np.random.Generator,
    tau: float = 1e-9,
    eps_seq=None,
    n_max: int = 24,
    m_max: int = 10,
    r_max: int = 8,
) -> Verdict:
    """Sample (r, n, m) and members p of AF_{chi(n,m,r)}; check the
    windowed inequality H(d(x_{n+l}, p)) < G(d(x_n, p)) [+ error-sum]
    + 1/(r+1) + tau for all l <= m."""
    fixed_point = np.asarray(fixed_point, dtype=np.float64)
    violations = []
    sampled = 0
    for _ in range(trials):
        n = int(rng.integers(0, n_max + 1))
        m = int(rng.integers(0, m_max + 1))
        r = int(rng.integers(0, r_max + 1))
        level = chi(n, m, r)
        near = 0.25 / (r + 1) + 0.02
        extra = [
            traj.point(n) + rng.uniform(-near, near, size=traj.dim),
            traj.point(n) + rng.uniform(-0.01, 0.01, size=traj.dim),
        ]
        p = sample_member(family, level, fixed_point, rng, extra_candidates=extra)
        if p is None:
            continue
        sampled += 1
        err = 0.0
        if eps_seq is not None and m >= 1:
            err = sum(eps_seq(i) for i in range(n, n + m))
        base = gh.g_fn(float(np.linalg.norm(traj.point(n) - p)))
        budget_val = base + err + 1.0 / (r + 1) + tau
        for l in range(m + 1):
            lhs = gh.h_fn(float(np.linalg.norm(traj.point(n + l) - p)))
            if not lhs < budget_val:
                violations.append(
                    {"n": n, "m": m, "r": r, "l": l, "level": level,
                     "p": p.tolist(), "lhs": lhs, "rhs": budget_val}
                )
                break
        if violations:
            return Verdict(MODULUS_VIOLATION, trials=sampled, violations=violations)
    if sampled == 0:
        return Verdict(INCONCLUSIVE, trials=0, details={"reason": "sampler found no members"})
    return Verdict(VERIFIED, trials=sampled)


def check_uniform_closedness(
    family: ApproximationFamily,
    closed: ClosednessModuli,
    center,
    rng: np.random.Generator,
    trials: int,
    k_max: int = 8,
    tau: float = 1e-9,
) -> Verdict:
    """Sample q in AF_{delta_F(k)}, perturb to p within 1/(omega_F(k)+1),
    and assert p in AF_k (within tau)."""
    center = np.asarray(center, dtype=np.float64)
    violations = []
    sampled = 0
    for _ in range(trials):
        k = int(rng.integers(0, k_max + 1))
        level = closed.delta_f(k)
        q = sample_member(family, level, center, rng)
        if q is None:
            continue
        sampled += 1
        radius = 1.0 / (closed.omega_f(k) + 1)
        direction = rng.normal(size=q.shape)
        norm = np.linalg.norm(direction)
        if norm == 0:
            continue
        p = q + direction / norm * radius * rng.uniform()
        if not family.member(p, k, tau):
            violations.append(
                {"k": k, "q": q.tolist(), "p": p.tolist(),
                 "residual": family.residual(p, k)}
            )
            return Verdict(MODULUS_VIOLATION, trials=sampled, violations=violations)
    if sampled == 0:
        return Verdict(INCONCLUSIVE, trials=0, details={"reason": "sampler found no members"})
    return Verdict(VERIFIED, trials=sampled)


def check_asymptotic_regularity(
    traj,
    family: ApproximationFamily,
    k: int,
    phi_pp: Optional[Modulus] = None,
    phi_plus_value: Optional[int] = None,
    g: Optional[Modulus] = None,
    window: int = 100,
    cap: int = 200000,
    tau: float = 1e-9,
) -> Verdict:
    """Rate form: residual(x_n, k) <= 1/(k+1)+tau for all
    n in [phi_pp(k), phi_pp(k)+window].  Metastable form: some
    N <= phi_plus_value with the whole window [N, N+g(N)] in AF_k."""
    thresh = 1.0 / (k + 1) + tau
    if phi_pp is not None:
        start = phi_pp(k)
        if start > cap:
            return Verdict(INCONCLUSIVE, details={"reason": f"rate {start} beyond cap {cap}"})
        pts = traj.prefix(start + window)[start:]
        for off, p in enumerate(pts):
            res = family.residual(p, k)
            if res > thresh:
                return Verdict(
                    MODULUS_VIOLATION,
                    violations=[{"n": start + off, "residual": res, "k": k}],
                )
        return Verdict(VERIFIED, details={"checked": f"[{start}, {start + window}]"})
    if phi_plus_value is None or g is None:
        raise ValueError("need either phi_pp or (phi_plus_value, g)")
    search = min(phi_plus_value, cap)
    for n in range(search + 1):
        end = n + g(n)
        pts = traj.prefix(end)[n:]
        worst = max(family.residual(p, k) for p in pts)
        if worst <= thresh:
            return Verdict(
                VERIFIED, witness=Witness(n, end, 0.0, worst), details={"bound": str(phi_plus_value)}
            )
    if phi_plus_value > cap:
        return Verdict(INCONCLUSIVE, details={"reason": "bound beyond cap, no early witness"})
    return Verdict(
        MODULUS_VIOLATION,
        violations=[{"reason": f"no membership window within bound {phi_plus_value}", "k": k}],
    )


# ---------------------------------------------------------------------------
# Full certificate verification
# ---------------------------------------------------------------------------

_MEMBERSHIP_THEOREMS = {"psi_tilde", "sigma_tilde", "theta", "theta_fne", "omega", "omega_tilde"}


def verify_certificate(
    runtime,
    certificate: Optional[Certificate] = None,
    cap: Optional[int] = None,
    k: Optional[int] = None,
    g: Optional[Modulus] = None,
    prepass_trials: Optional[int] = None,
) -> Verdict:
    """End-to-end verdict for one scenario: validate the operator's
    declared properties, the trajectory's distance bound, the window
    modulus (sampled pre-pass), then search for a metastability witness
    under the certified bound.

    A bound beyond the search cap with no early witness is inconclusive,
    never a refutation; a missing witness strictly inside a small bound
    is reported as a modulus violation (some hypothesis failed)."""
    scenario = runtime.scenario
    k = scenario.k if k is None else k
    g = scenario.g if g is None else g
    cap = scenario.caps.search if cap is None else cap
    tau = scenario.checker.tau
    rng = np.random.default_rng(scenario.checker.seed)

    if certificate is None:
        from .scenario import build_certificate

        try:
            certificate = build_certificate(scenario, k=k, g=g)
        except CapExceeded as exc:
            return Verdict(INCONCLUSIVE, details={"reason": f"certificate: {exc}"})
    expected = runtime.expected_theorem
    if certificate.theorem != expected:
        raise ValueError(
            f"certificate provenance {certificate.theorem!r} does not match "
            f"scheme {scenario.scheme!r} (expected {expected!r})"
        )

    # 1. declared operator properties
    prop_violations = runtime.validate_properties(rng)
    if prop_violations:
        return Verdict(
            PROPERTY_VIOLATION,
            bound=certificate.bound_decimal(),
            violations=prop_violations,
        )

    # 2. trajectory-level guarantees (distance bound b, scheme shape)
    shape_violations = runtime.validate_trajectory(min(cap, 512), tau)
    if shape_violations:
        return Verdict(
            PROPERTY_VIOLATION,
            bound=certificate.bound_decimal(),
            violations=shape_violations,
        )

    # 3. window-modulus pre-pass
    trials = prepass_trials if prepass_trials is not None else min(scenario.checker.trials, 250)
    pre = check_fejer_modulus(
        runtime.traj,
        runtime.chi,
        runtime.gh,
        runtime.family,
        runtime.fixed_point,
        trials,
        rng,
        tau=tau,
        eps_seq=runtime.eps_seq,
    )
    if pre.status == MODULUS_VIOLATION:
        pre.bound = certificate.bound_decimal()
        return pre

    # 4. witness search under the bound
    search_cap = cap if certificate.saturated else min(cap, certificate.bound)
    membership = runtime.family if certificate.theorem in _MEMBERSHIP_THEOREMS else None
    witness = find_witness(runtime.traj, k, g, search_cap, membership, tau)
    bound_beyond_cap = certificate.saturated or certificate.bound > cap
    if witness is not None:
        if not certificate.dominates(witness.n):
            return Verdict(
                MODULUS_VIOLATION,
                witness=witness,
                bound=certificate.bound_decimal(),
                violations=[{"reason": "witness exceeds certified bound"}],
            )
        return Verdict(
            VERIFIED, witness=witness, bound=certificate.bound_decimal(), trials=pre.trials
        )
    if bound_beyond_cap:
        return Verdict(
            INCONCLUSIVE,
            bound=certificate.bound_decimal(),
            details={"reason": f"bound exceeds search cap {cap} and no witness found early"},
        )
    return Verdict(
        MODULUS_VIOLATION,
        bound=certificate.bound_decimal(),
        violations=[{"reason": f"no witness within bound {certificate.bound}"}],
    )
