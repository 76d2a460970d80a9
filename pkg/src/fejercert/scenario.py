"""Scenario configs: a declarative bundle (scheme, operator, parameters,
error level k, counter function g) consumed by both the rate calculators
and the empirical checker, so certificate and checker provably talk
about the same data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import jsonschema
import numpy as np

from . import schemes
from .iterations import (
    SeqSpec,
    Trajectory,
    ishikawa,
    mann,
    mann_power,
    picard,
    ppa,
    residual_family,
)
from .moduli import (
    ClosednessModuli,
    FejerModulus,
    GHModuli,
    Modulus,
    fejer_additive,
    fejer_window_linear,
    fejer_window_linear_double,
    gh_identity,
    identity,
    majorant,
    tb_modulus_ball,
    uniform_closedness_from_continuity,
)
from .operators import Domain, Operator, operator_from_json, validate_operator
from .rates import (
    Certificate,
    EvalBudget,
    LiminfBound,
    RateInputs,
    omega,
    omega_tilde,
    psi,
    psi_hat,
    psi_plus,
    psi_tilde,
)

SCHEMES = (
    "monotone",
    "picard_ne",
    "picard_fne",
    "mann_spc",
    "ishikawa",
    "cond_e",
    "ppa",
    "quasi_mann",
    "mann_asymptotic",
)

EXPECTED_THEOREM = {
    "monotone": "psi",
    "picard_ne": "sigma",
    "picard_fne": "theta_fne",
    "mann_spc": "omega_tilde",
    "ishikawa": "psi_tilde",
    "cond_e": "omega",
    "ppa": "psi_tilde",
    "quasi_mann": "psi_hat",
    "mann_asymptotic": "psi_tilde",
}


class ScenarioError(ValueError):
    """Schema or range violation in a scenario config (names the field)."""


@dataclass
class Caps:
    search: int = 20000
    g_evals: int = 10**6
    saturation: Optional[int] = 10**60

    def to_json(self):
        return {
            "search": self.search,
            "g_evals": self.g_evals,
            "saturation": None if self.saturation is None else str(self.saturation),
        }


@dataclass
class CheckerConfig:
    trials: int = 300
    tau: float = 1e-9
    seed: int = 0

    def to_json(self):
        return {"trials": self.trials, "tau": self.tau, "seed": self.seed}


_SCHEMA = {
    "type": "object",
    "required": ["name", "scheme", "dim", "x0", "k", "g"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "scheme": {"enum": list(SCHEMES)},
        "dim": {"type": "integer", "minimum": 1, "maximum": 16},
        "operator": {"type": "object"},
        "quadratic": {
            "type": "object",
            "required": ["q"],
            "properties": {"q": {"type": "array"}, "c": {"type": "array"}},
        },
        "x0": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "domain": {"type": "object"},
        "fixed_point": {"type": "array", "items": {"type": "number"}},
        "k": {"type": "integer", "minimum": 0},
        "g": {"type": "object"},
        "params": {"type": "object"},
        "phi": {"type": "object"},
        "xi": {"type": "object"},
        "liminf_bound": {"type": "object"},
        "chi_override": {"type": "object"},
        "gamma": {"type": "object"},
        "caps": {"type": "object"},
        "checker": {"type": "object"},
        "seed": {"type": "integer"},
    },
}


@dataclass
class Scenario:
    name: str
    scheme: str
    dim: int
    x0: np.ndarray
    domain: Domain
    k: int
    g: Modulus
    params: schemes.SchemeParams
    operator_spec: Optional[dict] = None
    quadratic: Optional[dict] = None
    fixed_point: Optional[np.ndarray] = None
    phi: Optional[Modulus] = None
    xi: Optional[Modulus] = None
    liminf: Optional[LiminfBound] = None
    chi_override: Optional[FejerModulus] = None
    gamma: Modulus = None
    caps: Caps = field(default_factory=Caps)
    checker: CheckerConfig = field(default_factory=CheckerConfig)
    seed: int = 0
    eps_dir: Optional[np.ndarray] = None
    k_seq: Optional[SeqSpec] = None

    def to_json(self) -> dict:
        obj = {
            "name": self.name,
            "scheme": self.scheme,
            "dim": self.dim,
            "x0": [float(v) for v in self.x0],
            "domain": self.domain.to_json(),
            "k": self.k,
            "g": self.g.to_json(),
            "params": _params_to_json(self.params, self.eps_dir, self.k_seq),
            "caps": self.caps.to_json(),
            "checker": self.checker.to_json(),
            "seed": self.seed,
        }
        if self.operator_spec is not None:
            obj["operator"] = self.operator_spec
        if self.quadratic is not None:
            obj["quadratic"] = self.quadratic
        if self.fixed_point is not None:
            obj["fixed_point"] = [float(v) for v in self.fixed_point]
        if self.phi is not None:
            obj["phi"] = self.phi.to_json()
        if self.xi is not None:
            obj["xi"] = self.xi.to_json()
        if self.liminf is not None:
            obj["liminf_bound"] = self.liminf.to_json()
        if self.chi_override is not None:
            obj["chi_override"] = self.chi_override.to_json()
        if self.gamma is not None and not self._gamma_defaulted:
            obj["gamma"] = self.gamma.to_json()
        return obj

    _gamma_defaulted: bool = False

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _params_to_json(p: schemes.SchemeParams, eps_dir, k_seq) -> dict:
    obj = {}
    if p.b is not None:
        obj["b"] = p.b
    if p.lam is not None:
        obj["lambda"] = p.lam
    if p.kappa is not None:
        obj["kappa"] = p.kappa
    if p.mu is not None:
        obj["mu"] = p.mu
    if p.L is not None:
        obj["L"] = p.L
    if p.N0:
        obj["N0"] = p.N0
    if p.K is not None:
        obj["K"] = p.K
    if p.theta is not None:
        obj["theta"] = p.theta.to_json()
    for name, seq in (
        ("gamma_seq", p.gamma_seq),
        ("lambda_seq", p.lambda_seq),
        ("s_seq", p.s_seq),
        ("eps_seq", p.eps_seq),
    ):
        if seq is not None:
            obj[name] = seq.to_json()
    if eps_dir is not None:
        obj["eps_dir"] = [float(v) for v in eps_dir]
    if k_seq is not None:
        obj["k_seq"] = k_seq.to_json()
    if p.eta != "cat0":
        obj["eta"] = p.eta
    return obj


def _fail(path: str, message: str):
    raise ScenarioError(f"{path}: {message}")


def _parse_params(obj: dict) -> tuple:
    keys = {
        "b", "lambda", "kappa", "mu", "L", "N0", "K", "theta",
        "gamma_seq", "lambda_seq", "s_seq", "eps_seq", "eps_dir", "k_seq", "eta",
    }
    for key in obj:
        if key not in keys:
            _fail(f"params.{key}", "unknown parameter")
    seq = lambda name: SeqSpec.from_json(obj[name]) if name in obj else None
    params = schemes.SchemeParams(
        b=obj.get("b"),
        lam=obj.get("lambda"),
        kappa=obj.get("kappa"),
        mu=obj.get("mu"),
        L=obj.get("L"),
        N0=obj.get("N0", 0),
        K=obj.get("K"),
        theta=Modulus.from_json(obj["theta"]) if "theta" in obj else None,
        gamma_seq=seq("gamma_seq"),
        lambda_seq=seq("lambda_seq"),
        s_seq=seq("s_seq"),
        eps_seq=seq("eps_seq"),
        eta=obj.get("eta", "cat0"),
    )
    eps_dir = np.asarray(obj["eps_dir"], dtype=np.float64) if "eps_dir" in obj else None
    k_seq = SeqSpec.from_json(obj["k_seq"]) if "k_seq" in obj else None
    return params, eps_dir, k_seq


def _seq_sup_from(seq: SeqSpec, n0: int, horizon: int = 4096) -> float:
    """Supremum of a closed-form sequence over n >= n0."""
    if seq.kind == "const":
        return seq.params[0]
    if seq.kind == "affine_inv":
        a, b = seq.params
        return a + b / (n0 + 1) if b >= 0 else a  # decreasing from n0, or increasing toward a
    if seq.kind == "geometric":
        c, _ = seq.params
        return max(0.0, c) if n0 == 0 else max(0.0, seq(n0))
    values, tail = seq.params
    pool = [values[i] for i in range(n0, len(values))]
    if tail is not None:
        pool.append(tail)
    if not pool:
        _fail("params", f"sequence table exhausted before index {n0}")
    return max(pool)


def _validate_scheme(sc: Scenario):
    p = sc.params
    scheme = sc.scheme
    needs_operator = scheme != "ppa"
    if needs_operator and sc.operator_spec is None:
        _fail("operator", f"scheme {scheme} requires an operator")
    if scheme == "ppa" and sc.quadratic is None:
        _fail("quadratic", "ppa requires the quadratic data (Q, c)")

    def need(*names):
        for name in names:
            if getattr(p, "lam" if name == "lambda" else name, None) is None:
                _fail(f"params.{name}", f"required for scheme {scheme}")

    if scheme == "picard_ne" and sc.phi is None:
        _fail("phi", "picard_ne requires an approximate-fixed-point bound")
    if scheme == "picard_fne":
        need("b", "lambda")
        if not 0 < p.lam < 1:
            _fail("params.lambda", f"must be in (0, 1), got {p.lam}")
        if p.b <= 0:
            _fail("params.b", "must be > 0")
    if scheme == "mann_spc":
        need("b", "kappa")
        if not 0 <= p.kappa < 1:
            _fail("params.kappa", f"must be in [0, 1), got {p.kappa}")
        lam_seq = p.lambda_seq or (SeqSpec.const(p.lam) if p.lam is not None else None)
        if lam_seq is None:
            _fail("params.lambda", "mann_spc needs lambda or lambda_seq")
        lo, hi = lam_seq.bounds()
        if not (p.kappa < lo and hi < 1):
            _fail(
                "params.lambda_seq" if p.lambda_seq else "params.lambda",
                f"weights must lie in (kappa, 1) = ({p.kappa}, 1), got range [{lo}, {hi}]",
            )
        if p.lam is None and p.theta is None:
            _fail("params.theta", "non-constant weights need an explicit divergence rate")
    if scheme == "ishikawa":
        need("b", "L")
        if p.L < 1:
            _fail("params.L", "must be >= 1")
        if p.lambda_seq is None and p.lam is None:
            _fail("params.lambda", "ishikawa needs lambda or lambda_seq")
        if p.s_seq is None:
            _fail("params.s_seq", "ishikawa needs the inner weight sequence")
        if p.lam is None and p.theta is None:
            _fail("params.theta", "non-constant weights need an explicit divergence rate")
        cap = 1.0 - 1.0 / p.L
        sup = _seq_sup_from(p.s_seq, p.N0)
        if sup > cap + 1e-12:
            _fail("params.s_seq", f"sup s_n = {sup} beyond 1 - 1/L = {cap} from N0={p.N0}")
    if scheme == "cond_e":
        need("b", "mu", "L")
        if p.mu < 1:
            _fail("params.mu", "must be >= 1")
        if p.L < 2:
            _fail("params.L", "must be >= 2")
        lam_seq = p.lambda_seq or (SeqSpec.const(p.lam) if p.lam is not None else None)
        if lam_seq is None:
            _fail("params.lambda", "cond_e needs lambda or lambda_seq")
        lo, hi = lam_seq.bounds()
        if lo < 1.0 / p.L - 1e-12 or hi > 1.0 - 1.0 / p.L + 1e-12:
            _fail(
                "params.lambda_seq" if p.lambda_seq else "params.lambda",
                f"weights must lie in [1/L, 1-1/L] = [{1.0/p.L}, {1.0-1.0/p.L}]",
            )
    if scheme == "ppa":
        need("b", "theta", "gamma_seq")
        lo, _ = p.gamma_seq.bounds()
        if lo <= 0:
            _fail("params.gamma_seq", "step sizes must be > 0")
        if p.b <= 0:
            _fail("params.b", "must be > 0")
    if scheme == "quasi_mann":
        if p.eps_seq is None:
            _fail("params.eps_seq", "quasi_mann needs the error sequence")
        if p.eps_seq.kind not in ("geometric", "table"):
            _fail("params.eps_seq", "error terms must be summable (geometric or finite table)")
        if sc.xi is None:
            _fail("xi", "quasi_mann needs a Cauchy modulus for the error sum")
        if sc.liminf is None:
            _fail("liminf_bound", "quasi_mann needs a liminf membership bound")
        if p.lambda_seq is None and p.lam is None:
            _fail("params.lambda", "quasi_mann needs lambda or lambda_seq")
    if scheme == "mann_asymptotic":
        need("K", "L")
        if sc.phi is None:
            _fail("phi", "mann_asymptotic requires a user-supplied membership bound")
        if p.lambda_seq is None and p.lam is None:
            _fail("params.lambda", "mann_asymptotic needs lambda or lambda_seq")
    if scheme == "monotone" and sc.phi is None:
        sc.phi = identity()


def parse_scenario(text) -> Scenario:
    """Validated Scenario from a JSON document (string or dict)."""
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from exc
    else:
        obj = text
    try:
        jsonschema.validate(obj, _SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise ScenarioError(f"{path or '/'}: {exc.message}") from exc

    params, eps_dir, k_seq = _parse_params(obj.get("params", {}))
    dim = obj["dim"]
    x0 = np.asarray(obj["x0"], dtype=np.float64)
    if len(x0) != dim:
        _fail("x0", f"length {len(x0)} does not match dim {dim}")
    domain = (
        Domain.from_json(obj["domain"])
        if "domain" in obj
        else Domain.ball(np.zeros(dim), 1.0)
    )
    if domain.dim != dim:
        _fail("domain", f"dimension {domain.dim} does not match dim {dim}")
    if not domain.contains(x0):
        _fail("x0", "starting point must lie in the domain")

    caps_obj = obj.get("caps", {})
    sat = caps_obj.get("saturation", str(10**60))
    caps = Caps(
        search=caps_obj.get("search", 20000),
        g_evals=caps_obj.get("g_evals", 10**6),
        saturation=None if sat is None else int(sat),
    )
    chk_obj = obj.get("checker", {})
    checker = CheckerConfig(
        trials=chk_obj.get("trials", 300),
        tau=chk_obj.get("tau", 1e-9),
        seed=chk_obj.get("seed", 0),
    )

    sc = Scenario(
        name=obj["name"],
        scheme=obj["scheme"],
        dim=dim,
        x0=x0,
        domain=domain,
        k=obj["k"],
        g=Modulus.from_json(obj["g"]),
        params=params,
        operator_spec=obj.get("operator"),
        quadratic=obj.get("quadratic"),
        fixed_point=(
            np.asarray(obj["fixed_point"], dtype=np.float64) if "fixed_point" in obj else None
        ),
        phi=Modulus.from_json(obj["phi"]) if "phi" in obj else None,
        xi=Modulus.from_json(obj["xi"]) if "xi" in obj else None,
        liminf=LiminfBound.from_json(obj["liminf_bound"]) if "liminf_bound" in obj else None,
        chi_override=(
            FejerModulus.from_json(obj["chi_override"]) if "chi_override" in obj else None
        ),
        caps=caps,
        checker=checker,
        seed=obj.get("seed", 0),
        eps_dir=eps_dir,
        k_seq=k_seq,
    )
    if "gamma" in obj:
        sc.gamma = Modulus.from_json(obj["gamma"])
        sc._gamma_defaulted = False
    else:
        sc.gamma = tb_modulus_ball(dim, domain.norm_bound())
        sc._gamma_defaulted = True
    if sc.phi is not None and not sc.phi.monotone:
        sc.phi = majorant(sc.phi, cap=caps.g_evals)
    if sc.operator_spec is not None:
        operator_from_json(sc.operator_spec)  # fail fast on bad operator specs
    _validate_scheme(sc)
    return sc


# ---------------------------------------------------------------------------
# Certificates (pure: no trajectories involved)
# ---------------------------------------------------------------------------


def build_certificate(
    sc: Scenario,
    k: Optional[int] = None,
    g: Optional[Modulus] = None,
    budget: Optional[EvalBudget] = None,
) -> Certificate:
    """Compute the scenario's certificate, optionally overriding (k, g)."""
    k = sc.k if k is None else k
    g = sc.g if g is None else g
    budget = budget or EvalBudget(g_evals=sc.caps.g_evals, saturation=sc.caps.saturation)
    p = sc.params
    gamma = sc.gamma
    scheme = sc.scheme

    if scheme == "monotone":
        inputs = RateInputs(k, g, sc.phi or identity(), fejer_additive(), gh_identity(), gamma)
        return psi(inputs, budget)
    if scheme == "picard_ne":
        return schemes.picard_ne_sigma(k, g, sc.phi, gamma, budget)
    if scheme == "picard_fne":
        return schemes.theta_fne(k, g, gamma, p.b, p.lam, budget)
    if scheme == "mann_spc":
        sm = schemes.spc_moduli(p)
        inputs = RateInputs(k, g, sm.phi_pp, sm.chi, sm.gh, gamma, closed=sm.closed)
        fn = psi_plus(inputs, sm.phi_pp)  # Cauchy side uses phi = (rate)^M
        return omega_tilde(k, g, fn, sm.phi_pp, budget)
    if scheme == "ishikawa":
        phi = schemes.ishikawa_apfp_modulus(p)
        closed = uniform_closedness_from_continuity(identity())
        inputs = RateInputs(k, g, phi, fejer_window_linear_double(), gh_identity(), gamma, closed)
        return psi_tilde(inputs, budget)
    if scheme == "cond_e":
        chi, closed = schemes.cond_e_moduli(p)
        phi0 = schemes.cond_e_phi_zero(p)
        inputs = RateInputs(k, g, phi0, chi, gh_identity(), gamma, closed=closed)
        fn = psi_plus(inputs, phi0)
        return omega(k, g, fn, schemes.cond_e_phi_plus_functional(p), budget)
    if scheme == "ppa":
        pm = schemes.ppa_moduli(p)
        inputs = RateInputs(k, g, pm.phi, pm.chi, gh_identity(), gamma, closed=pm.closed)
        return psi_tilde(inputs, budget)
    if scheme == "quasi_mann":
        inputs = RateInputs(
            k, g, identity(), fejer_window_linear(), gh_identity(), gamma, xi=sc.xi
        )
        return psi_hat(inputs, sc.liminf, budget)
    if scheme == "mann_asymptotic":
        chi, gh = schemes.asymptotically_ne_moduli(p)
        lip = 1 + p.K
        closed = uniform_closedness_from_continuity(
            Modulus.from_json({"kind": "affine", "a": str(lip), "b": str(lip)})
        )
        inputs = RateInputs(k, g, sc.phi, chi, gh, gamma, closed=closed)
        return psi_tilde(inputs, budget)
    raise ScenarioError(f"scheme: unknown scheme {scheme!r}")


# ---------------------------------------------------------------------------
# Runtime (trajectory + family + checker-facing moduli)
# ---------------------------------------------------------------------------


_PROPERTIES = {
    "monotone": ("self_map",),
    "picard_ne": ("nonexpansive", "self_map"),
    "picard_fne": ("firmly_nonexpansive", "self_map"),
    "mann_spc": ("spc", "self_map"),
    "ishikawa": ("nonexpansive", "self_map"),
    "cond_e": ("condition_e", "self_map"),
    "ppa": ("firmly_nonexpansive", "self_map"),
    "quasi_mann": ("nonexpansive", "self_map"),
    "mann_asymptotic": ("asymptotically_nonexpansive", "self_map"),
}


@dataclass
class ScenarioRuntime:
    scenario: Scenario
    op: Optional[Operator]
    traj: Trajectory
    family: object
    chi: FejerModulus
    gh: GHModuli
    closed: Optional[ClosednessModuli]
    fixed_point: np.ndarray
    properties: tuple
    prop_kwargs: dict
    eps_seq: Optional[SeqSpec] = None

    @property
    def expected_theorem(self) -> str:
        return EXPECTED_THEOREM[self.scenario.scheme]

    def validate_properties(self, rng: np.random.Generator) -> list:
        if self.op is None:
            return []
        return validate_operator(
            self.op,
            list(self.properties),
            self.scenario.domain,
            rng,
            samples=max(200, self.scenario.checker.trials),
            tau=self.scenario.checker.tau,
            **self.prop_kwargs,
        )

    def validate_trajectory(self, prefix_len: int, tau: float) -> list:
        """Distance-bound and shape guarantees along a prefix."""
        violations = []
        pts = self.traj.prefix(prefix_len)
        b = self.scenario.params.b
        if b is not None and self.fixed_point is not None:
            slack = tau
            if self.eps_seq is not None:
                slack += _eps_total(self.eps_seq)
            dists = np.linalg.norm(pts - self.fixed_point, axis=1)
            worst = int(np.argmax(dists))
            if dists[worst] > b + slack:
                violations.append(
                    {"property": "distance_bound", "n": worst,
                     "distance": float(dists[worst]), "b": b}
                )
        if self.scenario.scheme == "monotone":
            xs = pts[:, 0]
            if np.any(np.diff(xs) < -tau):
                violations.append({"property": "monotone_trajectory"})
            if xs.min() < -tau or xs.max() > 1 + tau:
                violations.append({"property": "unit_interval_range"})
        return violations


def _eps_total(seq: SeqSpec) -> float:
    if seq.kind == "geometric":
        c, rho = seq.params
        return c / (1.0 - rho)
    if seq.kind == "table":
        values, tail = seq.params
        if tail not in (None, 0, 0.0):
            raise ScenarioError("params.eps_seq: table errors must end in a zero tail")
        return float(sum(values))
    raise ScenarioError("params.eps_seq: not summable")


def build_runtime(sc: Scenario) -> ScenarioRuntime:
    p = sc.params
    op = operator_from_json(sc.operator_spec) if sc.operator_spec is not None else None
    lam_seq = p.lambda_seq or (SeqSpec.const(p.lam) if p.lam is not None else None)

    if sc.scheme in ("monotone", "picard_ne", "picard_fne"):
        traj = picard(op, sc.x0)
    elif sc.scheme in ("mann_spc", "cond_e"):
        traj = mann(op, sc.x0, lam_seq)
    elif sc.scheme == "quasi_mann":
        traj = mann(op, sc.x0, lam_seq, eps_seq=p.eps_seq, eps_dir=sc.eps_dir)
    elif sc.scheme == "ishikawa":
        traj = ishikawa(op, sc.x0, lam_seq, p.s_seq)
    elif sc.scheme == "mann_asymptotic":
        traj = mann_power(op, sc.x0, lam_seq)
    elif sc.scheme == "ppa":
        q = np.asarray(sc.quadratic["q"], dtype=np.float64)
        c = np.asarray(sc.quadratic.get("c", [0.0] * sc.dim), dtype=np.float64)
        traj = ppa(q, c, sc.x0, p.gamma_seq)
    else:
        raise ScenarioError(f"scheme: unknown scheme {sc.scheme!r}")

    if sc.scheme == "ppa":
        family = residual_family("ppa", traj=traj)
        check_op = traj.resolvent(p.gamma_seq(0))
    elif sc.scheme == "monotone":
        family = residual_family("monotone", traj=traj)
        check_op = op
    else:
        family = residual_family("fixed_point", op=op)
        check_op = op

    if sc.chi_override is not None:
        chi = sc.chi_override
        gh = gh_identity()
        closed = None
    elif sc.scheme == "monotone":
        chi, gh, closed = fejer_additive(), gh_identity(), None
    elif sc.scheme in ("picard_ne", "picard_fne", "quasi_mann"):
        chi, gh = fejer_window_linear(), gh_identity()
        closed = uniform_closedness_from_continuity(identity())
    elif sc.scheme == "ishikawa":
        chi, gh = fejer_window_linear_double(), gh_identity()
        closed = uniform_closedness_from_continuity(identity())
    elif sc.scheme == "mann_spc":
        sm = schemes.spc_moduli(p)
        chi, gh, closed = sm.chi, sm.gh, sm.closed
    elif sc.scheme == "cond_e":
        chi, closed = schemes.cond_e_moduli(p)
        gh = gh_identity()
    elif sc.scheme == "ppa":
        pm = schemes.ppa_moduli(p)
        chi, gh, closed = pm.chi, gh_identity(), pm.closed
    else:  # mann_asymptotic
        chi, gh = schemes.asymptotically_ne_moduli(p)
        closed = None

    fixed_point = sc.fixed_point if sc.fixed_point is not None else np.zeros(sc.dim)

    prop_kwargs = {}
    props = _PROPERTIES[sc.scheme]
    if "firmly_nonexpansive" in props:
        prop_kwargs["lam"] = 0.5 if sc.scheme == "ppa" else p.lam
    if "spc" in props:
        prop_kwargs["kappa"] = p.kappa
    if "condition_e" in props:
        prop_kwargs["mu"] = p.mu
    if "asymptotically_nonexpansive" in props:
        kseq = sc.k_seq or SeqSpec.const(0.0)
        prop_kwargs["k_seq"] = kseq

    return ScenarioRuntime(
        scenario=sc,
        op=check_op,
        traj=traj,
        family=family,
        chi=chi,
        gh=gh,
        closed=closed,
        fixed_point=np.asarray(fixed_point, dtype=np.float64),
        properties=props,
        prop_kwargs=prop_kwargs,
        eps_seq=p.eps_seq if sc.scheme == "quasi_mann" else None,
    )
