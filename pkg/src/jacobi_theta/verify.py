"""Numerical checks of the transformation laws, the support condition and quasi-Jacobi depth.

Every check returns a :class:`VerificationReport`.  Residuals are stored both
absolute and relative (``|lhs - rhs| / max(1, |rhs|)``); the verdict uses the
relative one.  Checks whose hypotheses fail raise InadmissibleSpec instead of
reporting a meaningless failure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    HypothesisViolation,
    IllConditionedFit,
    InadmissibleSpec,
    NegativeD,
    NotCongruent,
    SingularGram,
)
from .expansion import FourierExpansion
from .jacobi_group import (
    JacobiGroupElement,
    act,
    elliptic_factor,
    gamma0_element,
    modular_factor,
)
from .lattice import check_residue
from .quadform import (
    Admissibility,
    DirectionSet,
    QuadraticForm,
    SphericalVector,
    bilinear,
    check_admissible,
    epsilon,
    inverse_exact,
    make_spherical,
    quad,
)
from .series import (
    DEFAULT_EPS,
    EvalInfo,
    ThetaSpec,
    TruncatedXPolynomial,
    congruence_theta_eval,
    delta_coeff,
    psi_eval,
    record_truncation,
    theta_eval,
    theta_generating_poly,
)

DEFAULT_TOL = 1e-8
ADMISSIBLE_TOL = 1e-12

Point = tuple[complex, Sequence[complex]]


class Identity(str, Enum):
    MODULAR_THETA = "modular-theta"
    MODULAR_PSI = "modular-psi"
    ELLIPTIC_THETA = "elliptic-theta"
    ELLIPTIC_PSI = "elliptic-psi"
    TRANSLATION = "translation-polynomial"
    GENERATING = "generating"
    CONGRUENCE = "congruence"
    SUPPORT = "support"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass(frozen=True)
class Sample:
    point: dict
    lhs: complex
    rhs: complex

    @property
    def abs_residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_residual(self) -> float:
        return self.abs_residual / max(1.0, abs(self.rhs))


@dataclass(frozen=True)
class VerificationReport:
    identity_name: Identity
    samples: tuple[Sample, ...]
    tolerance: float
    truncation: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max((s.rel_residual for s in self.samples), default=0.0)

    @property
    def max_abs_residual(self) -> float:
        return max((s.abs_residual for s in self.samples), default=0.0)

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.max_residual <= self.tolerance else Verdict.FAIL

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def sample_records(self) -> list[dict]:
        return [
            {
                "record": "sample",
                "identity": self.identity_name.value,
                "point": s.point,
                "lhs": _cpair(s.lhs),
                "rhs": _cpair(s.rhs),
                "abs_residual": s.abs_residual,
                "rel_residual": s.rel_residual,
            }
            for s in self.samples
        ]

    def summary(self) -> dict:
        return {
            "identity": self.identity_name.value,
            "samples": len(self.samples),
            "max_residual": self.max_residual,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "truncation": self.truncation,
        }


def _cpair(x: complex) -> list[float]:
    x = complex(x)
    return [x.real, x.imag]


def _point_dict(tau: complex, z, **extra) -> dict:
    out = {"tau": _cpair(tau), "z": [_cpair(t) for t in z]}
    out.update(extra)
    return out


def _truncation_summary(infos: list[EvalInfo], eps: float | None) -> dict:
    return {
        "eps": eps,
        "evaluations": len(infos),
        "max_radius": max((i.radius for i in infos), default=0),
        "max_points": max((i.points for i in infos), default=0),
        "max_increment": max((i.increment for i in infos), default=0.0),
    }


def sample_points(
    n: int,
    count: int = 8,
    seed: int = 0,
    im_tau: tuple[float, float] = (0.5, 2.0),
    re_tau: float = 0.5,
    z_radius: float = 0.3,
) -> list[Point]:
    """Deterministic random points with ``Im tau`` in ``im_tau``, ``|Re tau| <= re_tau``
    and ``|z_j| <= z_radius``."""
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(count):
        tau = complex(rng.uniform(-re_tau, re_tau), rng.uniform(*im_tau))
        radius = z_radius * np.sqrt(rng.uniform(0, 1, n))
        angle = rng.uniform(0, 2 * math.pi, n)
        points.append((tau, tuple(complex(r * math.cos(a), r * math.sin(a)) for r, a in zip(radius, angle))))
    return points


def _in_gamma0(gamma, N: int) -> JacobiGroupElement:
    if isinstance(gamma, JacobiGroupElement):
        gamma = (gamma.a, gamma.b, gamma.c, gamma.d)
    try:
        return gamma0_element(*gamma, N)
    except NotCongruent as exc:
        raise InadmissibleSpec(f"gamma is not in Gamma_0({N}): {exc}") from exc


def _index(directions: DirectionSet) -> np.ndarray:
    return directions.index_matrix


def _check_z(z, n: int) -> tuple[complex, ...]:
    if len(z) != n:
        raise DimensionMismatch(f"z must have length {n}")
    return tuple(complex(t) for t in z)


def _flags(spec: ThetaSpec) -> Admissibility:
    # with k = 0 the series does not depend on v, so v's hypotheses are vacuous
    if spec.k == 0:
        return Admissibility(True, True)
    return check_admissible(spec.form, spec.directions, spec.v, ADMISSIBLE_TOL)


def _evaluator(kind: str, spec: ThetaSpec, eps: float) -> tuple[Callable, Identity, Identity]:
    flags = _flags(spec)
    if kind == "theta":
        if not (flags.isotropic and flags.orthogonal):
            raise InadmissibleSpec(f"theta laws need Q(v) = 0 and B(v, h_j) = 0; got {flags}")
        return (lambda t, z: theta_eval(spec, t, z, eps)), Identity.MODULAR_THETA, Identity.ELLIPTIC_THETA
    if kind == "psi":
        if not flags.orthogonal:
            raise InadmissibleSpec(f"Psi laws need B(v, h_j) = 0; got {flags}")
        return (lambda t, z: psi_eval(spec, t, z, eps)), Identity.MODULAR_PSI, Identity.ELLIPTIC_PSI
    raise ValueError(f"kind must be 'theta' or 'psi', got {kind!r}")


def verify_modular(
    kind: str, spec: ThetaSpec, gamma, points: Sequence[Point], tol: float = DEFAULT_TOL, eps: float = DEFAULT_EPS
) -> VerificationReport:
    """``F(g tau, g z)`` against ``eps(d) (c tau + d)^(k+r) exp(pi i c G[z]/(c tau + d)) F(tau, z)``."""
    F, identity, _ = _evaluator(kind, spec, eps)
    g = _in_gamma0(gamma, spec.form.level_N)
    chi = epsilon(spec.form, g.d)
    weight = spec.k + spec.form.r
    samples = []
    with record_truncation() as infos:
        for tau, z in points:
            z = _check_z(z, spec.n)
            gt, gz = act(g, tau, z)
            lhs = F(gt, gz)
            rhs = chi * modular_factor(g, weight, _index(spec.directions), tau, z) * F(tau, z)
            samples.append(Sample(_point_dict(tau, z, gamma=[g.a, g.b, g.c, g.d]), lhs, rhs))
    return VerificationReport(identity, tuple(samples), tol, _truncation_summary(infos, eps))


def _shift(tau: complex, z, lam) -> np.ndarray:
    # the integer part mu is dropped: exp(2 pi i mu.B(m, h)) = 1 exactly
    return np.asarray(z, dtype=complex) + complex(tau) * np.asarray(lam, dtype=float)


def _lattice_vector(x, n: int, name: str) -> tuple[int, ...]:
    if len(x) != n:
        raise DimensionMismatch(f"{name} must have length {n}")
    return tuple(int(t) for t in x)


def verify_elliptic(
    kind: str, spec: ThetaSpec, lam, mu, points: Sequence[Point], tol: float = DEFAULT_TOL, eps: float = DEFAULT_EPS
) -> VerificationReport:
    """``F(tau, z + lambda tau + mu)`` against ``exp(-pi i (G[lambda] tau + 2 z^T G lambda)) F(tau, z)``."""
    if kind not in ("theta", "psi"):
        raise ValueError(f"kind must be 'theta' or 'psi', got {kind!r}")
    flags = _flags(spec)
    if not flags.orthogonal:
        raise InadmissibleSpec(f"elliptic law needs B(v, h_j) = 0; got {flags}")
    lam = _lattice_vector(lam, spec.n, "lambda")
    mu = _lattice_vector(mu, spec.n, "mu")
    if kind == "theta":
        F, identity = (lambda t, z: theta_eval(spec, t, z, eps)), Identity.ELLIPTIC_THETA
    else:
        F, identity = (lambda t, z: psi_eval(spec, t, z, eps)), Identity.ELLIPTIC_PSI
    samples = []
    with record_truncation() as infos:
        for tau, z in points:
            z = _check_z(z, spec.n)
            lhs = F(tau, _shift(tau, z, lam))
            rhs = elliptic_factor(_index(spec.directions), tau, z, lam, mu) * F(tau, z)
            samples.append(Sample(_point_dict(tau, z, **{"lambda": list(lam), "mu": list(mu)}), lhs, rhs))
    return VerificationReport(identity, tuple(samples), tol, _truncation_summary(infos, eps))


def verify_translation_polynomial(
    spec: ThetaSpec, lam, mu, points: Sequence[Point], tol: float = DEFAULT_TOL, eps: float = DEFAULT_EPS
) -> VerificationReport:
    """``exp(pi i (G[lambda] tau + 2 z^T G lambda)) theta_k(tau, z + lambda tau + mu)`` against
    ``sum_j C(k, j) (-sum_i lambda_i B(v, h_i))^j theta_{k-j}(tau, z)``; no hypothesis on ``v``."""
    lam = _lattice_vector(lam, spec.n, "lambda")
    mu = _lattice_vector(mu, spec.n, "mu")
    shift = -sum(li * b for li, b in zip(lam, spec.v.pairings))
    G = np.array(spec.directions.G, dtype=float)
    lam_arr = np.array(lam, dtype=float)
    samples = []
    with record_truncation() as infos:
        for tau, z in points:
            z = _check_z(z, spec.n)
            za = np.asarray(z)
            if any(lam):
                factor = cmath.exp(1j * math.pi * (complex(tau) * (lam_arr @ G @ lam_arr) + 2 * complex(za @ G @ lam_arr)))
            else:
                factor = 1
            lhs = factor * theta_eval(spec, tau, _shift(tau, z, lam), eps)
            rhs = 0j
            for j in range(spec.k + 1):
                coef = math.comb(spec.k, j) * shift**j
                if j == 0 or coef != 0:
                    rhs += coef * theta_eval(spec.with_k(spec.k - j), tau, z, eps)
            samples.append(Sample(_point_dict(tau, z, **{"lambda": list(lam), "mu": list(mu)}), lhs, rhs))
    return VerificationReport(Identity.TRANSLATION, tuple(samples), tol, _truncation_summary(infos, eps))


def verify_generating(
    form: QuadraticForm,
    directions: DirectionSet,
    v,
    gamma,
    T: int,
    points: Sequence[Point],
    tol: float = 1e-6,
    eps: float = DEFAULT_EPS,
) -> VerificationReport:
    """Coefficient-wise check through ``X^T`` of
    ``Theta(g tau, g z, X/(c tau + d)) = eps(d) e^{pi i c G[z]/(c tau + d)} (c tau + d)^r
    exp(2 pi i 2Q(v) c X^2/(c tau + d)) Theta(tau, z, X)``."""
    sv = v if isinstance(v, SphericalVector) else make_spherical(form, directions, v)
    flags = check_admissible(form, directions, sv, ADMISSIBLE_TOL)
    if not flags.orthogonal:
        raise InadmissibleSpec(f"generating law needs B(v, h_j) = 0; got {flags}")
    g = _in_gamma0(gamma, form.level_N)
    chi = epsilon(form, g.d)
    F = directions.index_matrix
    samples = []
    with record_truncation() as infos:
        for tau, z in points:
            z = _check_z(z, directions.n)
            gt, gz = act(g, tau, z)
            j = g.c * complex(tau) + g.d
            lhs = theta_generating_poly(form, directions, sv, gt, gz, T, eps).rescale(1 / j)
            factor = TruncatedXPolynomial.exp_x2(2j * math.pi * 2 * sv.q_of_v * g.c / j, T)
            rhs = (factor * theta_generating_poly(form, directions, sv, tau, z, T, eps)) * (
                chi * modular_factor(g, form.r, F, tau, z)
            )
            for t in range(T + 1):
                samples.append(Sample(_point_dict(tau, z, gamma=[g.a, g.b, g.c, g.d], degree=t), lhs[t], rhs[t]))
    return VerificationReport(Identity.GENERATING, tuple(samples), tol, _truncation_summary(infos, eps))


def verify_congruence(
    form: QuadraticForm,
    p,
    ell_vec,
    k: int,
    directions: DirectionSet,
    gamma,
    points: Sequence[Point],
    tol: float = DEFAULT_TOL,
    eps: float = DEFAULT_EPS,
) -> VerificationReport:
    """Transformation of the congruence theta under ``gamma`` with ``d > 0``.

    Left: ``e^{-pi i c G[z]/(c tau + d)} (c tau + d)^-(r+k) theta(p, l, k; g tau, g z)``.
    Right: ``eps(d) e^{2 pi i Q(p) a b / N^2} sum_j (Q(l) c / (pi i (c tau + d)))^j delta(j, k)
    theta(a p, l, k - 2j; tau, z)``.  The residue on the right is ``a p mod N``.
    """
    N = form.level_N
    p = check_residue(form, p, N)
    ell = tuple(complex(t) for t in ell_vec)
    if len(ell) != form.f:
        raise DimensionMismatch(f"ell vector must have length {form.f}")
    for h in directions.h_vectors:
        if abs(bilinear(form, ell, h)) > ADMISSIBLE_TOL:
            raise HypothesisViolation(f"l^T A h = {bilinear(form, ell, h)} is not zero for h = {h}")
    g = _in_gamma0(gamma, N)
    if g.d <= 0:
        raise NegativeD(f"d = {g.d}; the congruence law is stated for d > 0")
    chi = epsilon(form, g.d)
    q_ell = quad(form, ell)
    p_image = tuple(g.a * t % N for t in p)
    phase = cmath.exp(2j * math.pi * float(Fraction(quad(form, p) * g.a * g.b, N * N) % 1))
    F = directions.index_matrix
    samples = []
    with record_truncation() as infos:
        for tau, z in points:
            z = _check_z(z, directions.n)
            gt, gz = act(g, tau, z)
            j = g.c * complex(tau) + g.d
            lhs = congruence_theta_eval(form, p, ell, k, directions, gt, gz, eps) / modular_factor(
                g, form.r + k, F, tau, z
            )
            rhs = 0j
            for t in range(k // 2 + 1):
                coef = (q_ell * g.c / (1j * math.pi * j)) ** t * delta_coeff(t, k) if t else 1
                if t == 0 or coef != 0:
                    rhs += coef * congruence_theta_eval(form, p_image, ell, k - 2 * t, directions, tau, z, eps)
            rhs *= chi * phase
            samples.append(
                Sample(_point_dict(tau, z, gamma=[g.a, g.b, g.c, g.d], p=list(p), p_image=list(p_image)), lhs, rhs)
            )
    return VerificationReport(Identity.CONGRUENCE, tuple(samples), tol, _truncation_summary(infos, eps))


def support_margin(ell: Fraction, nu, G_inv) -> Fraction:
    """``4 l - (G/2)^-1[nu] = 4 l - 2 nu^T G^-1 nu`` as an exact rational."""
    n = len(nu)
    quad_nu = sum(Fraction(nu[i]) * G_inv[i][j] * nu[j] for i in range(n) for j in range(n))
    return 4 * Fraction(ell) - 2 * quad_nu


def verify_support(expansion: FourierExpansion, G, tol: float = 0.0) -> VerificationReport:
    """Every stored coefficient must satisfy ``4 l - (G/2)^-1[nu] >= -tol``.

    Each sample carries the exact margin in its point record and the amount
    of violation (zero if none) as ``lhs``; the exponent is ``l = L / ell_denominator``.
    """
    G = [[int(x) for x in row] for row in G]
    if len(G) != expansion.n or any(len(row) != expansion.n for row in G):
        raise DimensionMismatch(f"Gram matrix must be {expansion.n} x {expansion.n}")
    try:
        G_inv = inverse_exact(G)
    except Exception as exc:
        raise SingularGram("Gram matrix is singular") from exc
    samples = []
    for (L, nu), _c in expansion.items():
        margin = support_margin(Fraction(L, expansion.ell_denominator), nu, G_inv)
        violation = max(Fraction(0), -margin)
        samples.append(
            Sample(
                {"ell": L, "nu": list(nu), "margin": str(margin), "boundary": margin == 0},
                complex(float(violation)),
                0j,
            )
        )
    return VerificationReport(Identity.SUPPORT, tuple(samples), tol, {"eps": None, "coefficients": len(samples)})


def support_boundary(report: VerificationReport) -> list[tuple[int, tuple[int, ...]]]:
    """The ``(l, nu)`` whose margin is exactly zero."""
    return [(s.point["ell"], tuple(s.point["nu"])) for s in report.samples if s.point["boundary"]]


# -- quasi-Jacobi depth ------------------------------------------------------


@dataclass(frozen=True)
class DepthFit:
    """Estimated depth ``(s_1..s_n, t)`` with the worst relative fit residual."""

    depth: tuple[int, ...]
    residual: float
    lambda_depth: tuple[int, ...]
    condition: float
    base_points: int

    @property
    def t(self) -> int:
        return self.depth[-1]


def default_gammas(N: int, count: int = 10, tau: complex | None = None) -> list[JacobiGroupElement]:
    """Elements of Gamma_0(N) with ``c > 0`` and distinct ``d/c`` (hence distinct ``c/(c tau + d)``).

    With ``tau`` given, the smallest ``|c tau + d|`` come first, which keeps
    ``Im(gamma tau)`` as large as possible; otherwise the smallest ``c^2 + d^2``.
    """
    pairs = []
    for c in range(N, N * (count + 1), N):
        pairs += [(c, d) for d in range(-3 * c, 3 * c + 1) if d and math.gcd(c, d) == 1]
    if tau is None:
        key = lambda cd: (cd[0] ** 2 + cd[1] ** 2, -cd[1])  # noqa: E731
    else:
        key = lambda cd: (abs(cd[0] * complex(tau) + cd[1]), cd[0], -cd[1])  # noqa: E731
    out, seen = [], set()
    for c, d in sorted(pairs, key=key):
        if Fraction(d, c) in seen:
            continue
        seen.add(Fraction(d, c))
        a = pow(d, -1, c)
        out.append(JacobiGroupElement(a, (a * d - 1) // c, c, d, N))
        if len(out) == count:
            break
    return out


def default_lambdas(n: int, smax: int) -> list[tuple[int, ...]]:
    """The grid ``{-1, 0, .., smax}^n``, one point more per axis than strictly needed."""
    return [tuple(t) for t in product(range(-1, smax + 1), repeat=n)]


def _scaled_lstsq(design: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, float, float]:
    scale = np.linalg.norm(design, axis=0)
    scale[scale == 0] = 1
    scaled = design / scale
    cond = float(np.linalg.cond(scaled))
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditionedFit(f"design matrix condition number {cond:.3g}; enlarge or spread the samples")
    coef, *_ = np.linalg.lstsq(scaled, values, rcond=None)
    coef = coef / scale
    resid = float(np.max(np.abs(design @ coef - values)) / max(1.0, float(np.max(np.abs(values)))))
    return coef, resid, cond


def _significant(coef: np.ndarray, tol: float) -> np.ndarray:
    return np.abs(coef) > tol * max(1.0, float(np.max(np.abs(coef))) if len(coef) else 1.0)


def quasi_depth_fit(
    spec: ThetaSpec,
    base_points: Sequence[Point],
    sample_gammas: Sequence | None = None,
    sample_lambdas: Sequence | None = None,
    smax: int = 2,
    tmax: int = 1,
    tol: float = 1e-6,
    eps: float = DEFAULT_EPS,
) -> DepthFit:
    """Estimate the quasi-Jacobi depth of ``theta_k`` by least squares.

    Translation part: ``exp(pi i (G[l] tau + 2 z^T G l)) theta(tau, z + l tau)`` is fitted as a
    polynomial in ``l`` with degree at most ``smax`` per component, giving ``s``.

    Modular part: at a fixed base point ``c z_j/(c tau + d) = z_j Y`` with ``Y = c/(c tau + d)``,
    so ``eps(d)^-1 (c tau + d)^-(k+r) e^{-pi i c G[z]/(c tau + d)} theta(g tau, g z)`` is a polynomial
    in ``Y`` alone of degree ``<= |s| + t``.  It is fitted with degree ``|s| + tmax`` at ``z`` and at
    ``z = 0`` (where only the pure ``Y`` terms survive) and ``t = max(deg_0, deg_z - |s|, 0)``.
    Without ``sample_gammas`` the ``|s| + tmax + 3`` elements with smallest ``|c tau + d|`` are used.  The maximum over the base
    points is returned; a single point can underestimate the depth.
    """
    n, N = spec.n, spec.form.level_N
    raw = sample_lambdas if sample_lambdas is not None else default_lambdas(n, smax)
    lambdas = [_lattice_vector(lam, n, "lambda") for lam in raw]
    if len(set(lambdas)) < (smax + 1) ** n:
        raise IllConditionedFit(f"need at least {(smax + 1) ** n} distinct lambdas, got {len(set(lambdas))}")
    if sample_gammas is not None:
        fixed = [g for g in (_in_gamma0(g, N) for g in sample_gammas) if g.c]
    G = np.array(spec.directions.G, dtype=float)
    F = spec.directions.index_matrix
    weight = spec.k + spec.form.r
    exps = list(product(range(smax + 1), repeat=n))

    depth = [0] * (n + 1)
    lam_depth = [0] * n
    worst_resid, worst_cond = 0.0, 0.0
    for tau, z in base_points:
        z = _check_z(z, n)
        za = np.asarray(z)
        # translation fit
        design = np.array([[np.prod([float(lam[i]) ** e[i] for i in range(n)]) for e in exps] for lam in lambdas])
        values = []
        for lam in lambdas:
            la = np.array(lam, dtype=float)
            factor = cmath.exp(1j * math.pi * (complex(tau) * (la @ G @ la) + 2 * complex(za @ G @ la)))
            values.append(factor * theta_eval(spec, tau, _shift(tau, z, lam), eps))
        coef, resid, cond = _scaled_lstsq(design.astype(complex), np.array(values))
        worst_resid, worst_cond = max(worst_resid, resid), max(worst_cond, cond)
        big = _significant(coef, tol)
        s = [max((e[i] for e, b in zip(exps, big) if b), default=0) for i in range(n)]
        lam_depth = [max(a, b) for a, b in zip(lam_depth, s)]

        # modular fit in Y, at z and at z = 0; the Y-degree is at most |s| + tmax
        ydeg = sum(s) + tmax
        if sample_gammas is None:
            gammas = default_gammas(N, ydeg + 3, tau)
        elif len({Fraction(g.d, g.c) for g in fixed}) < ydeg + 1:
            raise IllConditionedFit(f"need at least {ydeg + 1} gammas with distinct d/c and c != 0")
        else:
            gammas = fixed
        degrees = []
        for zz in (z, (0j,) * n):
            ys, vals = [], []
            for g in gammas:
                gt, gz = act(g, tau, zz)
                j = g.c * complex(tau) + g.d
                ys.append(g.c / j)
                lhs = theta_eval(spec, gt, gz, eps)
                vals.append(lhs / (epsilon(spec.form, g.d) * modular_factor(g, weight, F, tau, zz)))
            design = np.vander(np.array(ys), ydeg + 1, increasing=True)
            coef, resid, cond = _scaled_lstsq(design, np.array(vals))
            worst_resid, worst_cond = max(worst_resid, resid), max(worst_cond, cond)
            big = _significant(coef, tol)
            degrees.append(max((i for i, b in enumerate(big) if b), default=0))
        deg_z, deg_0 = degrees
        t = max(deg_0, deg_z - sum(s), 0)
        depth = [max(a, b) for a, b in zip(depth, s + [t])]
    return DepthFit(tuple(depth), worst_resid, tuple(lam_depth), worst_cond, len(base_points))
