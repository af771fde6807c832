"""Searches over PSD coefficient families.

Positive coefficients are parametrized as ``A = C C*`` with unconstrained
complex factors, so every iterate is feasible. Two searches are provided:

* :func:`search_factorization` looks for ``lambda I = sum_j A_j B_j`` with
  ``A_j, B_j >= 0`` by gradient descent on ``||sum_j A_j B_j - lambda I||_F^2``.
* :func:`luders_nonreal_search` maximizes the largest imaginary part in the
  spectrum of a symmetric operator ``X -> sum_j A_j X A_j`` with Nelder-Mead.

Neither search claims success on its own: a result carries a certificate
recomputed along an independent path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .elementary import CoefficientFamily, ElementaryOperator, classify
from .errors import ConfigError, PreconditionError
from .generators import DEFAULT_SEED, rng_for
from .linalg import eig, is_psd, matrix_to_json, op_norm
from .spectrum import DEFAULT_TOL, SpectrumSet, Tolerance

__all__ = [
    "SearchConfig", "SearchResult", "pack", "unpack", "magajna_objective",
    "descend", "search_factorization", "factorization_lower_bound",
    "PositivityReport", "formally_positive_witness", "luders_gap",
    "luders_nonreal_search",
]


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 10
    iters: int = 500
    step: str = "adaptive"  # "adaptive" doubles after success; "reset" restarts from step0
    step0: float = 1.0
    armijo: float = 1e-4
    seed: int = DEFAULT_SEED
    success_tol: float = 1e-8

    def __post_init__(self):
        if self.restarts < 1 or self.iters < 1:
            raise ConfigError("restarts and iters must be positive")
        if self.step not in ("adaptive", "reset"):
            raise ConfigError(f"unknown step rule {self.step!r}")
        if not (self.step0 > 0 and 0 < self.armijo < 1 and self.success_tol > 0):
            raise ConfigError("need step0 > 0, 0 < armijo < 1, success_tol > 0")


@dataclass
class SearchResult:
    """Best run of a multi-start search.

    ``residual`` is the search's figure of merit: the factorization residual
    ``||sum A_j B_j - lambda I||_F`` for factorization searches, and the
    normalized imaginary spread ``g`` for symmetric-operator searches.
    """

    kind: str
    dim: int
    terms: int
    seed: int
    residual: float
    iterations: int
    restarts_used: int
    success: bool
    left: list[np.ndarray] = field(repr=False)
    right: list[np.ndarray] = field(repr=False)
    factors: dict = field(repr=False, default_factory=dict)
    trace: list[float] = field(repr=False, default_factory=list)
    run_traces: list[list[float]] = field(repr=False, default_factory=list)
    certificate: dict = field(default_factory=dict)
    target: complex | None = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "dim": self.dim,
            "terms": self.terms,
            "seed": self.seed,
            "residual": self.residual,
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
            "success": self.success,
            "trace": self.trace,
            "certificate": self.certificate,
            "factors": {k: [matrix_to_json(M) for M in v] for k, v in self.factors.items()},
            "coefficients": {
                "A": [matrix_to_json(M) for M in self.left],
                "B": [matrix_to_json(M) for M in self.right],
            },
        }
        if self.target is not None:
            out["lambda"] = [self.target.real, self.target.imag]
        return out


def pack(*factor_lists) -> np.ndarray:
    """Flatten lists of complex matrices into one real vector (real parts, then imaginary)."""
    z = np.concatenate([np.asarray(F, dtype=complex).ravel() for F in factor_lists])
    return np.concatenate([z.real, z.imag])


def unpack(x, d, J, count=2):
    """Inverse of :func:`pack` for ``count`` stacks of ``J`` ``d x d`` matrices."""
    x = np.asarray(x, dtype=float)
    half = x.size // 2
    z = (x[:half] + 1j * x[half:]).reshape(count, J, d, d)
    return tuple(z[i] for i in range(count))


def _gram(C):
    # C C* for a stack, symmetrized so the diagonal is exactly real
    G = C @ C.conj().transpose(0, 2, 1)
    return (G + G.conj().transpose(0, 2, 1)) / 2


def _assemble(C, D, lam):
    d = C.shape[-1]
    A = _gram(C)
    B = _gram(D)
    R = (A @ B).sum(axis=0) - lam * np.eye(d)
    return A, B, R


def magajna_objective(params, lam, d, J):
    """``f = ||sum_j C_j C_j* D_j D_j* - lam I||_F^2`` and its gradient.

    The gradient is with respect to the packed real parameters. With
    ``R`` the residual matrix, ``df/dC_j = 2 (G + G*) C_j`` for
    ``G = D_j D_j* R*`` and ``df/dD_j = 2 (H + H*) D_j`` for
    ``H = R* C_j C_j*`` (complex gradients ``d/dRe + i d/dIm``).
    """
    C, D = unpack(params, d, J)
    A, B, R = _assemble(C, D, lam)
    value = float(np.vdot(R, R).real)
    Rh = R.conj().T
    G = B @ Rh
    H = Rh @ A
    gC = 2 * (G + G.conj().transpose(0, 2, 1)) @ C
    gD = 2 * (H + H.conj().transpose(0, 2, 1)) @ D
    return value, pack(gC, gD)


def descend(fun, x0, config: SearchConfig, stop: float = 0.0):
    """Gradient descent with Armijo backtracking (halving).

    ``fun`` returns ``(value, gradient)``. Iteration ends after
    ``config.iters`` accepted steps, when the value drops to ``stop``, or
    when backtracking stalls. Returns the final point and the value trace,
    which is non-increasing by construction.
    """
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    trace = [f]
    t = config.step0
    for _ in range(config.iters):
        if f <= stop:
            break
        gg = float(g @ g)
        if gg == 0.0:
            break
        while True:
            x_new = x - t * g
            f_new, g_new = fun(x_new)
            if f_new <= f - config.armijo * t * gg:
                break
            t *= 0.5
            if t < 1e-30:
                return x, trace
        x, f, g = x_new, f_new, g_new
        trace.append(f)
        t = 2 * t if config.step == "adaptive" else config.step0
    return x, trace


def _psd_mins(mats):
    return [float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0]) for M in mats]


def factorization_lower_bound(lam, d) -> float:
    """Residual lower bound ``sqrt(d) * dist(lam, [0, inf))``.

    ``Tr(A B) >= 0`` for PSD ``A, B``, so the trace of ``sum A_j B_j`` is a
    non-negative real and ``|Tr R| / sqrt(d)`` bounds ``||R||_F`` below.
    """
    lam = complex(lam)
    dist = abs(lam.imag) if lam.real >= 0 else abs(lam)
    return float(np.sqrt(d) * dist)


def search_factorization(lam, d: int, J: int, config: SearchConfig = SearchConfig()) -> SearchResult:
    """Multi-start search for PSD ``A_j, B_j`` with ``sum_j A_j B_j = lam I``."""
    if d < 1 or J < 1:
        raise ConfigError(f"need d >= 1 and J >= 1, got d={d}, J={J}")
    lam = complex(lam)
    scale = max(abs(lam), 1.0) ** 0.25 / np.sqrt(d)
    fun = lambda x: magajna_objective(x, lam, d, J)
    stop = (config.success_tol * 1e-3) ** 2
    best = None
    traces = []
    total_iters = 0
    used = 0
    for k in range(config.restarts):
        used = k + 1
        rng = rng_for(config.seed, k)
        x0 = rng.standard_normal(4 * J * d * d) * scale / np.sqrt(2)
        x, trace = descend(fun, x0, config, stop=stop)
        res = float(np.sqrt(trace[-1]))
        traces.append([float(np.sqrt(v)) for v in trace])
        total_iters += len(trace) - 1
        if best is None or res < best[0]:
            best = (res, k, x)
        if res <= config.success_tol:
            break
    res, k, x = best
    C, D = unpack(x, d, J)
    A, B, _ = _assemble(C, D, lam)
    # independent re-check: apply the operator to the identity
    op = ElementaryOperator(CoefficientFamily(zip(A, B)))
    recheck = float(np.linalg.norm(op.apply(np.eye(d)) - lam * np.eye(d)))
    cert = {
        "psd_mins": {"A": _psd_mins(A), "B": _psd_mins(B)},
        "residual_recheck": recheck,
        "lower_bound": factorization_lower_bound(lam, d),
        "best_restart": k,
    }
    return SearchResult(
        kind="magajna", dim=d, terms=J, seed=config.seed, residual=res,
        iterations=total_iters, restarts_used=used, success=res <= config.success_tol,
        left=list(A), right=list(B), factors={"C": list(C), "D": list(D)},
        trace=traces[k], run_traces=traces, certificate=cert, target=lam,
    )


@dataclass
class PositivityReport:
    delta: ElementaryOperator = field(repr=False)
    lam: complex
    input_residual: float
    identity_residual: float
    identity_ok: bool
    spectrum: SpectrumSet = field(repr=False)
    eigen_distance: float
    contains_lambda_sq: bool
    c2_positive: bool


def formally_positive_witness(
    Lam: ElementaryOperator, lam, tol: Tolerance = DEFAULT_TOL
) -> PositivityReport:
    """Form ``Delta = adj(Lam) o Lam`` and check that ``Delta(I) = lam^2 I``.

    Requires PSD coefficients and ``Lam(I) = lam I`` within ``tol``. With
    Hermitian coefficients the formal adjoint equals ``Lam`` itself, so
    ``Delta(I) = Lam(lam I) = lam^2 I`` and ``vec(I)`` is an eigenvector.
    """
    lam = complex(lam)
    if Lam.m != Lam.n:
        raise PreconditionError("identity is only defined for square operators")
    for j, (A, B) in enumerate(Lam.terms):
        if not (is_psd(A, tol) and is_psd(B, tol)):
            raise PreconditionError(f"term {j} has a coefficient that is not PSD")
    I = np.eye(Lam.m)
    r_in = op_norm(Lam.apply(I) - lam * I)
    if r_in > tol.bound(abs(lam)):
        raise PreconditionError(f"||Lam(I) - lam I|| = {r_in:.3e} exceeds tolerance")
    delta = Lam.formal_adjoint().compose(Lam)
    lam2 = lam * lam
    r_out = op_norm(delta.apply(I) - lam2 * I)
    spec = delta.spectrum(tol)
    dist = float(np.abs(spec.values - lam2).min())
    return PositivityReport(
        delta=delta, lam=lam, input_residual=r_in, identity_residual=r_out,
        identity_ok=r_out <= 10 * tol.bound(abs(lam2)),
        spectrum=spec, eigen_distance=dist,
        contains_lambda_sq=dist <= 10 * tol.bound(abs(lam2)),
        c2_positive=classify(delta, tol).c2_positive,
    )


def luders_gap(coefficients, assembly: str = "kron") -> float:
    """``max |Im sigma| / ||K||`` for ``X -> sum_j A_j X A_j``.

    ``assembly="apply"`` builds the matrix from images of matrix units
    instead of Kronecker products.
    """
    op = ElementaryOperator.luders(coefficients)
    K = op.kron_matrix() if assembly == "kron" else op.apply_matrix()
    nrm = op_norm(K)
    if nrm == 0.0:
        return 0.0
    return float(np.abs(eig(K).values.imag).max() / nrm)


def luders_nonreal_search(d: int, J: int, config: SearchConfig = SearchConfig()) -> SearchResult:
    """Nelder-Mead search for symmetric PSD-coefficient operators with non-real spectrum.

    Maximizes :func:`luders_gap` over ``A_j = C_j C_j*``. Each restart runs
    Nelder-Mead with a budget of ``config.iters`` objective evaluations;
    whenever the simplex collapses before the budget is spent, it is rebuilt
    around the current best point.
    """
    if d < 2 or J < 2:
        raise ConfigError(f"need d >= 2 and J >= 2, got d={d}, J={J}")
    nvar = 2 * J * d * d

    def neg_gap(x):
        (C,) = unpack(x, d, J, count=1)
        return -luders_gap(_gram(C))

    best = None
    traces = []
    total = 0
    for k in range(config.restarts):
        rng = rng_for(config.seed, k)
        x = rng.standard_normal(nvar) / np.sqrt(2 * d)
        budget = config.iters
        fx = neg_gap(x)
        trace = [-fx]
        while budget > 0:
            simplex = np.vstack([x, x + 0.1 * rng.standard_normal((nvar, nvar))])
            res = minimize(neg_gap, x, method="Nelder-Mead", options={
                "maxfev": budget, "initial_simplex": simplex,
                "xatol": 1e-10, "fatol": 1e-14,
            })
            budget -= res.nfev
            total += res.nit
            if res.fun < fx:
                x, fx = res.x, float(res.fun)
            trace.append(-fx)
            if res.status != 0:
                break
        traces.append(trace)
        if best is None or -fx > best[0]:
            best = (-fx, k, x)
    g, k, x = best
    (C,) = unpack(x, d, J, count=1)
    A = list(_gram(C))
    cert = {
        "psd_mins": {"A": _psd_mins(A)},
        "coefficients_symmetric": True,
        "residual_recheck": luders_gap(A, assembly="apply"),
        "best_restart": k,
    }
    return SearchResult(
        kind="luders", dim=d, terms=J, seed=config.seed, residual=g,
        iterations=total, restarts_used=config.restarts, success=g > config.success_tol,
        left=A, right=list(A), factors={"C": list(C)},
        trace=traces[k], run_traces=traces, certificate=cert,
    )
