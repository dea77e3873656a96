"""Spectral radius, Perron vectors and rigorous bounds on the spectral radius.

Floating-point results are always paired with something exact: a rational
vector ``y`` with ``A y >= c y`` entrywise proves ``rho >= c``, while local
degree sums and gamma(z) bound ``rho**2`` from above by an integer.
:func:`compare_rho_squared` settles the remaining near-ties exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np
import scipy.sparse

from .errors import ConvergenceError
from .graph import Graph, bits, distance_layers, find_bipartition, gamma_of, mask_cross_count

DEFAULT_TOL = 1e-10
DENSE_LIMIT = 512
# entries within this of the maximum count as ties for the max-entry vertex
_TIE = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralResult:
    rho: float
    perron: np.ndarray
    residual: float
    iterations: int
    z: int | None

    @property
    def n(self) -> int:
        return len(self.perron)


@dataclass(frozen=True, eq=False)
class Certificate:
    """A checkable bound on the spectral radius.

    ``kind == "lower"``: ``witness`` is a non-negative rational vector y with
    A y >= c y, proving rho >= c. ``"upper-local"`` and ``"upper-gamma"``
    carry an integer ``c`` with rho**2 <= c and the vertex attaining it.
    """

    kind: str
    c: Fraction | int
    witness: tuple | int = field(default=())

    def check(self, g: Graph) -> bool:
        if self.kind == "lower":
            return certify_lower(g, self.witness, self.c)
        if self.kind == "upper-local":
            return self.c == upper_bound_local(g).c
        if self.kind == "upper-gamma":
            return self.c == gamma_of(g, self.witness)
        raise ValueError(f"unknown certificate kind {self.kind!r}")


def adjacency_matrix(g: Graph, dtype=float) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=dtype)
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1
    return a


def _sparse(g: Graph):
    edges = g.edges()
    if not edges:
        return scipy.sparse.csr_matrix((g.n, g.n))
    u, v = np.array(edges).T
    data = np.ones(2 * len(edges))
    return scipy.sparse.csr_matrix((data, (np.r_[u, v], np.r_[v, u])), shape=(g.n, g.n))


def _max_entry_vertex(x: np.ndarray) -> int:
    return int(np.flatnonzero(x >= x.max() - _TIE)[0])


def _finish(a, x, iterations) -> SpectralResult:
    x = np.abs(x)
    x = x / x.max()
    ax = a @ x
    rho = float(x @ ax / (x @ x))
    residual = float(np.max(np.abs(ax - rho * x)))
    return SpectralResult(rho, x, residual, iterations, _max_entry_vertex(x))


def _power(a, x, tol, max_iter, shift=1.0):
    """Power iteration on ``a + shift*I`` from ``x``; returns (x, rho, residual, its)."""
    x = np.abs(np.asarray(x, dtype=float))
    x = x / x.max()
    rho = residual = math.inf
    for it in range(1, max_iter + 1):
        ax = a @ x
        rho = float(x @ ax / (x @ x))
        residual = float(np.max(np.abs(ax - rho * x)))
        if residual <= tol:
            return x, rho, residual, it
        y = ax + shift * x
        x = y / y.max()
    return x, rho, residual, max_iter


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL, *, method: str = "auto",
                    max_iter: int = 1_000_000) -> SpectralResult:
    """Largest adjacency eigenvalue of ``g`` with its Perron vector.

    The Perron vector is non-negative with maximum entry 1; ``z`` is the
    smallest vertex attaining the maximum. ``method`` is ``"dense"``
    (full symmetric eigensolve), ``"power"`` (iteration on A + I, which
    avoids the +-rho oscillation of bipartite graphs) or ``"auto"``.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if g.n == 0:
        return SpectralResult(0.0, np.zeros(0), 0.0, 0, None)
    if g.m == 0:
        return SpectralResult(0.0, np.ones(g.n), 0.0, 0, 0)
    if method == "auto":
        method = "dense" if g.n <= DENSE_LIMIT else "power"
    if method == "dense":
        a = adjacency_matrix(g)
        _, vecs = np.linalg.eigh(a)
        res = _finish(a, vecs[:, -1], 0)
        if res.residual <= tol:
            return res
        x, _, _, its = _power(a, res.perron, tol, max_iter)
        res = _finish(a, x, its)
    elif method == "power":
        a = _sparse(g)
        x, _, _, its = _power(a, np.ones(g.n), tol, max_iter)
        res = _finish(a, x, its)
    else:
        raise ValueError(f"unknown method {method!r}")
    if res.residual > tol:
        raise ConvergenceError(
            f"residual {res.residual:.3e} above tolerance {tol:.1e}",
            estimate=res.rho, residual=res.residual,
        )
    return res


def collatz_bracket(g: Graph, x: np.ndarray) -> tuple[float, float]:
    """min and max of (A x)_v / x_v over the support of ``x``.

    For a connected graph and positive ``x`` these bracket rho.
    """
    ax = np.array([x[list(bits(g.adj(v)))].sum() for v in range(g.n)])
    support = x > 0
    ratios = ax[support] / x[support]
    return float(ratios.min()), float(ratios.max())


def least_eigenvalue(g: Graph, tol: float = DEFAULT_TOL, *, method: str = "auto",
                     max_iter: int = 1_000_000) -> float:
    """Smallest adjacency eigenvalue of ``g``."""
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if g.m == 0:
        return 0.0
    if method == "auto":
        method = "dense" if g.n <= DENSE_LIMIT else "power"
    if method == "dense":
        return float(np.linalg.eigvalsh(adjacency_matrix(g))[0])
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    a = _sparse(g)
    c = float(g.max_degree())
    x = np.random.default_rng(0).uniform(0.5, 1.5, g.n)
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        ax = a @ x
        lam = float(x @ ax)
        if np.max(np.abs(ax - lam * x)) <= tol:
            return lam
        y = c * x - ax
        x = y / np.linalg.norm(y)
    raise ConvergenceError("least eigenvalue did not converge", estimate=lam)


def _as_fraction(value) -> Fraction:
    if isinstance(value, (Fraction, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value}")
        return Fraction(value)
    return Fraction(value)


def certify_lower(g: Graph, y: Sequence, c) -> bool:
    """Check ``(A y)_v >= c * y_v`` for every vertex, in exact arithmetic.

    Floats are converted to their exact binary rational value, so a ``True``
    answer is a proof that ``rho(g) >= c``.
    """
    if len(y) != g.n:
        raise ValueError(f"vector has length {len(y)}, graph has order {g.n}")
    ys = [_as_fraction(v) for v in y]
    if any(v < 0 for v in ys):
        raise ValueError("certificate vector must be non-negative")
    if not any(ys):
        raise ValueError("certificate vector must be non-zero")
    cf = _as_fraction(c)
    for v in range(g.n):
        if sum(ys[u] for u in bits(g.adj(v))) < cf * ys[v]:
            return False
    return True


def lower_certificate(g: Graph, *, slack=Fraction(1, 10**6), digits: int | None = 12,
                      result: SpectralResult | None = None) -> Certificate:
    """Rational lower-bound certificate from the rounded Perron vector.

    Entries are rounded to ``digits`` decimal places (exact binary values when
    ``digits`` is None) and ``c`` is the computed rho minus ``slack``. The
    certificate still has to be checked; it fails when rounding error beats
    the slack.
    """
    if result is None:
        result = spectral_radius(g)
    if digits is None:
        y = tuple(Fraction(float(v)) for v in result.perron)
    else:
        scale = 10**digits
        y = tuple(Fraction(round(float(v) * scale), scale) for v in result.perron)
    return Certificate("lower", Fraction(result.rho) - Fraction(slack), y)


def upper_bound_local(g: Graph) -> Certificate:
    """max over v of d(v) + e(N_1(v), N_2(v)), an integer upper bound on rho**2.

    For bipartite graphs the neighbourhood of v is independent, so this equals
    the largest sum of neighbour degrees, which dominates rho**2.
    """
    if find_bipartition(g) is None:
        raise ValueError("upper_bound_local needs a bipartite graph")
    best, arg = 0, 0
    for v in range(g.n):
        layers = distance_layers(g, v)
        n1 = layers[1] if len(layers) > 1 else 0
        n2 = layers[2] if len(layers) > 2 else 0
        value = n1.bit_count() + mask_cross_count(g, n1, n2)
        if value > best:
            best, arg = value, v
    return Certificate("upper-local", best, arg)


def upper_bound_gamma(g: Graph, result: SpectralResult | None = None) -> Certificate:
    """gamma(z) at the max-Perron-entry vertex z, an upper bound on rho**2."""
    if result is None:
        result = spectral_radius(g)
    if result.z is None:
        return Certificate("upper-gamma", 0, 0)
    return Certificate("upper-gamma", gamma_of(g, result.z), result.z)


def gamma_bound_check(g: Graph, tol: float = DEFAULT_TOL) -> bool:
    """True iff rho(g)**2 <= gamma(z) + tol for z the max-Perron-entry vertex."""
    if not g.is_connected():
        raise ValueError("gamma_bound_check needs a connected graph")
    res = spectral_radius(g, tol)
    if res.z is None:
        return True
    return res.rho**2 <= gamma_of(g, res.z) + tol


def _definiteness(mat) -> tuple[bool, bool]:
    """(positive semidefinite, positive definite) for a symmetric rational matrix."""
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    definite = True
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return False, False
        if p == 0:
            definite = False
            if any(a[k][j] for j in range(k + 1, n)):
                return False, False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return True, definite


def compare_rho_squared(g: Graph, q: int) -> int:
    """Exact sign of rho(g)**2 - q for an integer q >= 0.

    Uses rho**2 = lambda_max(A**2) and decides the definiteness of the
    integer matrix q I - A**2 by exact elimination.
    """
    a = adjacency_matrix(g, dtype=object)
    sq = a.dot(a)
    mat = [[(q if i == j else 0) - int(sq[i, j]) for j in range(g.n)] for i in range(g.n)]
    psd, pd = _definiteness(mat)
    if pd:
        return -1
    return 0 if psd else 1


def rho_at_least_sqrt(g: Graph, q: int, result: SpectralResult | None = None) -> tuple[bool, str]:
    """Decide rho(g) >= sqrt(q) rigorously; also name the route that decided it.

    Cheap certificates are tried first (an integer local upper bound below q
    settles "no", a checked rational lower bound with c**2 >= q settles
    "yes"); otherwise the exact definiteness test decides. gamma(z) is not
    used here because a float tie can misplace the max-entry vertex.
    """
    if find_bipartition(g) is not None and upper_bound_local(g).c < q:
        return False, "upper-local"
    if result is None:
        result = spectral_radius(g)
    cert = lower_certificate(g, slack=Fraction(0), digits=None, result=result)
    if cert.c >= 0 and cert.c * cert.c >= q and certify_lower(g, cert.witness, cert.c):
        return True, "lower"
    return compare_rho_squared(g, q) >= 0, "exact"
