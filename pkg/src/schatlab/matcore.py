"""Dense complex-matrix kernel.

Schatten quasinorms, Schmidt (singular) expansions with a deterministic
phase convention, polar decompositions, powers of the modulus, sharp
Hoelder factorizations and joint-root factorizations.  Everything here is
a pure function of plain ``numpy`` ``complex128`` arrays; nothing is
mutated after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InputError",
    "NumericError",
    "Tolerances",
    "DEFAULT_TOL",
    "validate_index",
    "as_matrix",
    "as_vector",
    "rank_one",
    "trace",
    "singular_values",
    "schatten_norm",
    "concavity_modulus",
    "SchmidtForm",
    "schmidt",
    "PolarForm",
    "polar",
    "modulus_power",
    "holder_factor",
    "joint_root",
    "combine_indices",
    "mat_to_json",
    "mat_from_json",
    "vec_to_json",
    "vec_from_json",
]


class InputError(ValueError):
    """An argument violates a documented precondition."""


class NumericError(RuntimeError):
    """A matrix factorization failed; carries condition diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy shared by the kernel operations.

    reconstruction_rtol : relative error allowed when a factorization is
        multiplied back together.
    slack_atol : absolute slack granted to inequality checks.
    zero_rtol : singular values below ``zero_rtol * s_max`` are dropped.
    gap_rtol : relative spectral gap below which singular frames are
        reported as ambiguous.
    gauge_atol : coordinates of a unit vector below this threshold are
        skipped when fixing frame phases.
    """

    reconstruction_rtol: float = 1e-10
    slack_atol: float = 1e-8
    zero_rtol: float = 1e-12
    gap_rtol: float = 1e-6
    gauge_atol: float = 1e-12


DEFAULT_TOL = Tolerances()


def validate_index(p: float) -> float:
    """Check a summability index: any real in (0, inf]."""
    p = float(p)
    if math.isnan(p) or p <= 0.0:
        raise InputError(f"summability index must be positive, got {p!r}")
    return p


def combine_indices(p: float, s: float) -> float:
    """Return q with 1/q = 1/p + 1/s (inf acts as a neutral element)."""
    p = validate_index(p)
    s = validate_index(s)
    inv = (0.0 if math.isinf(p) else 1.0 / p) + (0.0 if math.isinf(s) else 1.0 / s)
    return math.inf if inv == 0.0 else 1.0 / inv


def as_matrix(f) -> np.ndarray:
    a = np.asarray(f, dtype=np.complex128)
    if a.ndim != 2:
        raise InputError(f"expected a matrix, got array of shape {a.shape}")
    if a.size and not np.isfinite(a).all():
        raise InputError("matrix entries must be finite")
    return a


def as_vector(x) -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 1:
        raise InputError(f"expected a vector, got array of shape {a.shape}")
    if a.size and not np.isfinite(a).all():
        raise InputError("vector entries must be finite")
    return a


def rank_one(x, y) -> np.ndarray:
    """Matrix of the rank-one operator h -> <h|x> y.

    The scalar product is linear in the first slot, so the matrix is the
    outer product of ``y`` with the conjugate of ``x``; its single
    singular value is ``|x| |y|``, whatever Schatten index is used.
    """
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise InputError(f"rank_one frames disagree: {x.shape} vs {y.shape}")
    return np.outer(y, x.conj())


def trace(f) -> complex:
    f = as_matrix(f)
    if f.shape[0] != f.shape[1]:
        raise InputError(f"trace needs a square matrix, got {f.shape}")
    return complex(np.trace(f))


def _condition_diagnostics(f: np.ndarray) -> dict:
    return {
        "shape": list(f.shape),
        "frobenius": float(np.linalg.norm(f)),
        "max_abs": float(np.abs(f).max()) if f.size else 0.0,
    }


def singular_values(f) -> np.ndarray:
    """Singular values of ``f`` in nonincreasing order."""
    f = as_matrix(f)
    try:
        return np.linalg.svd(f, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "singular value decomposition did not converge",
            diagnostics=_condition_diagnostics(f),
        ) from exc


def schatten_norm(f, p: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Schatten p-quasinorm: the l^p norm of the singular values.

    ``p = inf`` gives the operator norm.  The zero matrix has norm 0 for
    every index.  Values below the zero threshold are treated as exact
    zeros; for p < 1 this keeps factorization noise from being amplified
    (the true rank is what the quasinorm of a finite-rank operator sees).
    """
    p = validate_index(p)
    s = singular_values(f)
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    if math.isinf(p):
        return float(s[0])
    s = s[s > tol.zero_rtol * s[0]]
    # summing the powers in ascending order keeps the result independent
    # of the row/column presentation of f
    powers = np.sort(s) ** p
    return float(powers.sum() ** (1.0 / p))


def concavity_modulus(r: float) -> float:
    """Best constant in the p-triangle inequality: 2^(1/r - 1) for r < 1."""
    r = validate_index(r)
    if r < 1.0:
        return 2.0 ** (1.0 / r - 1.0)
    return 1.0


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Prescribed singular expansion ``f = sum_n s_n rank_one(x_n, y_n)``.

    ``x`` and ``y`` hold the frames as columns.  The phase convention:
    each pair of columns is multiplied by the unit scalar that makes the
    first significant coordinate of the x-column real positive, which
    pins the expansion whenever the kept singular values are distinct.
    ``gap`` is the smallest relative gap between consecutive kept values;
    frames with ``gap`` below tolerance are not uniquely determined.
    """

    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    shape: tuple[int, int]
    gap: float

    @property
    def rank(self) -> int:
        return int(self.s.size)

    def reconstruct(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(self.shape, dtype=np.complex128)
        return (self.y * self.s) @ self.x.conj().T


def _gauge_fix(x: np.ndarray, y: np.ndarray, gauge_atol: float) -> None:
    # in-place: multiply each column pair by a common unit scalar; the
    # rank-one terms are invariant under this change
    for i in range(x.shape[1]):
        col = x[:, i]
        idx = np.flatnonzero(np.abs(col) > gauge_atol)
        if idx.size == 0:
            continue
        pivot = col[idx[0]]
        mu = pivot.conjugate() / abs(pivot)
        x[:, i] *= mu
        y[:, i] *= mu


def _relative_gap(s: np.ndarray) -> float:
    if s.size <= 1 or s[0] == 0.0:
        return math.inf
    return float(np.min(s[:-1] - s[1:]) / s[0])


def schmidt(f, tol: Tolerances = DEFAULT_TOL, backend: str = "svd") -> SchmidtForm:
    """Prescribed expansion of ``f`` under the fixed phase convention.

    Values below ``tol.zero_rtol * s_1`` are dropped.  ``backend`` selects
    the factorization route ("svd", or "eig" which diagonalizes f*f and
    recovers the y-frame by applying f); both obey the same convention.
    """
    f = as_matrix(f)
    try:
        if backend == "svd":
            u, s, vh = np.linalg.svd(f, full_matrices=False)
            x = vh.conj().T
        elif backend == "eig":
            w, x = np.linalg.eigh(f.conj().T @ f)
            order = np.argsort(-w, kind="stable")
            w = np.clip(w[order], 0.0, None)
            x = x[:, order]
            s = np.sqrt(w)
            with np.errstate(divide="ignore", invalid="ignore"):
                u = np.where(s > 0.0, 1.0, 0.0) * (f @ x) / np.where(s > 0.0, s, 1.0)
        else:
            raise InputError(f"unknown schmidt backend {backend!r}")
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "singular value decomposition did not converge",
            diagnostics=_condition_diagnostics(f),
        ) from exc
    if s.size and s[0] > 0.0:
        keep = s > tol.zero_rtol * s[0]
    else:
        keep = np.zeros(s.shape, dtype=bool)
    s = np.ascontiguousarray(s[keep])
    y = np.ascontiguousarray(u[:, keep])
    x = np.ascontiguousarray(x[:, keep])
    _gauge_fix(x, y, tol.gauge_atol)
    for arr in (s, x, y):  # forms are shared freely; keep them immutable
        arr.setflags(write=False)
    return SchmidtForm(s=s, x=x, y=y, shape=f.shape, gap=_relative_gap(s))


@dataclass(frozen=True, eq=False)
class PolarForm:
    """``source = phase @ modulus`` with ``phase`` a partial isometry
    vanishing on the kernel of ``modulus`` and ``modulus`` Hermitian PSD."""

    phase: np.ndarray
    modulus: np.ndarray


def polar(f, tol: Tolerances = DEFAULT_TOL) -> PolarForm:
    """Polar decomposition ``f = u |f|`` with ``u`` supported on ran|f|."""
    form = schmidt(f, tol)
    phase = form.y @ form.x.conj().T
    modulus = (form.x * form.s) @ form.x.conj().T
    phase.setflags(write=False)
    modulus.setflags(write=False)
    return PolarForm(phase=phase, modulus=modulus)


def modulus_power(f, alpha: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD power ``|f|^alpha`` (alpha > 0) on the range of |f|."""
    alpha = float(alpha)
    if not alpha > 0.0:
        raise InputError(f"modulus exponent must be positive, got {alpha!r}")
    form = schmidt(f, tol)
    return (form.x * form.s**alpha) @ form.x.conj().T


def holder_factor(h, p: float, s: float, tol: Tolerances = DEFAULT_TOL):
    """Sharp factorization ``h = f g`` with ``|f|_p |g|_s = |h|_q``.

    Here 1/q = 1/p + 1/s and q must be finite.  With ``h = u |h|`` the
    factors are ``f = u |h|^(q/p)`` and ``g = |h|^(q/s)``; the exponents
    add up to one, so the product and the norm identity are automatic.
    Returns a pair of zero matrices when ``h = 0``.
    """
    q = combine_indices(p, s)
    if math.isinf(q):
        raise InputError("holder_factor needs a finite target index")
    h = as_matrix(h)
    form = schmidt(h, tol)
    n = h.shape[1]
    if form.rank == 0:
        return np.zeros_like(h), np.zeros((n, n), dtype=np.complex128)
    ep = 0.0 if math.isinf(float(p)) else q / float(p)
    es = 0.0 if math.isinf(float(s)) else q / float(s)
    f = (form.y * form.s**ep) @ form.x.conj().T
    g = (form.x * form.s**es) @ form.x.conj().T
    return f, g


def joint_root(f, g, p: float, tol: Tolerances = DEFAULT_TOL):
    """Common factorization ``f = a h``, ``g = b h`` through the joint root.

    ``h = (f*f + g*g)^(1/2)`` and the cofactors are contractions obtained
    by applying the pseudo-inverse of ``h`` on its range (they vanish on
    the kernel).  The quasinorm of ``h`` is controlled by the p/2
    concavity modulus: |h|_p <= delta_{p/2}^(1/2) (|f|_p + |g|_p).
    """
    validate_index(p)
    f = as_matrix(f)
    g = as_matrix(g)
    if f.shape != g.shape:
        raise InputError(f"joint_root inputs disagree: {f.shape} vs {g.shape}")
    m = f.conj().T @ f + g.conj().T @ g
    try:
        w, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "eigendecomposition did not converge",
            diagnostics=_condition_diagnostics(m),
        ) from exc
    w = np.clip(w, 0.0, None)
    wmax = float(w.max()) if w.size else 0.0
    support = w > (tol.zero_rtol**2) * wmax if wmax > 0.0 else np.zeros(w.shape, bool)
    root = np.where(support, np.sqrt(w), 0.0)
    inv = np.zeros_like(root)
    inv[support] = 1.0 / root[support]
    h = (vecs * root) @ vecs.conj().T
    pinv = (vecs * inv) @ vecs.conj().T
    return h, f @ pinv, g @ pinv


# --- JSON wire format -------------------------------------------------------
#
# A matrix travels as {"rows": r, "cols": c, "re": [...], "im": [...]} with
# row-major coefficient lists; vectors as flat [re, im] pair lists.


def mat_to_json(f) -> dict:
    f = as_matrix(f)
    return {
        "rows": int(f.shape[0]),
        "cols": int(f.shape[1]),
        "re": [float(v) for v in f.real.ravel()],
        "im": [float(v) for v in f.imag.ravel()],
    }


def mat_from_json(doc: dict) -> np.ndarray:
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        re = np.asarray(doc["re"], dtype=np.float64)
        im = np.asarray(doc["im"], dtype=np.float64)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed matrix document: {exc}") from exc
    if rows < 0 or cols < 0 or re.size != rows * cols or im.size != rows * cols:
        raise InputError("matrix document length disagrees with its shape")
    return as_matrix((re + 1j * im).reshape(rows, cols))


def vec_to_json(x) -> list:
    x = as_vector(x)
    return [[float(v.real), float(v.imag)] for v in x]


def vec_from_json(doc) -> np.ndarray:
    try:
        pairs = [(float(re), float(im)) for re, im in doc]
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed vector document: {exc}") from exc
    return as_vector(np.array([re + 1j * im for re, im in pairs], dtype=np.complex128))
