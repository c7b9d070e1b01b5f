"""Seeded measurement of inequality constants and triviality distances.

Every estimator walks a deterministic sample stream: sample i is drawn
from a generator keyed by (seed, stream, i), so runs are bit-reproducible,
prefixes are stable when the sample count grows, and partitioning the
stream across workers cannot change the result.  Reported values are
maxima over the stream, hence lower bounds on the true suprema; each
report carries the witness sample so the value can be re-derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .centralizers import (
    CentralizerSpec,
    LiftedQuasilinear,
    evaluate,
    frame_ambiguous,
    signature,
    spec_from_doc,
    spec_to_doc,
)
from .ioutil import jsonable_float
from .matcore import (
    DEFAULT_TOL,
    InputError,
    NumericError,
    Tolerances,
    as_matrix,
    mat_from_json,
    mat_to_json,
    rank_one,
    schatten_norm,
    validate_index,
    vec_from_json,
    vec_to_json,
)

__all__ = [
    "Sampler",
    "STREAM_PRIMARY",
    "STREAM_SECONDARY",
    "STREAM_LEFT",
    "STREAM_RIGHT",
    "STREAM_GAUSS",
    "EstimateReport",
    "estimate_constant",
    "distance_estimate",
    "covariant_defect",
    "contravariant_defect",
    "reevaluate_witness",
    "REPLAY_HANDLERS",
    "FitResult",
    "fit_morphism",
    "TwistedTable",
    "gamma_summing_mc",
    "growth_profile",
]

SAMPLE_TAGS = ("ginibre", "haar_spectral", "rank_one", "sparse")

STREAM_PRIMARY = 0
STREAM_SECONDARY = 1
STREAM_LEFT = 2
STREAM_RIGHT = 3
STREAM_GAUSS = 4


@dataclass(frozen=True)
class Sampler:
    """Deterministic sample source for matrices of a fixed dimension.

    ``tag`` picks the matrix distribution: "ginibre" (iid complex
    normals), "haar_spectral" (Haar frames around a uniform spectrum),
    "rank_one" (spread input frame, dyadic-width output spike), or
    "sparse" (ginibre blocks of dyadic random size).  Identical
    (seed, tag) always reproduce the same stream.
    """

    seed: int
    dim: int
    p: float
    tag: str = "ginibre"
    min_norm: float = 1e-8

    def __post_init__(self):
        if int(self.seed) < 0:
            raise InputError("sampler seed must be a nonnegative integer")
        if self.dim < 1:
            raise InputError("sampler dimension must be positive")
        validate_index(self.p)
        if self.tag not in SAMPLE_TAGS:
            raise InputError(f"unknown sample tag {self.tag!r}; known: {SAMPLE_TAGS}")

    def generator(self, stream: int, index: int) -> np.random.Generator:
        key = np.random.SeedSequence(int(self.seed), spawn_key=(int(stream), int(index)))
        return np.random.default_rng(key)

    def _ginibre(self, rng, n: int) -> np.ndarray:
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return z / math.sqrt(2.0)

    def _haar(self, rng, n: int) -> np.ndarray:
        q, r = np.linalg.qr(self._ginibre(rng, n))
        d = np.diagonal(r).copy()
        d[d == 0] = 1.0
        return q * (d / np.abs(d))

    def _draw(self, rng) -> np.ndarray:
        n = self.dim
        if self.tag == "ginibre":
            return self._ginibre(rng, n)
        if self.tag == "haar_spectral":
            u = self._haar(rng, n)
            v = self._haar(rng, n)
            spectrum = rng.uniform(0.0, 1.0, n)
            return (u * spectrum) @ v.conj().T
        if self.tag == "rank_one":
            # spread input frame, output factor a spike of dyadic random
            # width: one stream then spans the flatness range that
            # separates trivial from nontrivial lifts
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            j = int(rng.integers(0, n.bit_length()))
            k = min(1 << j, n)
            y = np.zeros(n, dtype=np.complex128)
            support = rng.permutation(n)[:k]
            y[support] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            return rank_one(x, y)
        if self.tag == "sparse":
            # dyadic random support size, so one stream mixes spiky and
            # spread singular frames
            j = int(rng.integers(0, n.bit_length()))
            k = min(1 << j, n)
            rows = rng.permutation(n)[:k]
            cols = rng.permutation(n)[:k]
            z = np.zeros((n, n), dtype=np.complex128)
            z[np.ix_(rows, cols)] = self._ginibre(rng, k)
            return z
        raise InputError(f"unknown sample tag {self.tag!r}")

    def raw(self, index: int, stream: int = STREAM_PRIMARY) -> np.ndarray:
        return self._draw(self.generator(stream, index))

    def unit_sphere(self, index: int, stream: int = STREAM_PRIMARY) -> np.ndarray:
        """Sample with Schatten p-norm 1; degenerate draws are redrawn."""
        rng = self.generator(stream, index)
        while True:
            m = self._draw(rng)
            norm = schatten_norm(m, self.p)
            if norm >= self.min_norm:
                return m / norm

    def contraction(self, index: int, stream: int = STREAM_LEFT) -> np.ndarray:
        """Operator-norm contraction: Haar frames around a uniform spectrum."""
        rng = self.generator(stream, index)
        u = self._haar(rng, self.dim)
        v = self._haar(rng, self.dim)
        spectrum = rng.uniform(0.0, 1.0, self.dim)
        return (u * spectrum) @ v.conj().T

    def gaussian_block(self, count: int, width: int,
                       stream: int = STREAM_GAUSS, index: int = 0) -> np.ndarray:
        """(count, width) standard complex normals, row-prefix stable."""
        rng = self.generator(stream, index)
        z = rng.standard_normal((count, width, 2))
        return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


@dataclass
class EstimateReport:
    """Outcome of a max-over-samples measurement.

    ``value`` is the largest defect ratio seen along the stream (a lower
    bound on the true supremum, never an upper bound).  ``witness`` holds
    the serialized inputs of the maximizing sample together with enough
    context to re-derive the ratio.
    """

    kind: str
    value: float
    samples: int
    seed: int
    witness: dict
    note: str = ""
    stderr: float | None = None
    context: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        doc = {
            "kind": self.kind,
            "value": jsonable_float(self.value),
            "samples": self.samples,
            "seed": self.seed,
            "witness": self.witness,
            "note": self.note,
            "context": self.context,
        }
        if self.stderr is not None:
            doc["stderr"] = jsonable_float(self.stderr)
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "EstimateReport":
        return cls(
            kind=doc["kind"],
            value=float(doc["value"]),
            samples=int(doc["samples"]),
            seed=int(doc["seed"]),
            witness=dict(doc["witness"]),
            note=doc.get("note", ""),
            stderr=doc.get("stderr"),
            context=dict(doc.get("context", {})),
        )


_KIND_NOTE = "max over samples; lower bound of the true supremum"

ESTIMATE_KINDS = ("Q", "L", "R", "B")

# replay functions for report kinds defined outside this module
REPLAY_HANDLERS: dict = {}


def _resolve_indices(spec, p, q):
    sig_p, sig_q = signature(spec)
    p = sig_p if p is None else p
    q = sig_q if q is None else q
    if p is None or q is None:
        raise InputError("estimate needs explicit input/output indices for this spec")
    return validate_index(p), validate_index(q)


def _guarantee_note(spec) -> str:
    if isinstance(spec, LiftedQuasilinear) and not spec.within_guarantee:
        return "; lift evaluated outside its backed index window"
    return ""


def _defect(spec, kind, sampler, i, tol):
    """Draw sample i; return the defect, its denominator and the inputs."""
    ev = lambda m: evaluate(spec, m, tol)
    if kind == "Q":
        f = sampler.unit_sphere(i, STREAM_PRIMARY)
        g = sampler.unit_sphere(i, STREAM_SECONDARY)
        defect = ev(f + g) - ev(f) - ev(g)
        denom = schatten_norm(f, sampler.p) + schatten_norm(g, sampler.p)
        inputs = {"f": mat_to_json(f), "g": mat_to_json(g)}
    elif kind == "L":
        a = sampler.contraction(i, STREAM_LEFT)
        f = sampler.unit_sphere(i, STREAM_PRIMARY)
        defect = ev(a @ f) - a @ ev(f)
        denom = schatten_norm(a, math.inf) * schatten_norm(f, sampler.p)
        inputs = {"a": mat_to_json(a), "f": mat_to_json(f)}
    elif kind == "R":
        a = sampler.contraction(i, STREAM_RIGHT)
        f = sampler.unit_sphere(i, STREAM_PRIMARY)
        defect = ev(f @ a) - ev(f) @ a
        denom = schatten_norm(a, math.inf) * schatten_norm(f, sampler.p)
        inputs = {"a": mat_to_json(a), "f": mat_to_json(f)}
    elif kind == "B":
        a = sampler.contraction(i, STREAM_LEFT)
        b = sampler.contraction(i, STREAM_RIGHT)
        f = sampler.unit_sphere(i, STREAM_PRIMARY)
        defect = ev(a @ f @ b) - a @ ev(f) @ b
        denom = (schatten_norm(a, math.inf) * schatten_norm(f, sampler.p)
                 * schatten_norm(b, math.inf))
        inputs = {"a": mat_to_json(a), "b": mat_to_json(b), "f": mat_to_json(f)}
    else:
        raise InputError(f"unknown estimate kind {kind!r}; known: {ESTIMATE_KINDS}")
    return defect, denom, inputs


def estimate_constant(spec: CentralizerSpec, kind: str, sampler: Sampler,
                      n_samples: int, p: float | None = None,
                      q: float | None = None,
                      tol: Tolerances = DEFAULT_TOL) -> EstimateReport:
    """Largest defect ratio of the named kind over a seeded stream.

    Q: additivity defect over the sum of input norms.
    L/R: one-sided multiplication defect over |a| |f|_p.
    B: two-sided multiplication defect over |a| |f|_p |b|.
    """
    if n_samples < 1:
        raise InputError("need at least one sample")
    p, q = _resolve_indices(spec, p, q)
    sampler = replace(sampler, p=p)
    best = -math.inf
    witness: dict = {}
    best_f = None
    for i in range(n_samples):
        try:
            defect, denom, inputs = _defect(spec, kind, sampler, i, tol)
            ratio = schatten_norm(defect, q) / denom
        except NumericError as exc:
            exc.diagnostics.update({"sample_index": i, "seed": sampler.seed,
                                    "dim": sampler.dim, "tag": sampler.tag})
            raise
        if ratio > best:
            best = ratio
            witness = {"index": i, "ratio": ratio, "inputs": inputs}
            best_f = mat_from_json(inputs["f"])
    if best_f is not None:
        witness["frame_ambiguous"] = frame_ambiguous(best_f, tol)
    return EstimateReport(
        kind=kind, value=best, samples=n_samples, seed=sampler.seed,
        witness=witness, note=_KIND_NOTE + _guarantee_note(spec),
        context={"p": p, "q": q, "dim": sampler.dim, "tag": sampler.tag,
                 "spec": spec_to_doc(spec)},
    )


def distance_estimate(a: CentralizerSpec, b: CentralizerSpec, sampler: Sampler,
                      n_samples: int, p: float | None = None,
                      q: float | None = None,
                      tol: Tolerances = DEFAULT_TOL) -> EstimateReport:
    """Largest sampled |a(f) - b(f)|_q / |f|_p; evidence of (in)equivalence."""
    if n_samples < 1:
        raise InputError("need at least one sample")
    p, q = _resolve_indices(a, p, q)
    sampler = replace(sampler, p=p)
    best = -math.inf
    witness: dict = {}
    for i in range(n_samples):
        f = sampler.unit_sphere(i, STREAM_PRIMARY)
        diff = evaluate(a, f, tol) - evaluate(b, f, tol)
        ratio = schatten_norm(diff, q) / schatten_norm(f, p)
        if ratio > best:
            best = ratio
            witness = {"index": i, "ratio": ratio, "inputs": {"f": mat_to_json(f)}}
    return EstimateReport(
        kind="distance", value=best, samples=n_samples, seed=sampler.seed,
        witness=witness, note=_KIND_NOTE + _guarantee_note(a),
        context={"p": p, "q": q, "dim": sampler.dim, "tag": sampler.tag,
                 "spec": spec_to_doc(a), "spec_b": spec_to_doc(b)},
    )


def reevaluate_witness(report: EstimateReport,
                       tol: Tolerances = DEFAULT_TOL) -> float:
    """Recompute the witness ratio of a report from its serialized inputs."""
    if report.kind in REPLAY_HANDLERS:
        return REPLAY_HANDLERS[report.kind](report, tol)
    ctx = report.context
    if report.kind == "gamma":
        table = _table_from_doc(ctx["table"])
        g = vec_from_json(report.witness["inputs_gaussian"])
        target = _target_from_doc(ctx.get("target"))
        return float(_gamma_norms(table, g.reshape(1, -1), target)[0])
    p = validate_index(ctx["p"])
    q = validate_index(ctx["q"])
    spec = spec_from_doc(ctx["spec"])
    inputs = {k: mat_from_json(v) for k, v in report.witness["inputs"].items()}
    kind = report.kind
    if kind == "distance":
        f = inputs["f"]
        diff = evaluate(spec, f, tol) - evaluate(spec_from_doc(ctx["spec_b"]), f, tol)
        return schatten_norm(diff, q) / schatten_norm(f, p)
    if kind == "covariant":
        g, f = inputs["g"], inputs["f"]
        candidate = spec_from_doc(ctx["candidate"])
        defect = evaluate(spec, g @ f, tol) - evaluate(candidate, g, tol) @ f
        return (schatten_norm(defect, q)
                / (schatten_norm(g, ctx["p2"]) * schatten_norm(f, ctx["s"])))
    if kind == "contravariant":
        g, f = inputs["g"], inputs["f"]
        candidate = spec_from_doc(ctx["candidate"])
        defect = g @ evaluate(spec, f, tol) + evaluate(candidate, g, tol) @ f
        return (schatten_norm(defect, ctx["r"])
                / (schatten_norm(g, ctx["q2"]) * schatten_norm(f, p)))
    if kind == "Q":
        f, g = inputs["f"], inputs["g"]
        defect = (evaluate(spec, f + g, tol) - evaluate(spec, f, tol)
                  - evaluate(spec, g, tol))
        denom = schatten_norm(f, p) + schatten_norm(g, p)
    elif kind == "L":
        a, f = inputs["a"], inputs["f"]
        defect = evaluate(spec, a @ f, tol) - a @ evaluate(spec, f, tol)
        denom = schatten_norm(a, math.inf) * schatten_norm(f, p)
    elif kind == "R":
        a, f = inputs["a"], inputs["f"]
        defect = evaluate(spec, f @ a, tol) - evaluate(spec, f, tol) @ a
        denom = schatten_norm(a, math.inf) * schatten_norm(f, p)
    elif kind == "B":
        a, b, f = inputs["a"], inputs["b"], inputs["f"]
        defect = evaluate(spec, a @ f @ b, tol) - a @ evaluate(spec, f, tol) @ b
        denom = (schatten_norm(a, math.inf) * schatten_norm(f, p)
                 * schatten_norm(b, math.inf))
    else:
        raise InputError(f"cannot replay report of kind {kind!r}")
    return schatten_norm(defect, q) / denom


def _split_index(total: float, part: float) -> float:
    """Return w with 1/w = 1/total - 1/part (must stay positive)."""
    total = validate_index(total)
    part = validate_index(part)
    inv = ((0.0 if math.isinf(total) else 1.0 / total)
           - (0.0 if math.isinf(part) else 1.0 / part))
    if inv < 0.0:
        raise InputError(f"index split 1/{total} - 1/{part} is negative")
    return math.inf if inv == 0.0 else 1.0 / inv


def covariant_defect(spec: CentralizerSpec, candidate: CentralizerSpec,
                     s: float, sampler: Sampler, n_samples: int,
                     p1: float | None = None, q1: float | None = None,
                     tol: Tolerances = DEFAULT_TOL) -> EstimateReport:
    """Defect of a candidate index-raised companion of ``spec``.

    Measures max |spec(g f) - candidate(g) f|_q1 / (|g|_p2 |f|_s) with
    1/p2 = 1/p1 - 1/s.  A companion exists and is unique up to strong
    equivalence, but no formula constructs it; this checker scores
    whatever candidate the caller supplies.
    """
    if n_samples < 1:
        raise InputError("need at least one sample")
    p1, q1 = _resolve_indices(spec, p1, q1)
    s = validate_index(s)
    p2 = _split_index(p1, s)
    g_sampler = replace(sampler, p=p2)
    f_sampler = replace(sampler, p=s)
    best = -math.inf
    witness: dict = {}
    for i in range(n_samples):
        g = g_sampler.unit_sphere(i, STREAM_PRIMARY)
        f = f_sampler.unit_sphere(i, STREAM_SECONDARY)
        defect = evaluate(spec, g @ f, tol) - evaluate(candidate, g, tol) @ f
        ratio = (schatten_norm(defect, q1)
                 / (schatten_norm(g, p2) * schatten_norm(f, s)))
        if ratio > best:
            best = ratio
            witness = {"index": i, "ratio": ratio,
                       "inputs": {"g": mat_to_json(g), "f": mat_to_json(f)}}
    return EstimateReport(
        kind="covariant", value=best, samples=n_samples, seed=sampler.seed,
        witness=witness, note=_KIND_NOTE,
        context={"p": p1, "q": q1, "s": s, "p2": p2,
                 "dim": sampler.dim, "tag": sampler.tag,
                 "spec": spec_to_doc(spec), "candidate": spec_to_doc(candidate)},
    )


def contravariant_defect(spec: CentralizerSpec, candidate: CentralizerSpec,
                         r: float, sampler: Sampler, n_samples: int,
                         p1: float | None = None, q1: float | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> EstimateReport:
    """Defect of a candidate index-dual companion of ``spec``.

    Measures max |g spec(f) + candidate(g) f|_r / (|g|_q2 |f|_p1) with
    1/q2 = 1/r - 1/q1; same checking role as ``covariant_defect``.
    """
    if n_samples < 1:
        raise InputError("need at least one sample")
    p1, q1 = _resolve_indices(spec, p1, q1)
    r = validate_index(r)
    q2 = _split_index(r, q1)
    g_sampler = replace(sampler, p=q2)
    f_sampler = replace(sampler, p=p1)
    best = -math.inf
    witness: dict = {}
    for i in range(n_samples):
        g = g_sampler.unit_sphere(i, STREAM_PRIMARY)
        f = f_sampler.unit_sphere(i, STREAM_SECONDARY)
        defect = g @ evaluate(spec, f, tol) + evaluate(candidate, g, tol) @ f
        ratio = (schatten_norm(defect, r)
                 / (schatten_norm(g, q2) * schatten_norm(f, p1)))
        if ratio > best:
            best = ratio
            witness = {"index": i, "ratio": ratio,
                       "inputs": {"g": mat_to_json(g), "f": mat_to_json(f)}}
    return EstimateReport(
        kind="contravariant", value=best, samples=n_samples, seed=sampler.seed,
        witness=witness, note=_KIND_NOTE,
        context={"p": p1, "q": q1, "r": r, "q2": q2,
                 "dim": sampler.dim, "tag": sampler.tag,
                 "spec": spec_to_doc(spec), "candidate": spec_to_doc(candidate)},
    )


@dataclass(frozen=True, eq=False)
class FitResult:
    """Best morphism of the requested module structure, by least squares.

    ``side`` names the module structure: morphisms of left modules act by
    right multiplication f -> f G, those of right modules by composition
    f -> L f.  The Frobenius metric keeps the fit convex and closed-form;
    ``residual`` is then re-measured as the worst (p, q) defect ratio, so
    the probe never overstates triviality.
    """

    matrix: np.ndarray
    residual: float
    side: str
    rank_deficient: bool
    ratios: tuple[float, ...]


def fit_morphism(spec: CentralizerSpec, side: str, samples, q: float,
                 p: float, tol: Tolerances = DEFAULT_TOL) -> FitResult:
    if side not in ("left", "right"):
        raise InputError(f"side must be 'left' or 'right', got {side!r}")
    mats = [as_matrix(f) for f in samples]
    if not mats:
        raise InputError("fit_morphism needs at least one sample")
    p = validate_index(p)
    q = validate_index(q)
    values = [evaluate(spec, f, tol) for f in mats]
    n = mats[0].shape[1] if side == "left" else mats[0].shape[0]
    gram = np.zeros((n, n), dtype=np.complex128)
    cross = np.zeros((n, n), dtype=np.complex128)
    for f, y in zip(mats, values):
        if side == "left":
            gram += f.conj().T @ f
            cross += f.conj().T @ y
        else:
            gram += f @ f.conj().T
            cross += y @ f.conj().T
    rank_deficient = bool(np.linalg.matrix_rank(gram) < n)
    pinv = np.linalg.pinv(gram)
    morph = pinv @ cross if side == "left" else cross @ pinv
    ratios = []
    for f, y in zip(mats, values):
        approx = f @ morph if side == "left" else morph @ f
        ratios.append(schatten_norm(y - approx, q) / schatten_norm(f, p))
    return FitResult(matrix=morph, residual=max(ratios), side=side,
                     rank_deficient=rank_deficient, ratios=tuple(ratios))


@dataclass(frozen=True, eq=False)
class TwistedTable:
    """Columns of an operator into a twisted pair space.

    Basis vector e_j is sent to the pair (y_cols[:, j], x_cols[:, j]).
    """

    y_cols: np.ndarray
    x_cols: np.ndarray


def _table_from_doc(doc: dict):
    if doc["kind"] == "matrix":
        return as_matrix(mat_from_json(doc["value"]))
    return TwistedTable(y_cols=mat_from_json(doc["y"]),
                        x_cols=mat_from_json(doc["x"]))


def _table_to_doc(table) -> dict:
    if isinstance(table, TwistedTable):
        return {"kind": "twisted", "y": mat_to_json(table.y_cols),
                "x": mat_to_json(table.x_cols)}
    return {"kind": "matrix", "value": mat_to_json(as_matrix(table))}


def _target_from_doc(doc):
    if doc is None:
        return None
    from .twisted import twisted_target  # deferred: twisted imports metrology

    return twisted_target(**doc)


def _gamma_norms(table, gaussians: np.ndarray, target) -> np.ndarray:
    """Norms of sum_k g_k v(e_k) for each row of Gaussian coefficients."""
    if isinstance(table, TwistedTable):
        if target is None:
            raise InputError("a twisted table needs an explicit target quasinorm")
        wy = gaussians @ table.y_cols.T
        wx = gaussians @ table.x_cols.T
        return target.rows(wy, wx)
    w = gaussians @ as_matrix(table).T
    if target is None:
        return np.linalg.norm(w, axis=1)
    return target.rows(w, None)


def gamma_summing_mc(table, n_samples: int, seed: int, target=None) -> EstimateReport:
    """Monte Carlo Gaussian-average norm of an operator given by columns.

    Estimates (E | sum_k g_k v(e_k) |^2)^(1/2) with independent standard
    complex Gaussians g_k.  For a plain matrix into a Euclidean target the
    exact value is the Frobenius norm, which anchors the estimator.  The
    reported standard error is for the square root (delta method).
    """
    if n_samples < 1:
        raise InputError("need at least one sample")
    width = (table.x_cols if isinstance(table, TwistedTable) else as_matrix(table)).shape[1]
    sampler = Sampler(seed=seed, dim=max(1, width), p=2.0)
    gaussians = sampler.gaussian_block(n_samples, width)
    norms = _gamma_norms(table, gaussians, target)
    squares = norms**2
    mean = float(squares.mean())
    value = math.sqrt(mean)
    if n_samples > 1:
        se_mean = float(squares.std(ddof=1)) / math.sqrt(n_samples)
    else:
        se_mean = float("nan")
    stderr = se_mean / (2.0 * value) if value > 0.0 else 0.0
    note = "Monte Carlo mean of squared norms; stderr by the delta method"
    if n_samples < 100:
        note += "; WARNING: fewer than 100 samples"
    imax = int(np.argmax(norms))
    witness = {
        "index": imax,
        "ratio": float(norms[imax]),
        "inputs_gaussian": vec_to_json(gaussians[imax]),
    }
    context = {"p": 2.0, "q": 2.0, "table": _table_to_doc(table)}
    if target is not None:
        context["target"] = target.doc()
    return EstimateReport(kind="gamma", value=value, samples=n_samples,
                          seed=seed, witness=witness, note=note,
                          stderr=stderr, context=context)


def growth_profile(measure, dims, seed: int) -> list[dict]:
    """Dimension-sweep driver producing dim/kind/value/samples/seed rows.

    ``measure(dim)`` returns (kind, value, samples) triples; dims must be
    nonempty and strictly ascending so trends read top to bottom.
    """
    dims = [int(d) for d in dims]
    if not dims:
        raise InputError("growth profile needs at least one dimension")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise InputError("dimensions must be strictly ascending")
    rows = []
    for d in dims:
        for kind, value, samples in measure(d):
            rows.append({"dim": d, "kind": kind, "value": float(value),
                         "samples": int(samples), "seed": int(seed)})
    return rows
