"""Complex normed spaces on C^d: vectors, norm families, dual geometry.

Four norm families are supported:

* ``lp``   -- the p-norms, 1 <= p <= inf
* ``wl1``  -- weighted l1 norms with strictly positive weights
* ``pd``   -- norms induced by a Hermitian positive-definite Gram matrix
* ``poly`` -- polyhedral norms max_j |f_j(x)| over a separating family of
  complex covectors

Every spec is immutable after construction and all functions here are pure,
so everything is safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, SpecParseError

LP = "lp"
WEIGHTED_L1 = "wl1"
PD_INNER = "pd"
POLYHEDRAL = "poly"

FAMILIES = (LP, WEIGHTED_L1, PD_INNER, POLYHEDRAL)

# construction-time validation tolerance (PD eigenvalue check, rank check)
VALIDATION_TOL = 1e-10


def vector(data) -> np.ndarray:
    """Validate and return a finite complex coordinate vector.

    Accepts any 1-D array-like; returns a read-only complex128 array.
    """
    arr = np.array(data, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size < 1:
        raise ValueError("vector must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector components must be finite (no NaN/Inf)")
    arr.setflags(write=False)
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class NormSpec:
    """A tagged description of one norm on C^dim.

    Exactly one of the parameter fields is populated, according to family.
    Use the factory functions :func:`lp`, :func:`weighted_l1`,
    :func:`pd_inner`, :func:`polyhedral` instead of the raw constructor.
    """

    family: str
    dim: int
    p: float | None = None
    weights: np.ndarray | None = field(default=None, repr=False)
    gram: np.ndarray | None = field(default=None, repr=False)
    functionals: np.ndarray | None = field(default=None, repr=False)

    def __repr__(self) -> str:
        return f"NormSpec({format_norm_spec(self)!r})"


def lp(p: float, dim: int) -> NormSpec:
    """The p-norm on C^dim; p may be math.inf."""
    p = float(p)
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if not (p >= 1.0):
        raise ValueError("lp norm requires p >= 1")
    return NormSpec(LP, dim, p=p)


def weighted_l1(weights) -> NormSpec:
    """Weighted l1 norm sum_k w_k |x_k| with all w_k > 0."""
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.size < 1:
        raise ValueError("weights must have dimension >= 1")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValueError("weights must be finite and strictly positive")
    spec = NormSpec(WEIGHTED_L1, w.size)
    wc = w.copy()
    wc.setflags(write=False)
    object.__setattr__(spec, "weights", wc)
    return spec


def pd_inner(gram) -> NormSpec:
    """Norm sqrt(<x,x>) from a Hermitian positive-definite Gram matrix."""
    g = np.asarray(gram, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
        raise ValueError("gram must be a square matrix")
    scale = max(np.abs(g).max(), 1.0)
    if np.abs(g - g.conj().T).max() > VALIDATION_TOL * scale:
        raise ValueError("gram must equal its conjugate transpose")
    eigs = np.linalg.eigvalsh(g)
    if eigs.min() <= VALIDATION_TOL * max(eigs.max(), 1.0):
        raise ValueError("gram must be positive definite")
    spec = NormSpec(PD_INNER, g.shape[0])
    object.__setattr__(spec, "gram", _frozen(g))
    return spec


def polyhedral(functionals) -> NormSpec:
    """Polyhedral norm max_j |f_j(x)| from rows f_j of a covector matrix.

    The functionals must separate points (full column rank), otherwise the
    formula is only a seminorm.
    """
    f = np.asarray(functionals, dtype=np.complex128)
    if f.ndim != 2 or f.shape[0] < 1 or f.shape[1] < 1:
        raise ValueError("functionals must be a nonempty 2-D matrix")
    if not np.all(np.isfinite(f)):
        raise ValueError("functionals must be finite")
    s = np.linalg.svd(f, compute_uv=False)
    rank = int(np.sum(s > VALIDATION_TOL * s[0]))
    if rank < f.shape[1]:
        raise ValueError("functionals do not separate points (rank deficient)")
    spec = NormSpec(POLYHEDRAL, f.shape[1])
    object.__setattr__(spec, "functionals", _frozen(f))
    return spec


def check_dim(spec: NormSpec, x: np.ndarray) -> None:
    if x.shape[-1] != spec.dim:
        raise DimensionMismatchError(
            f"vector of dim {x.shape[-1]} does not match spec dim {spec.dim}"
        )


def norm_rows(spec: NormSpec, xs: np.ndarray) -> np.ndarray:
    """Norm of each row of a 2-D array, in the dtype of the input.

    Extended-precision rows (clongdouble) are evaluated in extended
    precision; this is what the norm-derivative limit relies on.
    """
    check_dim(spec, xs)
    if spec.family == LP:
        a = np.abs(xs)
        if np.isinf(spec.p):
            return a.max(axis=-1)
        if spec.p == 1.0:
            return a.sum(axis=-1)
        m = a.max(axis=-1)
        safe = np.where(m > 0, m, 1)
        scaled = a / safe[..., None]
        return m * (scaled**spec.p).sum(axis=-1) ** (1.0 / spec.p)
    if spec.family == WEIGHTED_L1:
        return (spec.weights * np.abs(xs)).sum(axis=-1)
    if spec.family == PD_INNER:
        # <x,x> = sum_a (G x)_a conj(x_a), real and >= 0 up to rounding;
        # scaling by the largest coordinate keeps the quadratic form from
        # overflowing for very large vectors
        m = np.abs(xs).max(axis=-1)
        safe = np.where(m > 0, m, 1)
        scaled = xs / safe[..., None]
        gx = scaled @ spec.gram.T
        q = (gx * scaled.conj()).sum(axis=-1).real
        return m * np.sqrt(np.maximum(q, 0))
    if spec.family == POLYHEDRAL:
        return np.abs(xs @ spec.functionals.T).max(axis=-1)
    raise ValueError(f"unknown family {spec.family!r}")


def norm(spec: NormSpec, x) -> float:
    """Evaluate the norm of a single vector."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    return float(norm_rows(spec, x[None, :])[0])


def norm_fn(spec: NormSpec):
    """A low-overhead single-vector norm closure for hot loops.

    The returned callable skips dimension checks; callers validate once.
    """
    if spec.family == LP:
        p = spec.p
        if np.isinf(p):
            return lambda v: float(np.abs(v).max())
        if p == 1.0:
            return lambda v: float(np.abs(v).sum())

        def _lp(v):
            a = np.abs(v)
            m = a.max()
            if m == 0.0:
                return 0.0
            return float(m * ((a / m) ** p).sum() ** (1.0 / p))

        return _lp
    if spec.family == WEIGHTED_L1:
        w = spec.weights
        return lambda v: float((w * np.abs(v)).sum())
    if spec.family == PD_INNER:
        g = spec.gram
        return lambda v: float(np.sqrt(max(((g @ v) * v.conj()).sum().real, 0.0)))
    if spec.family == POLYHEDRAL:
        f = spec.functionals
        return lambda v: float(np.abs(f @ v).max())
    raise ValueError(f"unknown family {spec.family!r}")


def gram_inner(spec: NormSpec, x, y) -> complex:
    """Inner product <x,y> of a pd spec: linear in x, conjugate-linear in y."""
    if spec.family != PD_INNER:
        raise ValueError("gram_inner requires a pd spec")
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    check_dim(spec, x)
    check_dim(spec, y)
    return complex(np.sum((spec.gram @ x) * y.conj()))


# --- dual geometry -----------------------------------------------------------

TABLE = "table"
COMPUTED = "computed"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class DualInfo:
    """Per-family geometric metadata.

    r_dual is the length of the longest line segment on the dual unit
    sphere (None = unknown); a segment on a unit sphere has length <= 2.
    """

    r_dual: float | None
    is_smooth: bool | None
    is_rotund: bool | None
    provenance: str

    def __post_init__(self):
        if self.r_dual is not None and not (0.0 <= self.r_dual <= 2.0):
            raise ValueError("r_dual must lie in [0, 2]")


def dual_segment_constant(spec: NormSpec) -> DualInfo:
    """Look up R(X*), smoothness and rotundity for the spec's family.

    This is a lookup table, not a computation: the duals of the supported
    families are standard.  Polyhedral duals are reported unknown (except
    in dimension one, where every norm is a multiple of the modulus).
    """
    if spec.dim == 1:
        return DualInfo(0.0, True, True, TABLE)
    if spec.family == PD_INNER:
        return DualInfo(0.0, True, True, TABLE)
    if spec.family == LP:
        if spec.p == 1.0 or np.isinf(spec.p):
            return DualInfo(2.0, False, False, TABLE)
        return DualInfo(0.0, True, True, TABLE)
    if spec.family == WEIGHTED_L1:
        return DualInfo(2.0, False, False, TABLE)
    if spec.family == POLYHEDRAL:
        return DualInfo(None, False, False, UNKNOWN)
    raise ValueError(f"unknown family {spec.family!r}")


def is_smooth_family(spec: NormSpec) -> bool:
    return bool(dual_segment_constant(spec).is_smooth)


# --- text formats ------------------------------------------------------------
#
# Complex literal grammar: [-]a[.b][+|-c[.d]i], no spaces; an exponent suffix
# is also accepted on each part so that printed values always re-parse.
# Vectors are comma-separated literals; norm specs are colon-separated
# records such as lp:p=1.5:dim=4 or pd:gram=I:dim=3.

_FLOAT = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^({_FLOAT})(?:({_FLOAT})i)?$")


def parse_complex(text: str) -> complex:
    m = _COMPLEX_RE.match(text.strip())
    if not m:
        raise SpecParseError(f"bad complex literal {text!r}")
    re_part = float(m.group(1))
    im_part = float(m.group(2)) if m.group(2) else 0.0
    return complex(re_part, im_part)


def _fmt_float(v: float) -> str:
    if v == 0.0:
        return "0"  # normalizes -0.0
    return repr(float(v))


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return _fmt_float(z.real)
    sign = "+" if z.imag > 0 else "-"
    return f"{_fmt_float(z.real)}{sign}{_fmt_float(abs(z.imag))}i"


def parse_cvector(text: str) -> np.ndarray:
    parts = [p for p in text.strip().split(",") if p != ""]
    if not parts:
        raise SpecParseError("empty vector literal")
    return vector([parse_complex(p) for p in parts])


def format_cvector(x) -> str:
    return ",".join(format_complex(z) for z in np.asarray(x).reshape(-1))


def _parse_real_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p != ""]


def _parse_complex_matrix(text: str) -> np.ndarray:
    rows = [r for r in text.split(";") if r != ""]
    return np.array([[parse_complex(p) for p in r.split(",")] for r in rows])


def _format_complex_matrix(m: np.ndarray) -> str:
    return ";".join(",".join(format_complex(z) for z in row) for row in m)


def parse_norm_spec(text: str) -> NormSpec:
    """Parse a norm spec record such as ``lp:p=1.5:dim=4``.

    Fields after the family tag are ``key=value`` pairs.  Recognized keys:
    ``p`` and ``dim`` (lp), ``w`` (wl1), ``gram`` (pd; ``I`` for identity),
    ``f`` (poly; rows separated by ``;``).
    """
    parts = text.strip().split(":")
    family = parts[0]
    kv: dict[str, str] = {}
    for part in parts[1:]:
        if "=" not in part:
            raise SpecParseError(f"bad spec field {part!r} in {text!r}")
        k, v = part.split("=", 1)
        kv[k] = v
    try:
        if family == LP:
            return lp(float(kv["p"]), int(kv["dim"]))
        if family == WEIGHTED_L1:
            w = _parse_real_list(kv["w"])
            if "dim" in kv and int(kv["dim"]) != len(w):
                raise SpecParseError(f"dim mismatch in {text!r}")
            return weighted_l1(w)
        if family == PD_INNER:
            if kv["gram"] == "I":
                return pd_inner(np.eye(int(kv["dim"])))
            g = _parse_complex_matrix(kv["gram"])
            if "dim" in kv and int(kv["dim"]) != g.shape[0]:
                raise SpecParseError(f"dim mismatch in {text!r}")
            return pd_inner(g)
        if family == POLYHEDRAL:
            f = _parse_complex_matrix(kv["f"])
            if "dim" in kv and int(kv["dim"]) != f.shape[1]:
                raise SpecParseError(f"dim mismatch in {text!r}")
            return polyhedral(f)
    except SpecParseError:
        raise
    except (KeyError, ValueError) as exc:
        raise SpecParseError(f"bad norm spec {text!r}: {exc}") from exc
    raise SpecParseError(f"unknown norm family {family!r}")


def format_norm_spec(spec: NormSpec) -> str:
    if spec.family == LP:
        p = "inf" if np.isinf(spec.p) else repr(float(spec.p))
        return f"lp:p={p}:dim={spec.dim}"
    if spec.family == WEIGHTED_L1:
        w = ",".join(repr(float(v)) for v in spec.weights)
        return f"wl1:w={w}:dim={spec.dim}"
    if spec.family == PD_INNER:
        if np.array_equal(spec.gram, np.eye(spec.dim)):
            return f"pd:gram=I:dim={spec.dim}"
        return f"pd:gram={_format_complex_matrix(spec.gram)}:dim={spec.dim}"
    if spec.family == POLYHEDRAL:
        return f"poly:f={_format_complex_matrix(spec.functionals)}:dim={spec.dim}"
    raise ValueError(f"unknown family {spec.family!r}")
