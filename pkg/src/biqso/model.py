"""Population model: inheritance tensors, states on the product simplex, model files.

Index convention (0-based throughout):

* ``female[i, j, k]`` is the probability that the pair (female type ``i``,
  male type ``j``) produces a female offspring of type ``k``;
* ``male[i, j, l]`` is the same for a male offspring of type ``l``.

A state ``z = (x, y)`` lives on ``S^{n-1} x S^{nu-1}``; as a flat vector the
first ``n`` coordinates are female, the last ``nu`` male.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import (
    LengthMismatch,
    ModelFileError,
    NegativeCoefficient,
    NegativeEntry,
    RowSumViolation,
    ShapeMismatch,
    SumViolation,
)

#: Tolerance for every simplex membership and row-sum check.
TAU_VALID = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class InheritanceTensors:
    female: np.ndarray  # (n, nu, n)
    male: np.ndarray  # (n, nu, nu)


@dataclass(frozen=True, eq=False)
class BisexualModel:
    """Dimensions plus validated inheritance tensors. Build with :func:`validate_tensors`."""

    n: int
    nu: int
    tensors: InheritanceTensors

    @property
    def female(self) -> np.ndarray:
        return self.tensors.female

    @property
    def male(self) -> np.ndarray:
        return self.tensors.male

    @property
    def dim(self) -> int:
        return self.n + self.nu

    def offspring(self) -> np.ndarray:
        """Both tensors stacked along the offspring axis, shape ``(n, nu, n + nu)``."""
        return np.concatenate([self.female, self.male], axis=2)

    def equals(self, other: "BisexualModel") -> bool:
        """Entry-wise equality of dimensions and tensors."""
        return (
            self.n == other.n
            and self.nu == other.nu
            and np.array_equal(self.female, other.female)
            and np.array_equal(self.male, other.male)
        )

    def __repr__(self) -> str:
        return f"BisexualModel(n={self.n}, nu={self.nu})"


def _check_rows(p: np.ndarray, sex: str, tol: float) -> None:
    if not np.all(np.isfinite(p)):
        raise ShapeMismatch(f"{sex} tensor contains non-finite entries")
    neg = np.argwhere(p < 0)
    if neg.size:
        idx = tuple(int(v) for v in neg[0])
        raise NegativeCoefficient(sex, idx, float(p[idx]))
    sums = p.sum(axis=2)
    bad = np.argwhere(np.abs(sums - 1.0) > tol)
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise RowSumViolation(sex, (i, j), float(sums[i, j]))


def validate_tensors(raw_female, raw_male, tol: float = TAU_VALID) -> BisexualModel:
    """Build a :class:`BisexualModel` from raw coefficient arrays.

    Rows are checked, never renormalized. Raises :class:`ShapeMismatch`,
    :class:`NegativeCoefficient` or :class:`RowSumViolation`.
    """
    try:
        female = np.array(raw_female, dtype=float)
        male = np.array(raw_male, dtype=float)
    except (ValueError, TypeError) as exc:
        raise ShapeMismatch(f"tensors are not rectangular numeric arrays: {exc}") from None
    if female.ndim != 3 or male.ndim != 3:
        raise ShapeMismatch(
            f"expected 3-index arrays, got shapes {female.shape} and {male.shape}"
        )
    n, nu = female.shape[0], female.shape[1]
    if n < 1 or nu < 1:
        raise ShapeMismatch("need at least one female and one male type")
    if female.shape != (n, nu, n):
        raise ShapeMismatch(f"female tensor has shape {female.shape}, expected {(n, nu, n)}")
    if male.shape != (n, nu, nu):
        raise ShapeMismatch(f"male tensor has shape {male.shape}, expected {(n, nu, nu)}")
    _check_rows(female, "female", tol)
    _check_rows(male, "male", tol)
    return BisexualModel(n, nu, InheritanceTensors(_frozen(female), _frozen(male)))


# --------------------------------------------------------------------------
# states


def _check_simplex(v: np.ndarray, sex: str, tol: float) -> None:
    if not np.all(np.isfinite(v)):
        raise SumViolation(sex, float("nan"))
    neg = np.flatnonzero(v < 0)
    if neg.size:
        raise NegativeEntry(sex, int(neg[0]), float(v[neg[0]]))
    s = float(v.sum())
    if abs(s - 1.0) > tol:
        raise SumViolation(sex, s)


@dataclass(frozen=True, eq=False)
class PopulationState:
    """A point ``(x, y)`` of the product simplex; validated on construction."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _frozen(self.x).ravel()
        y = _frozen(self.y).ravel()
        if x.size < 1 or y.size < 1:
            raise LengthMismatch("both parts of a state need at least one entry")
        _check_simplex(x, "female", TAU_VALID)
        _check_simplex(y, "male", TAU_VALID)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def _trusted(cls, x: np.ndarray, y: np.ndarray) -> "PopulationState":
        # hot-loop constructor: caller guarantees membership in S
        self = object.__new__(cls)
        x = np.array(x, dtype=float)
        y = np.array(y, dtype=float)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        return self

    @classmethod
    def from_vector(cls, z, n: int) -> "PopulationState":
        z = np.asarray(z, dtype=float).ravel()
        return cls(z[:n], z[n:])

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def nu(self) -> int:
        return self.y.size

    @property
    def z(self) -> np.ndarray:
        """Concatenated coordinates ``x || y``."""
        return np.concatenate([self.x, self.y])

    def distance(self, other: "PopulationState") -> float:
        """l1 distance in R^{n+nu}."""
        return float(np.abs(self.x - other.x).sum() + np.abs(self.y - other.y).sum())

    def __repr__(self) -> str:
        fx = ", ".join(f"{v:.6g}" for v in self.x)
        fy = ", ".join(f"{v:.6g}" for v in self.y)
        return f"PopulationState(({fx} : {fy}))"


def validate_state(
    raw_x, raw_y, n: Optional[int] = None, nu: Optional[int] = None
) -> PopulationState:
    """Check lengths (when ``n``/``nu`` are given) and simplex membership."""
    x = np.asarray(raw_x, dtype=float).ravel()
    y = np.asarray(raw_y, dtype=float).ravel()
    if n is not None and x.size != n:
        raise LengthMismatch(f"female part has {x.size} entries, expected {n}")
    if nu is not None and y.size != nu:
        raise LengthMismatch(f"male part has {y.size} entries, expected {nu}")
    return PopulationState(x, y)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A direction ``(u, w)`` in the tangent space: both parts sum to zero."""

    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        u = _frozen(self.u).ravel()
        w = _frozen(self.w).ravel()
        for part, sex in ((u, "female"), (w, "male")):
            s = float(part.sum())
            if abs(s) > TAU_VALID:
                raise SumViolation(sex, s)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.u, self.w])


class Locus(enum.Enum):
    R1 = "R1"
    R0 = "R0"
    NEITHER = "neither"


def in_fixed_point_locus(z, n: int, nu: int) -> Locus:
    """Which of the hyperplanes ``sum x = sum y = 1`` / ``= 0`` contains ``z``.

    Fixed points of the operator can only lie in R1 or R0.
    """
    z = np.asarray(z, dtype=float).ravel()
    if z.size != n + nu:
        raise LengthMismatch(f"vector has {z.size} entries, expected {n + nu}")
    sx, sy = float(z[:n].sum()), float(z[n:].sum())
    if abs(sx - 1.0) <= TAU_VALID and abs(sy - 1.0) <= TAU_VALID:
        return Locus.R1
    if abs(sx) <= TAU_VALID and abs(sy) <= TAU_VALID:
        return Locus.R0
    return Locus.NEITHER


# --------------------------------------------------------------------------
# model files
#
#   dims <n> <nu>
#   f <i> <j> <p_0> ... <p_{n-1}>     (n*nu lines)
#   m <i> <j> <p_0> ... <p_{nu-1}>    (n*nu lines)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_float(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ModelFileError(lineno, f"not a decimal number: {tok!r}") from None
    if not math.isfinite(v):
        raise ModelFileError(lineno, f"non-finite probability {tok!r}")
    return v


def _parse_index(tok: str, bound: int, what: str, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ModelFileError(lineno, f"{what} index is not an integer: {tok!r}") from None
    if not 0 <= v < bound:
        raise ModelFileError(lineno, f"{what} index {v} out of range 0..{bound - 1}")
    return v


def parse_model_file(text: str) -> BisexualModel:
    """Parse the line-oriented model format; see :func:`serialize_model`."""
    lines = [(no, _strip(raw)) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, s) for no, s in lines if s]
    if not lines:
        raise ModelFileError(0, "empty model file")
    no, head = lines[0]
    tok = head.split()
    if len(tok) != 3 or tok[0] != "dims":
        raise ModelFileError(no, "first line must be 'dims <n> <nu>'")
    try:
        n, nu = int(tok[1]), int(tok[2])
    except ValueError:
        raise ModelFileError(no, "dimensions must be integers") from None
    if n < 1 or nu < 1:
        raise ModelFileError(no, "dimensions must be positive")

    female = np.full((n, nu, n), np.nan)
    male = np.full((n, nu, nu), np.nan)
    seen: dict[str, set] = {"f": set(), "m": set()}
    block = "f"
    for no, s in lines[1:]:
        tok = s.split()
        tag = tok[0]
        if tag not in ("f", "m"):
            raise ModelFileError(no, f"unknown row tag {tag!r}")
        if tag == "f" and block == "m":
            raise ModelFileError(no, "female row after the male block started")
        block = tag
        width = n if tag == "f" else nu
        if len(tok) != 3 + width:
            raise ModelFileError(
                no, f"{tag} row needs 2 indices and {width} probabilities, got {len(tok) - 1} fields"
            )
        i = _parse_index(tok[1], n, "female parent", no)
        j = _parse_index(tok[2], nu, "male parent", no)
        if (i, j) in seen[tag]:
            raise ModelFileError(no, f"duplicate {tag} row for parent pair ({i}, {j})")
        seen[tag].add((i, j))
        row = [_parse_float(t, no) for t in tok[3:]]
        (female if tag == "f" else male)[i, j, :] = row

    for tag in ("f", "m"):
        if len(seen[tag]) != n * nu:
            raise ModelFileError(
                0, f"expected {n * nu} '{tag}' rows, found {len(seen[tag])}"
            )
    return validate_tensors(female, male)


def serialize_model(model: BisexualModel, comments: Iterable[str] = ()) -> str:
    """Render ``model`` in the model-file format with round-trip exact floats."""
    out = [f"# {c}" for c in comments]
    out.append(f"dims {model.n} {model.nu}")
    for tag, tensor in (("f", model.female), ("m", model.male)):
        for i in range(model.n):
            for j in range(model.nu):
                vals = " ".join(repr(float(v)) for v in tensor[i, j])
                out.append(f"{tag} {i} {j} {vals}")
    return "\n".join(out) + "\n"


def load_model(path) -> BisexualModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model_file(fh.read())
