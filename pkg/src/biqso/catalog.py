"""Built-in models.

``example1``  strict contraction (zeta = 4/7), unique fixed point (1/2, 1/2 : 1/2, 1/2).
``example2``  0/1 inheritance; the set x_1 = 0 consists of 2-periodic points.
``example3``  zeta = 2, yet every orbit converges to (1/3, 2/3 : 1/3, 2/3).
``uniform:n,nu``  constant operator, every row uniform.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .errors import UnknownBuiltin
from .model import BisexualModel, parse_model_file, validate_tensors

H = 0.5
A, B = 3 / 7, 4 / 7

# rows indexed [i][j] = offspring distribution of the pair (female i, male j)
_TABLES = {
    "example1": (
        [[[A, B], [H, H]], [[H, H], [B, A]]],
        [[[B, A], [H, H]], [[H, H], [A, B]]],
    ),
    # x1' = x1 y1, x2' = x1 y2 + x2, y1' = x2 y2, y2' = x1 + x2 y1
    "example2": (
        [[[1, 0], [0, 1]], [[0, 1], [0, 1]]],
        [[[0, 1], [0, 1]], [[0, 1], [1, 0]]],
    ),
    # x1' = x2 / 2, x2' = x1 + x2 / 2, and the same for y
    "example3": (
        [[[0, 1], [0, 1]], [[H, H], [H, H]]],
        [[[0, 1], [H, H]], [[0, 1], [H, H]]],
    ),
}

BUILTIN_NAMES = ("example1", "example2", "example3", "uniform:n,nu")


def uniform_model(n: int, nu: int) -> BisexualModel:
    female = np.full((n, nu, n), 1.0 / n)
    male = np.full((n, nu, nu), 1.0 / nu)
    return validate_tensors(female, male)


def builtin_model(name: str) -> BisexualModel:
    if name in _TABLES:
        return validate_tensors(*_TABLES[name])
    if name.startswith("uniform:"):
        try:
            n, nu = (int(v) for v in name[len("uniform:"):].split(","))
        except ValueError:
            raise UnknownBuiltin(f"malformed uniform model {name!r}; use uniform:n,nu") from None
        if n < 1 or nu < 1:
            raise UnknownBuiltin(f"uniform model needs positive dimensions, got {name!r}")
        return uniform_model(n, nu)
    raise UnknownBuiltin(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def bundled_model_text(name: str) -> str:
    """Text of the shipped ``<name>.qso`` model file."""
    try:
        return resources.files("biqso.data").joinpath(f"{name}.qso").read_text("utf-8")
    except FileNotFoundError:
        raise UnknownBuiltin(f"no bundled model file for {name!r}") from None


def bundled_model(name: str) -> BisexualModel:
    return parse_model_file(bundled_model_text(name))
