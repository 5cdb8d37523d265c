"""Bundled finite models: the regular truncated family plus engineered
fixtures that drive the Case 2 and Case 3 branches of the construction.

Every model here is the Z/p^M-span of monomials X^a Y^b / den inside a
truncated polynomial ring (optionally tensored with sigma, sigma^(p-1)=p),
so the structure constants are integral by construction and associativity
is inherited from the ambient ring.  The fixtures use divided monomials
(den > 1) to manufacture elements that a power of p pushes into an ideal
their unit multiples miss.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .errors import InvalidArgument
from .ringmodel import FiniteModel, model_from_dict

_MODEL_FILES = {
    "regular-p2": "regular_p2.json",
    "case2-p3": "case2_p3.json",
    "case3-p2": "case3_p2.json",
}


def _monomial_model_dict(p, M, monos, killed, z_expr, adjoin_sigma):
    """Structure constants for span{X^a Y^b / den} (tensor sigma if asked).

    monos: list of (name, (ax, ay), den); killed(ax, ay) says whether a
    monomial is annihilated by the ambient truncation.  Products must
    land on a killed monomial or on a basis monomial with integral
    coefficient, otherwise the span is not closed and we refuse.
    """
    N = p**M
    base = len(monos)
    index = {}
    for idx, (name, mono, den) in enumerate(monos):
        if mono in index:
            raise InvalidArgument(f"duplicate monomial {mono}")
        index[mono] = (idx, den)

    def mono_product(i, j):
        (_, (ax1, ay1), d1) = monos[i]
        (_, (ax2, ay2), d2) = monos[j]
        mono = (ax1 + ax2, ay1 + ay2)
        if killed(*mono):
            return None
        if mono not in index:
            raise InvalidArgument(f"basis not closed: {mono} escapes")
        idx, den = index[mono]
        q, r = divmod(den, d1 * d2)
        if r:
            raise InvalidArgument(f"non-integral structure constant at {mono}")
        return idx, q

    copies = 2 if adjoin_sigma else 1
    d = base * copies
    names = [name for name, _, _ in monos]
    if adjoin_sigma:
        names += [f"sigma*{name}" for name, _, _ in monos]

    mul = [[[0] * d for _ in range(d)] for _ in range(d)]
    for s1 in range(copies):
        for i in range(base):
            for s2 in range(copies):
                for j in range(base):
                    prod = mono_product(i, j)
                    if prod is None:
                        continue
                    idx, q = prod
                    s = s1 + s2
                    if s <= 1:
                        mul[s1 * base + i][s2 * base + j][s * base + idx] = q % N
                    else:  # sigma^2 = p
                        mul[s1 * base + i][s2 * base + j][idx] = (p * q) % N

    def vec_of(expr):
        v = [0] * d
        for name, coeff in expr.items():
            v[names.index(name)] = coeff % N
        return v

    one_idx = index[(0, 0)][0]
    elements = {
        "one": vec_of({names[one_idx]: 1}),
        "x": vec_of({"x": 1}),
        "y": vec_of({"y": 1}),
        "z": vec_of(z_expr),
    }
    if adjoin_sigma:
        elements["sigma"] = vec_of({f"sigma*{names[one_idx]}": 1})
    else:
        if p != 2:
            raise InvalidArgument("models for p > 2 need sigma adjoined")
        elements["sigma"] = vec_of({names[one_idx]: 2})
    return {
        "p": p,
        "precision": M,
        "basis": names,
        "mul": mul,
        "elements": elements,
    }


def regular_truncated_dict(p=2, M=6, A=8, B=8, z_expr=None) -> dict:
    """Truncated polynomial model (Z/p^M)[x,y]/(x^A, y^B), z = x + y."""
    monos = []
    for a in range(A):
        for b in range(B):
            if a == 0 and b == 0:
                name = "1"
            else:
                name = f"x{a}y{b}"
            monos.append((name, (a, b), 1))
    monos[monos.index(("x1y0", (1, 0), 1))] = ("x", (1, 0), 1)
    monos[monos.index(("x0y1", (0, 1), 1))] = ("y", (0, 1), 1)
    return _monomial_model_dict(
        p, M, monos,
        killed=lambda ax, ay: ax >= A or ay >= B,
        z_expr=z_expr or {"x": 1, "y": 1},
        adjoin_sigma=(p != 2),
    )


def case3_fixture_dict() -> dict:
    """p = 2 fixture whose second step classifies Case 3 with N_2 = 1.

    The span {1, X, Y, X^2/2, X^3/2, X^4/8} in (Z/16)[X,Y]/(X^5, Y^2, XY)
    with z = X^2/2: 2z = X*X lands in (x, y) but z does not, and the
    integrated element at i = 2 needs one extra power of 2 to reach
    (x^2, y^2).
    """
    monos = [
        ("1", (0, 0), 1),
        ("x", (1, 0), 1),
        ("y", (0, 1), 1),
        ("w", (2, 0), 2),
        ("t", (3, 0), 2),
        ("q", (4, 0), 8),
    ]
    return _monomial_model_dict(
        2, 4, monos,
        killed=lambda ax, ay: ax >= 5 or ay >= 2 or (ax >= 1 and ay >= 1),
        z_expr={"w": 1},
        adjoin_sigma=False,
    )


def case2_fixture_dict() -> dict:
    """p = 3 fixture (with sigma adjoined) whose second step is Case 2.

    The span {1, X, Y, X^2, Y^2, XY/3, X^2Y/3, XY^2/3, X^2Y^2/9} in
    (Z/3^5)[X,Y]/(X^3, Y^3) with z = XY/3: the integrated element at
    i = 2 misses (x^2, y^2) but xy*z closes the gap, exercising the
    history combination and the fractional exponents E_i carries.
    """
    monos = [
        ("1", (0, 0), 1),
        ("x", (1, 0), 1),
        ("y", (0, 1), 1),
        ("x2", (2, 0), 1),
        ("y2", (0, 2), 1),
        ("xi", (1, 1), 3),
        ("xxi", (2, 1), 3),
        ("yxi", (1, 2), 3),
        ("eta", (2, 2), 9),
    ]
    return _monomial_model_dict(
        3, 5, monos,
        killed=lambda ax, ay: ax >= 3 or ay >= 3,
        z_expr={"xi": 1},
        adjoin_sigma=True,
    )


_BUILDERS = {
    "regular-p2": regular_truncated_dict,
    "case2-p3": case2_fixture_dict,
    "case3-p2": case3_fixture_dict,
}

BUILTIN_MODEL_NAMES = tuple(sorted(_BUILDERS))


def builtin_model_dict(name: str) -> dict:
    if name not in _BUILDERS:
        raise InvalidArgument(
            f"unknown builtin model {name!r}; have {', '.join(BUILTIN_MODEL_NAMES)}")
    return _BUILDERS[name]()


@lru_cache(maxsize=None)
def builtin_model(name: str) -> FiniteModel:
    return model_from_dict(builtin_model_dict(name))


def model_json_text(name: str) -> str:
    return json.dumps(builtin_model_dict(name), indent=1, sort_keys=True) + "\n"


def write_builtin_models(directory) -> list:
    """Regenerate the bundled model files; returns the paths written."""
    import os

    written = []
    for name, fname in sorted(_MODEL_FILES.items()):
        path = os.path.join(str(directory), fname)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(model_json_text(name))
        written.append(path)
    return written


def builtin_model_file(name: str):
    """Path to the bundled JSON file for a builtin model name."""
    if name not in _MODEL_FILES:
        raise InvalidArgument(f"unknown builtin model {name!r}")
    return resources.files("heitmann").joinpath("models", _MODEL_FILES[name])
