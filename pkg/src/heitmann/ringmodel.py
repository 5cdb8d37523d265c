"""Finite precision models of the ambient ring.

A FiniteModel is a finite-rank commutative algebra over Z/p^M given by
structure constants, with distinguished elements 1, x, y, z and sigma
(sigma^(p-1) = p), standing in for the infinite mixed-characteristic
domain.  Everything the construction needs — ideal membership with
cofactors, colon modules J_i = {r : p^N r in (x^i, y^i)}, the maps
between their quotients Q_i, and degree-1 Koszul homology — reduces to
the Howell-form linear algebra in linalg.

p is nilpotent here, so colon/Koszul statements take the p-exponent N
explicitly and each report carries the effective precision at which it
was decided.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InternalInconsistency,
    InvalidArgument,
    ModelAxiomError,
    ModelFormatError,
    PrecisionExhausted,
)
from .linalg import (
    HowellForm,
    howell_form,
    left_kernel,
    preimage_under_map,
    quotient_invariant_factors,
    solve_membership,
)
from .padic import TauRational, check_prime

# structure-constant tensors switch to a pure-python path past this rank
_NUMPY_RANK_LIMIT = 80


class ModelElement:
    """Coefficient vector over Z/p^M, multiplied via the model's table."""

    __slots__ = ("model", "coeffs")

    def __init__(self, model: "FiniteModel", coeffs):
        N = model.modulus
        self.model = model
        self.coeffs = tuple(int(c) % N for c in coeffs)
        if len(self.coeffs) != model.rank:
            raise InvalidArgument(
                f"element length {len(self.coeffs)} != rank {model.rank}")

    def _same(self, other):
        if not isinstance(other, ModelElement) or other.model is not self.model:
            raise InvalidArgument("elements belong to different models")

    def __add__(self, other):
        self._same(other)
        return ModelElement(self.model,
                            (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._same(other)
        return ModelElement(self.model,
                            (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return ModelElement(self.model, (-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return ModelElement(self.model, (other * a for a in self.coeffs))
        self._same(other)
        return ModelElement(self.model,
                            self.model.mul_vec(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidArgument("negative powers are not defined")
        acc = self.model.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, ModelElement) and other.model is self.model
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ModelElement{self.coeffs}"


class FiniteModel:
    """Commutative algebra over Z/p^M with validated structure constants."""

    def __init__(self, p: int, M: int, basis, mul, elements, validate: bool = True):
        check_prime(p)
        if M < 1:
            raise ModelFormatError(f"precision M must be >= 1, got {M}")
        self.p = p
        self.M = M
        self.modulus = p**M
        self.basis = tuple(str(b) for b in basis)
        self.rank = len(self.basis)
        if self.rank == 0:
            raise ModelFormatError("empty basis")
        N = self.modulus
        d = self.rank
        try:
            tab = np.asarray(mul, dtype=np.int64)
        except (ValueError, OverflowError) as exc:
            raise ModelFormatError(f"mul table is not a clean integer cube: {exc}") from exc
        if tab.shape != (d, d, d):
            raise ModelFormatError(
                f"mul table must be rank x rank x rank = {(d, d, d)}, got {tab.shape}")
        tab = tab % N
        tab.flags.writeable = False
        self._tab = tab
        self._mul_tuples = None

        self._np_tab = None
        if d <= _NUMPY_RANK_LIMIT and d * d * (N - 1) ** 3 < 2**62:
            self._np_tab = tab.reshape(d * d, d)

        required = ("one", "x", "y", "z", "sigma")
        for name in required:
            if name not in elements:
                raise ModelFormatError(f"missing distinguished element {name!r}")
        self.elements = {
            name: ModelElement(self, vec) for name, vec in elements.items()
        }
        if validate:
            self.validate()

    @property
    def mul(self):
        """Structure constants as nested tuples (built lazily)."""
        if self._mul_tuples is None:
            self._mul_tuples = tuple(
                tuple(tuple(int(v) for v in vec) for vec in row)
                for row in self._tab)
        return self._mul_tuples

    # -- distinguished elements ------------------------------------------
    @property
    def one(self) -> ModelElement:
        return self.elements["one"]

    @property
    def x(self) -> ModelElement:
        return self.elements["x"]

    @property
    def y(self) -> ModelElement:
        return self.elements["y"]

    @property
    def z(self) -> ModelElement:
        return self.elements["z"]

    @property
    def sigma(self) -> ModelElement:
        return self.elements["sigma"]

    def zero(self) -> ModelElement:
        return ModelElement(self, (0,) * self.rank)

    def element(self, coeffs) -> ModelElement:
        return ModelElement(self, coeffs)

    def basis_element(self, i: int) -> ModelElement:
        return ModelElement(self, tuple(1 if j == i else 0 for j in range(self.rank)))

    def scalar(self, c: int) -> ModelElement:
        return self.one * c

    # -- arithmetic -------------------------------------------------------
    def mul_vec(self, u, v):
        N = self.modulus
        if self._np_tab is not None:
            a = np.asarray(u, dtype=np.int64)
            b = np.asarray(v, dtype=np.int64)
            w = (np.outer(a, b).reshape(-1) @ self._np_tab) % N
            return tuple(int(t) for t in w)
        d = self.rank
        out = [0] * d
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.mul[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                tv = row[j]
                for t in range(d):
                    if tv[t]:
                        out[t] = (out[t] + c * tv[t]) % N
        return tuple(out)

    def sigma_power(self, k: int) -> ModelElement:
        if k < 0:
            raise InvalidArgument("sigma powers need k >= 0")
        return self.sigma**k

    # -- validation -------------------------------------------------------
    def validate(self):
        N, d = self.modulus, self.rank
        tab = self._tab
        if not np.array_equal(tab, tab.transpose(1, 0, 2)):
            i, j = np.argwhere(
                (tab != tab.transpose(1, 0, 2)).any(axis=2))[0]
            raise ModelAxiomError(
                f"multiplication not commutative at basis pair "
                f"({self.basis[i]}, {self.basis[j]})",
                witness=(int(i), int(j)))
        one = np.array(self.one.coeffs, dtype=np.int64)
        ident = np.einsum("j,jik->ik", one, tab) % N
        expect = np.eye(d, dtype=np.int64)
        if not np.array_equal(ident, expect):
            i = int(np.argwhere((ident != expect).any(axis=1))[0][0])
            raise ModelAxiomError(
                f"distinguished one does not act as identity on {self.basis[i]}",
                witness=(int(i),))
        if d <= _NUMPY_RANK_LIMIT and d * (N - 1) ** 2 < 2**62:
            if d * (N - 1) ** 2 < 2**52:
                # exact in float64, and BLAS is much faster than int matmul
                tabw = tab.astype(np.float64)
            else:
                tabw = tab
            flat = tabw.reshape(d * d, d)
            # left[(i,j),(k,l)] = sum_t T[i,j,t] T[t,k,l] = coeffs of (e_i e_j) e_k
            left = np.asarray(flat @ tabw.reshape(d, d * d)).astype(np.int64) % N
            # right[(j,k),(i,l)] = sum_t T[j,k,t] T[i,t,l] = coeffs of e_i (e_j e_k)
            right = np.asarray(
                flat @ tabw.transpose(1, 0, 2).reshape(d, d * d)).astype(np.int64) % N
            lhs = left.reshape(d, d, d, d)              # [i, j, k, l]
            rhs = right.reshape(d, d, d, d)             # [j, k, i, l]
            if not np.array_equal(lhs, rhs.transpose(2, 0, 1, 3)):
                bad = np.argwhere(lhs != rhs.transpose(2, 0, 1, 3))[0]
                i, j, k = (int(v) for v in bad[:3])
                raise ModelAxiomError(
                    f"multiplication not associative on basis triple "
                    f"({self.basis[i]}, {self.basis[j]}, {self.basis[k]})",
                    witness=(i, j, k))
        else:
            for i in range(d):
                for j in range(d):
                    ij = self.mul[i][j]
                    for k in range(d):
                        lhs = self.mul_vec(ij, self.basis_element(k).coeffs)
                        rhs = self.mul_vec(self.basis_element(i).coeffs,
                                           self.mul[j][k])
                        if lhs != rhs:
                            raise ModelAxiomError(
                                f"multiplication not associative on basis triple "
                                f"({self.basis[i]}, {self.basis[j]}, {self.basis[k]})",
                                witness=(i, j, k))
        sig = self.sigma ** (self.p - 1)
        if sig != self.scalar(self.p):
            raise ModelAxiomError(
                f"sigma^(p-1) != p: got {sig.coeffs}", witness=("sigma",))

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "precision": self.M,
            "basis": list(self.basis),
            "mul": [[list(vec) for vec in row] for row in self.mul],
            "elements": {k: list(v.coeffs) for k, v in self.elements.items()},
        }

    def describe(self) -> dict:
        return {"p": self.p, "precision": self.M, "rank": self.rank}


def model_from_dict(obj: dict, validate: bool = True) -> FiniteModel:
    try:
        return FiniteModel(
            p=int(obj["p"]),
            M=int(obj["precision"]),
            basis=obj["basis"],
            mul=obj["mul"],
            elements=obj["elements"],
            validate=validate,
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"malformed model object: {exc}") from exc


def load_model(text: str, validate: bool = True) -> FiniteModel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ModelFormatError("model file must contain a JSON object")
    return model_from_dict(obj, validate=validate)


def load_model_file(path, validate: bool = True) -> FiniteModel:
    with open(path, "r", encoding="utf-8") as fh:
        return load_model(fh.read(), validate=validate)


# ---------------------------------------------------------------------------
# Formal elements: p^exponent * base with TauRational exponents


@dataclass(frozen=True)
class FormalElement:
    """A model element with a formal power of p attached.

    Stands for p^exponent * base where the exponent may be negative or
    have denominator p-1; the model itself cannot represent those, so
    equality is only meaningful after realization.
    """

    base: ModelElement
    exponent: TauRational

    @classmethod
    def of(cls, base: ModelElement, exponent=0) -> "FormalElement":
        p = base.model.p
        if isinstance(exponent, int):
            exponent = TauRational(exponent * (p - 1), p)
        return cls(base, exponent)

    @classmethod
    def zero(cls, model: FiniteModel) -> "FormalElement":
        return cls.of(model.zero(), 0)

    def is_zero_base(self) -> bool:
        return self.base.is_zero()

    def shifted(self, delta) -> "FormalElement":
        return FormalElement(self.base, self.exponent + delta)

    def scaled(self, c) -> "FormalElement":
        return FormalElement(self.base * c, self.exponent)

    def realize(self) -> ModelElement:
        """Multiply out the p-power: base * sigma^((p-1) * exponent)."""
        if self.base.is_zero():
            return self.base
        if self.exponent < 0:
            raise InvalidArgument(
                f"cannot realize negative exponent {self.exponent}")
        return self.base * self.base.model.sigma_power(self.exponent.num)

    def realize_shifted(self, extra: int) -> ModelElement:
        """Realize p^extra * self (clearing denominators by p^extra)."""
        return self.shifted(extra).realize()

    def realized_equals(self, other: "FormalElement") -> bool:
        return self.realize() == other.realize()

    def to_json_obj(self) -> dict:
        return {"exponent": str(self.exponent), "base": list(self.base.coeffs)}


def formal_sum(terms, model: FiniteModel) -> FormalElement:
    """Sum of formal elements at the minimum exponent among nonzero terms.

    The minimum is a sound lower bound for the valuation ledger: shifting
    every term down to it only multiplies by nonnegative sigma powers.
    """
    live = [t for t in terms if not t.is_zero_base()]
    if not live:
        return FormalElement.zero(model)
    e_min = live[0].exponent
    for t in live[1:]:
        if t.exponent < e_min:
            e_min = t.exponent
    acc = model.zero()
    for t in live:
        shift = t.exponent - e_min
        acc = acc + t.base * model.sigma_power(shift.num)
    return FormalElement(acc, e_min)


# ---------------------------------------------------------------------------
# Submodules and ideals


@dataclass(frozen=True)
class SubmoduleBasis:
    """Canonical Howell basis of a submodule, tied to its model."""

    model: FiniteModel
    howell: HowellForm

    @property
    def rows(self):
        return self.howell.rows

    def generators(self):
        return [ModelElement(self.model, row) for row in self.rows]

    def contains(self, elem: ModelElement) -> bool:
        return self.howell.contains(elem.coeffs)

    def contains_submodule(self, other: "SubmoduleBasis") -> bool:
        return all(self.howell.contains(row) for row in other.rows)

    def __eq__(self, other):
        return (isinstance(other, SubmoduleBasis)
                and self.model is other.model and self.howell == other.howell)

    def __hash__(self):
        return hash(self.howell)

    def to_json_obj(self) -> list:
        return [list(r) for r in self.rows]


def canonical_form(model: FiniteModel, generators) -> SubmoduleBasis:
    """Canonical basis of the Z/p^M-span of the given elements."""
    rows = [g.coeffs for g in generators]
    return SubmoduleBasis(model, howell_form(rows, model.rank, model.p, model.M))


def ideal_rows(model: FiniteModel, generators):
    """Spanning rows of the ideal: every generator times every basis element."""
    rows = []
    for g in generators:
        for b in range(model.rank):
            rows.append(model.mul_vec(g.coeffs, model.basis_element(b).coeffs))
    return rows


def ideal_basis(model: FiniteModel, generators) -> SubmoduleBasis:
    rows = ideal_rows(model, generators)
    return SubmoduleBasis(model, howell_form(rows, model.rank, model.p, model.M))


def ideal_membership(model: FiniteModel, u: ModelElement, generators):
    """Cofactors c_g with u = sum c_g * g, or None if u is outside.

    The ideal is treated as the submodule spanned by generator * basis
    products, so the returned cofactors are genuine model elements and
    reconstruction is exact.
    """
    gens = list(generators)
    if not gens:
        return [] if u.is_zero() else None
    rows = ideal_rows(model, gens)
    lam = solve_membership(rows, u.coeffs, model.rank, model.p, model.M)
    if lam is None:
        return None
    d = model.rank
    cofactors = []
    for gi in range(len(gens)):
        cofactors.append(ModelElement(model, lam[gi * d:(gi + 1) * d]))
    recon = model.zero()
    for c, g in zip(cofactors, gens):
        recon = recon + c * g
    if recon != u:
        raise InternalInconsistency("membership cofactors failed to reconstruct")
    return cofactors


def ideal_contains(model: FiniteModel, u: ModelElement, generators) -> bool:
    gens = list(generators)
    if not gens:
        return u.is_zero()
    return ideal_basis(model, gens).contains(u)


# ---------------------------------------------------------------------------
# Colon modules, stabilization, Koszul


def _power_ideal_rows(model: FiniteModel, i: int):
    xi = model.x**i
    yi = model.y**i
    return ideal_rows(model, [xi, yi]), xi, yi


def _annihilator_rows(model: FiniteModel, N: int):
    """Rows spanning {r : p^N r = 0} = p^(M-N) * (Z/p^M)^d."""
    scale = model.p ** (model.M - min(N, model.M))
    return [[scale if j == i else 0 for j in range(model.rank)]
            for i in range(model.rank)]


@dataclass
class ColonModule:
    """J = {r : p^N r in (x^i, y^i)} plus the invariants of Q = J/(x^i,y^i)."""

    model: FiniteModel
    N: int
    i: int
    J: SubmoduleBasis
    ideal: SubmoduleBasis
    invariant_factors: list
    artifact_free_invariant_factors: list

    @property
    def effective_precision(self) -> int:
        return self.model.M - self.N

    def to_json_obj(self) -> dict:
        return {
            "N": self.N,
            "i": self.i,
            "J_basis": self.J.to_json_obj(),
            "invariant_factors": self.invariant_factors,
            "artifact_free_invariant_factors": self.artifact_free_invariant_factors,
            "effective_precision": self.effective_precision,
            "precision": self.model.M,
        }


def colon_module(model: FiniteModel, N: int, i: int) -> ColonModule:
    """Compute J_i = {r : p^N r in (x^i, y^i)} and Q_i = J_i/(x^i, y^i).

    Q_i is described by its invariant factors twice: raw, and after
    quotienting out the p^N-annihilator classes the finite precision
    manufactures (elements killed by p^N outright).
    """
    if N < 1 or i < 1:
        raise InvalidArgument("colon_module needs N >= 1 and i >= 1")
    if N >= model.M:
        raise PrecisionExhausted(
            f"N={N} >= M={model.M}: p^N r in (x^i,y^i) is vacuous at this precision")
    d, p, M = model.rank, model.p, model.M
    ideal_rs, _, _ = _power_ideal_rows(model, i)
    pN = p**N % model.modulus
    map_rows = [[pN if j == t else 0 for j in range(d)] for t in range(d)]
    J = preimage_under_map(map_rows, ideal_rs, d, d, p, M)
    factors = quotient_invariant_factors(J.rows, ideal_rs, d, p, M)
    ann = _annihilator_rows(model, N)
    af = quotient_invariant_factors(J.rows, ideal_rs + ann, d, p, M)
    return ColonModule(
        model=model, N=N, i=i,
        J=SubmoduleBasis(model, J),
        ideal=SubmoduleBasis(model, howell_form(ideal_rs, d, p, M)),
        invariant_factors=factors,
        artifact_free_invariant_factors=af,
    )


@dataclass
class StabilizationReport:
    """Verdict on Q_n -> Q_k induced by multiplication by (xy)^(k-n)."""

    N: int
    n: int
    k: int
    injective: bool
    surjective: bool
    q_n_factors: list
    q_k_factors: list
    effective_precision: int

    def to_json_obj(self) -> dict:
        return {
            "N": self.N, "n": self.n, "k": self.k,
            "injective": self.injective, "surjective": self.surjective,
            "Q_n_invariant_factors": self.q_n_factors,
            "Q_k_invariant_factors": self.q_k_factors,
            "effective_precision": self.effective_precision,
        }


def stabilization_check(model: FiniteModel, N: int, n: int, k: int) -> StabilizationReport:
    """Test injectivity/surjectivity of Q_n -> Q_k under x^(k-n) y^(k-n)."""
    if n > k:
        raise InvalidArgument("stabilization_check needs n <= k")
    d, p, M = model.rank, model.p, model.M
    cn = colon_module(model, N, n)
    ck = colon_module(model, N, k)
    mult = (model.x ** (k - n)) * (model.y ** (k - n))

    image_rows = [model.mul_vec(row, mult.coeffs) for row in cn.J.rows]
    for row in image_rows:
        if not ck.J.howell.contains(row):
            raise InternalInconsistency("map does not land in J_k")
    surj_basis = howell_form(image_rows + list(ck.ideal.rows), d, p, M)
    surjective = surj_basis == ck.J.howell

    # kernel: mu with (mu . J_n-rows) * mult in (x^k, y^k); injective iff
    # every such element already lies in (x^n, y^n)
    jn_rows = list(cn.J.rows)
    injective = True
    if jn_rows:
        mapped = [model.mul_vec(row, mult.coeffs) for row in jn_rows]
        ker = preimage_under_map(mapped, list(ck.ideal.rows), len(jn_rows), d, p, M)
        for mu in ker.rows:
            vec = [0] * d
            Nmod = model.modulus
            for c, row in zip(mu, jn_rows):
                if c:
                    for t in range(d):
                        vec[t] = (vec[t] + c * row[t]) % Nmod
            if not cn.ideal.howell.contains(vec):
                injective = False
                break
    return StabilizationReport(
        N=N, n=n, k=k, injective=injective, surjective=surjective,
        q_n_factors=cn.invariant_factors, q_k_factors=ck.invariant_factors,
        effective_precision=min(cn.effective_precision, ck.effective_precision),
    )


def koszul_h1(model: FiniteModel, N: int):
    """Invariant factors of H_1 of the Koszul complex on (p^N, x, y)."""
    if N < 1:
        raise InvalidArgument("koszul_h1 needs N >= 1")
    d, p, M = model.rank, model.p, model.M
    w = [model.scalar(p**N % model.modulus), model.x, model.y]

    # d1: (Z/p^M)^(3d) -> (Z/p^M)^d, unit vector (slot s, basis b) -> e_b * w_s
    d1_rows = []
    for s in range(3):
        for b in range(d):
            d1_rows.append(model.mul_vec(model.basis_element(b).coeffs,
                                         w[s].coeffs))
    kernel = left_kernel(d1_rows, d, p, M)

    # d2 on pairs (s, t): e_b f_st -> (e_b w_s) f_t - (e_b w_t) f_s
    pairs = [(0, 1), (0, 2), (1, 2)]
    d2_rows = []
    for (s, t) in pairs:
        for b in range(d):
            row = [0] * (3 * d)
            ws = model.mul_vec(model.basis_element(b).coeffs, w[s].coeffs)
            wt = model.mul_vec(model.basis_element(b).coeffs, w[t].coeffs)
            for j in range(d):
                row[t * d + j] = ws[j]
                row[s * d + j] = (-wt[j]) % model.modulus
            d2_rows.append(row)
    return quotient_invariant_factors(kernel.rows, d2_rows, 3 * d, p, M)


@dataclass
class KoszulReport:
    N: int
    h1_invariant_factors: list
    colon_invariant_factors: list
    match: bool
    effective_precision: int

    def to_json_obj(self) -> dict:
        return {
            "N": self.N,
            "h1_invariant_factors": self.h1_invariant_factors,
            "colon_invariant_factors": self.colon_invariant_factors,
            "match": self.match,
            "effective_precision": self.effective_precision,
        }


def koszul_report(model: FiniteModel, N: int) -> KoszulReport:
    """Compare H_1 of the Koszul complex with Q_1 = J_1/(x, y).

    For N >= M the colon condition degenerates (p^N = 0), and Q_1 is
    computed with the same degenerate semantics: J_1 is everything.
    """
    h1 = koszul_h1(model, N)
    d, p, M = model.rank, model.p, model.M
    if N < M:
        colon = colon_module(model, N, 1).invariant_factors
    else:
        ideal_rs, _, _ = _power_ideal_rows(model, 1)
        full = [[1 if j == i else 0 for j in range(d)] for i in range(d)]
        colon = quotient_invariant_factors(full, ideal_rs, d, p, M)
    return KoszulReport(
        N=N, h1_invariant_factors=h1, colon_invariant_factors=colon,
        match=h1 == colon, effective_precision=max(M - N, 0),
    )
