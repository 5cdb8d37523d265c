"""Linear algebra over Z/p^M and over Z for finite quotient invariants.

Z/p^M is a chain ring, so every matrix has a unique Howell canonical
form: echelon rows with pivots p^v, entries above each pivot reduced
mod p^v, and the span closed under the annihilator rows p^(M-v)*row.
Membership, submodule equality, solving and kernels all reduce to it.

Invariant factors of a finite quotient W/V (V <= W <= (Z/p^M)^d) are
computed by lifting both to integer lattices containing p^M * Z^d and
taking the Smith normal form of V expressed in a lattice basis of W.
All arithmetic is exact (Python ints).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InternalInconsistency, InvalidArgument


def _vp(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class HowellForm:
    """Canonical Howell basis for a submodule of (Z/p^M)^width."""

    p: int
    M: int
    width: int
    rows: tuple[tuple[int, ...], ...]
    # one (column, valuation-of-pivot) pair per row, columns strictly increasing
    pivots: tuple[tuple[int, int], ...]
    # transform[k] expresses rows[k] over the original generators (optional)
    transform: tuple[tuple[int, ...], ...] | None = None
    # transforms of rows that reduced to zero: left-kernel generators
    kernel_transforms: tuple[tuple[int, ...], ...] = ()

    @property
    def modulus(self) -> int:
        return self.p**self.M

    def reduce(self, vec) -> tuple[tuple[int, ...], list]:
        """Canonical residual of vec against the basis plus the row
        coefficients used; membership holds iff the residual is zero."""
        N = self.modulus
        res = [v % N for v in vec]
        if len(res) != self.width:
            raise InvalidArgument(f"vector width {len(res)} != {self.width}")
        coeffs = [0] * len(self.rows)
        for k, (c, v) in enumerate(self.pivots):
            a = res[c]
            if a == 0:
                continue
            pv = self.p**v
            if a % pv:
                continue  # cannot clear this column; residual stays nonzero
            q = a // pv
            row = self.rows[k]
            for t in range(c, self.width):
                res[t] = (res[t] - q * row[t]) % N
            coeffs[k] = q
        return tuple(res), coeffs

    def contains(self, vec) -> bool:
        res, _ = self.reduce(vec)
        return not any(res)

    def contains_all(self, vecs) -> bool:
        return all(self.contains(v) for v in vecs)

    def __eq__(self, other):
        return (isinstance(other, HowellForm) and self.p == other.p
                and self.M == other.M and self.width == other.width
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.p, self.M, self.width, self.rows))


def howell_form(rows, width: int, p: int, M: int, track: bool = False) -> HowellForm:
    """Compute the Howell canonical form of the row span mod p^M."""
    N = p**M
    work = []
    trans = []
    nrows = 0
    for r in rows:
        r = [v % N for v in r]
        if len(r) != width:
            raise InvalidArgument("inconsistent row width")
        work.append(r)
        nrows += 1
    if track:
        trans = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def addmul(dst, src, q):
        for t in range(len(dst)):
            dst[t] = (dst[t] - q * src[t]) % N

    pivots = []
    r = 0
    for c in range(width):
        # pivot: first row at or below r whose entry at c has minimal valuation
        best, best_v = -1, M
        for idx in range(r, len(work)):
            a = work[idx][c]
            if a:
                v = _vp(a, p)
                if v < best_v:
                    best, best_v = idx, v
                    if v == 0:
                        break
        if best < 0:
            continue
        work[r], work[best] = work[best], work[r]
        if track:
            trans[r], trans[best] = trans[best], trans[r]
        v = best_v
        pv = p**v
        unit = work[r][c] // pv
        if unit != 1:
            inv = pow(unit, -1, N)
            work[r] = [(inv * t) % N for t in work[r]]
            if track:
                trans[r] = [(inv * t) % N for t in trans[r]]
        for idx in range(r + 1, len(work)):
            a = work[idx][c]
            if a:
                q = a // pv  # exact: the pivot has minimal valuation
                addmul(work[idx], work[r], q)
                if track:
                    addmul(trans[idx], trans[r], q)
        if v > 0:
            scale = p ** (M - v)
            work.append([(scale * t) % N for t in work[r]])
            if track:
                trans.append([(scale * t) % N for t in trans[r]])
        pivots.append((c, v))
        r += 1

    # reduce entries above each pivot below p^v
    for k, (c, v) in enumerate(pivots):
        pv = p**v
        for j in range(k):
            q = work[j][c] // pv
            if q:
                addmul(work[j], work[k], q)
                if track:
                    addmul(trans[j], trans[k], q)

    kernel = ()
    if track:
        kernel = tuple(tuple(trans[i]) for i in range(r, len(work))
                       if any(trans[i]))
    return HowellForm(
        p=p, M=M, width=width,
        rows=tuple(tuple(row) for row in work[:r]),
        pivots=tuple(pivots),
        transform=tuple(tuple(t) for t in trans[:r]) if track else None,
        kernel_transforms=kernel,
    )


def solve_membership(generator_rows, target, width: int, p: int, M: int):
    """Coefficients lam with sum(lam_i * gen_i) = target mod p^M, or None."""
    gens = list(generator_rows)
    if not gens:
        return [] if not any(v % p**M for v in target) else None
    hf = howell_form(gens, width, p, M, track=True)
    res, coeffs = hf.reduce(target)
    if any(res):
        return None
    N = p**M
    lam = [0] * len(gens)
    for k, q in enumerate(coeffs):
        if q:
            for t in range(len(gens)):
                lam[t] = (lam[t] + q * hf.transform[k][t]) % N
    return lam


def left_kernel(matrix_rows, width: int, p: int, M: int) -> HowellForm:
    """Canonical basis of {v : sum v_i * row_i = 0 mod p^M}."""
    rows = list(matrix_rows)
    m = len(rows)
    if m == 0:
        return howell_form([], 0, p, M)
    hf = howell_form(rows, width, p, M, track=True)
    return howell_form(list(hf.kernel_transforms), m, p, M)


def preimage_under_map(map_rows, target_rows, dim: int, width: int, p: int, M: int) -> HowellForm:
    """Canonical basis of {r in (Z/p^M)^dim : r.map in span(target_rows)}.

    map_rows[i] is the image of the i-th unit vector (dim rows of length
    width); target_rows span a submodule of (Z/p^M)^width.
    """
    stacked = [list(r) for r in map_rows] + [list(r) for r in target_rows]
    ker = left_kernel(stacked, width, p, M)
    projected = [row[:dim] for row in ker.rows]
    return howell_form(projected, dim, p, M)


# ---------------------------------------------------------------------------
# Integer lattice tools


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_basis(rows, d: int):
    """Row-echelon integer basis (HNF-style) of the lattice the rows span.

    Callers only pass full-rank lattices (they contain p^M * Z^d), so the
    result is d x d upper triangular with positive diagonal.
    """
    basis: list[list[int]] = []  # kept sorted by pivot column, one per column

    def pivot_col(v):
        for i, t in enumerate(v):
            if t:
                return i
        return None

    for vec in rows:
        v = list(vec)
        while True:
            c = pivot_col(v)
            if c is None:
                break
            slot = None
            for k, row in enumerate(basis):
                pc = pivot_col(row)
                if pc == c:
                    slot = k
                    break
                if pc > c:
                    break
            if slot is None:
                basis.append(v)
                basis.sort(key=lambda r: pivot_col(r))
                break
            row = basis[slot]
            a, b = row[c], v[c]
            if b % a == 0:
                q = b // a
                v = [vi - q * ri for vi, ri in zip(v, row)]
            else:
                g, s, t = _xgcd(a, b)
                new_row = [s * ri + t * vi for ri, vi in zip(row, v)]
                v = [(a // g) * vi - (b // g) * ri for ri, vi in zip(row, v)]
                basis[slot] = new_row

    for k, row in enumerate(basis):
        if row[pivot_col(row)] < 0:
            basis[k] = [-t for t in row]
    if len(basis) != d:
        raise InternalInconsistency(
            f"expected a full-rank rank-{d} lattice, got rank {len(basis)}")
    return basis


def solve_in_lattice(basis, vec):
    """Integer coefficients c with sum c_k basis_k = vec, for triangular basis."""
    v = list(vec)
    coeffs = []
    for row in basis:
        c = next(i for i, t in enumerate(row) if t)
        q, r = divmod(v[c], row[c])
        if r:
            raise InternalInconsistency("vector not in lattice")
        coeffs.append(q)
        if q:
            v = [vi - q * ri for vi, ri in zip(v, row)]
    if any(v):
        raise InternalInconsistency("vector not in lattice")
    return coeffs


def smith_diagonal(rows, ncols: int):
    """Diagonal of a Smith-style decomposition of an integer matrix.

    Only the multiset of diagonal entries is needed (they are p-powers in
    every call here, so the divisibility chain is just sorting).
    """
    D = [list(r) for r in rows]
    m, n = len(D), ncols

    def row_reduce(k):
        for i in range(k + 1, m):
            while D[i][k]:
                a, b = D[k][k], D[i][k]
                if a == 0:
                    D[k], D[i] = D[i], D[k]
                    continue
                q = b // a
                if q:
                    for j in range(k, n):
                        D[i][j] -= q * D[k][j]
                if D[i][k]:  # Euclid: remainder is strictly smaller, swap and repeat
                    D[k], D[i] = D[i], D[k]

    def col_reduce(k):
        for j in range(k + 1, n):
            while D[k][j]:
                a, b = D[k][k], D[k][j]
                if a == 0:
                    for i in range(k, m):
                        D[i][k], D[i][j] = D[i][j], D[i][k]
                    continue
                q = b // a
                if q:
                    for i in range(k, m):
                        D[i][j] -= q * D[i][k]
                if D[k][j]:
                    for i in range(k, m):
                        D[i][k], D[i][j] = D[i][j], D[i][k]

    for k in range(min(m, n)):
        # bring a nonzero entry to (k, k) if one exists in the remaining block
        if D[k][k] == 0:
            found = False
            for i in range(k, m):
                for j in range(k, n):
                    if D[i][j]:
                        D[k], D[i] = D[i], D[k]
                        for t in range(m):
                            D[t][k], D[t][j] = D[t][j], D[t][k]
                        found = True
                        break
                if found:
                    break
            if not found:
                break
        while True:
            row_reduce(k)
            if all(D[k][j] == 0 for j in range(k + 1, n)):
                break
            col_reduce(k)
            if all(D[i][k] == 0 for i in range(k + 1, m)):
                break
    return [abs(D[k][k]) for k in range(min(m, n))]


def quotient_invariant_factors(w_rows, v_rows, d: int, p: int, M: int):
    """Invariant factors of W/V for submodules V <= W of (Z/p^M)^d.

    Returned as the sorted list of nontrivial p-power orders.  Raises if
    V is not contained in W.
    """
    N = p**M
    unit_rows = [[N if i == j else 0 for j in range(d)] for i in range(d)]
    lattice_w = [[int(t) for t in r] for r in w_rows] + unit_rows
    basis = hermite_basis(lattice_w, d)
    rel = [solve_in_lattice(basis, [int(t) for t in r]) for r in v_rows]
    rel += [solve_in_lattice(basis, r) for r in unit_rows]
    diag = smith_diagonal(rel, d)
    factors = []
    for val in diag:
        if val in (0, 1):
            if val == 0:
                raise InternalInconsistency("quotient is not finite")
            continue
        v = _vp(val, p)
        if p**v != val:
            raise InternalInconsistency(f"non p-power invariant factor {val}")
        factors.append(val)
    return sorted(factors)
