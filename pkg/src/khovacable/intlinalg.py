"""Exact integer linear algebra: sparse matrices, Smith normal form, homology.

Everything runs over Python ints, so intermediate coefficient growth during
the Smith reduction can never overflow.  The reduction tracks the unimodular
row and column transforms so that ``U * M * V == S`` can be re-verified by
plain multiplication, and it pivots on the entry of smallest nonzero
magnitude to curb coefficient blow-up.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class IntMatrix:
    """A rows x cols integer matrix stored as sparse (row, col, value) data."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i},{j}) out of range for {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError(f"explicit zero stored at ({i},{j})")

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets) -> "IntMatrix":
        acc: dict[tuple[int, int], int] = {}
        for i, j, v in triplets:
            if v:
                key = (i, j)
                w = acc.get(key, 0) + v
                if w:
                    acc[key] = w
                elif key in acc:
                    del acc[key]
        return cls(rows, cols, acc)

    @classmethod
    def from_rows(cls, data: list[list[int]]) -> "IntMatrix":
        rows = len(data)
        cols = len(data[0]) if data else 0
        return cls.from_triplets(rows, cols, ((i, j, v) for i, row in enumerate(data) for j, v in enumerate(row)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, {})

    def to_dense(self) -> list[list[int]]:
        data = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            data[i][j] = v
        return data

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        rows_of_other: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            rows_of_other.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            for j, w in rows_of_other.get(k, ()):
                key = (i, j)
                s = acc.get(key, 0) + v * w
                if s:
                    acc[key] = s
                elif key in acc:
                    del acc[key]
        return IntMatrix(self.rows, other.cols, acc)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def diagonal(self) -> list[int]:
        return [self.entries.get((i, i), 0) for i in range(min(self.rows, self.cols))]

    def to_json_dict(self) -> dict:
        trips = sorted((i, j, v) for (i, j), v in self.entries.items())
        return {"rows": self.rows, "cols": self.cols, "triplets": [list(t) for t in trips]}


@dataclass(frozen=True)
class HomologySummary:
    """Free rank plus torsion orders (each >= 2, each dividing the next)."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for t in self.torsion:
            if t < 2:
                raise ValueError("torsion orders must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion orders must form a divisibility chain")

    def __str__(self) -> str:
        if self.rank == 0 and not self.torsion:
            return "0"
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts)


class SmithResult:
    """Smith normal form S = U @ M @ V with unimodular U, V.

    ``det_u`` and ``det_v`` are tracked through the elementary operations
    (each is +1 or -1), so unimodularity does not need a determinant
    recomputation; tests re-verify on samples via fraction-free elimination.
    """

    __slots__ = ("s", "u", "v", "det_u", "det_v")

    def __init__(self, s: IntMatrix, u: IntMatrix, v: IntMatrix, det_u: int, det_v: int):
        self.s = s
        self.u = u
        self.v = v
        self.det_u = det_u
        self.det_v = det_v

    def invariant_factors(self) -> list[int]:
        return [d for d in self.s.diagonal() if d]


def smith_normal_form(m: IntMatrix, check: bool = True) -> SmithResult:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns S diagonal with d_1 | d_2 | ... >= 0.  With ``check`` the result
    is re-verified by multiplying U @ M @ V.
    """
    rows, cols = m.rows, m.cols
    a = m.to_dense()
    u = IntMatrix.identity(rows).to_dense()
    v = IntMatrix.identity(cols).to_dense()
    det_u = 1
    det_v = 1

    def swap_rows(i1, i2):
        nonlocal det_u
        if i1 != i2:
            a[i1], a[i2] = a[i2], a[i1]
            u[i1], u[i2] = u[i2], u[i1]
            det_u = -det_u

    def swap_cols(j1, j2):
        nonlocal det_v
        if j1 != j2:
            for row in a:
                row[j1], row[j2] = row[j2], row[j1]
            for row in v:
                row[j1], row[j2] = row[j2], row[j1]
            det_v = -det_v

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        if q:
            asrc, adst = a[src], a[dst]
            for j in range(cols):
                if asrc[j]:
                    adst[j] += q * asrc[j]
            usrc, udst = u[src], u[dst]
            for j in range(rows):
                if usrc[j]:
                    udst[j] += q * usrc[j]

    def add_col(src, dst, q):
        if q:
            for row in a:
                if row[src]:
                    row[dst] += q * row[src]
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]

    def negate_row(i):
        nonlocal det_u
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        det_u = -det_u

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # Pivot: smallest nonzero magnitude in the trailing block.
        pivot = None
        best = None
        for i in range(t, rows):
            row = a[i]
            for j in range(t, cols):
                x = row[j]
                if x:
                    mag = abs(x)
                    if best is None or mag < best:
                        best = mag
                        pivot = (i, j)
                        if mag == 1:
                            break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # Clear column t below the pivot by nearest-integer quotients.
            dirty = False
            for i in range(t + 1, rows):
                x = a[i][t]
                if x:
                    p = a[t][t]
                    q = _nearest_quotient(x, p)
                    add_row(t, i, -q)
                    if a[i][t]:
                        # Remainder smaller than the pivot: promote it.
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                x = a[t][j]
                if x:
                    p = a[t][t]
                    q = _nearest_quotient(x, p)
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty and all(a[i][t] == 0 for i in range(t + 1, rows)) and all(
                a[t][j] == 0 for j in range(t + 1, cols)
            ):
                break
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    # Enforce the divisibility chain d_i | d_{i+1}.
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            d1, d2 = a[i][i], a[i + 1][i + 1]
            if d1 and d2 % d1:
                changed = True
                # Standard 2x2 fix: fold d2 into column i, then gcd-reduce the
                # block until it is diagonal again (pivot magnitude strictly
                # decreases on every swap, so this terminates).
                add_col(i + 1, i, 1)
                while a[i + 1][i] or a[i][i + 1]:
                    x = a[i + 1][i]
                    if x:
                        q = _nearest_quotient(x, a[i][i])
                        add_row(i, i + 1, -q)
                        if a[i + 1][i]:
                            swap_rows(i, i + 1)
                            continue
                    y = a[i][i + 1]
                    if y:
                        q = _nearest_quotient(y, a[i][i])
                        add_col(i, i + 1, -q)
                        if a[i][i + 1]:
                            swap_cols(i, i + 1)
                if a[i][i] < 0:
                    negate_row(i)
                if a[i + 1][i + 1] < 0:
                    negate_row(i + 1)

    s_mat = IntMatrix.from_triplets(rows, cols, ((i, i, a[i][i]) for i in range(limit)))
    u_mat = IntMatrix.from_triplets(rows, rows, ((i, j, u[i][j]) for i in range(rows) for j in range(rows)))
    v_mat = IntMatrix.from_triplets(cols, cols, ((i, j, v[i][j]) for i in range(cols) for j in range(cols)))
    result = SmithResult(s_mat, u_mat, v_mat, det_u, det_v)
    if check:
        if (u_mat @ m) @ v_mat != s_mat:
            raise AssertionError("Smith reduction failed re-verification U @ M @ V == S")
        diag = s_mat.diagonal()
        for d1, d2 in zip(diag, diag[1:]):
            if d2 and (d1 == 0 or d2 % d1):
                raise AssertionError(f"divisibility chain violated: {diag}")
    return result


def _nearest_quotient(x: int, p: int) -> int:
    """Quotient minimizing |x - q*p|; keeps remainders small during reduction."""
    q, r = divmod(x, p)
    if 2 * abs(r) > abs(p):
        q += 1 if p > 0 else -1
    return q


def rank(m: IntMatrix) -> int:
    """Rank over Q, via the number of nonzero Smith invariant factors."""
    return len(smith_normal_form(m, check=False).invariant_factors())


def rank_fraction_free(m: IntMatrix) -> int:
    """Rank over Q by Bareiss fraction-free Gaussian elimination.

    Independent of the Smith route; used as the cross-check oracle.
    """
    a = m.to_dense()
    rows, cols = m.rows, m.cols
    r = 0
    prev = 1
    for j in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i][j]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            for jj in range(j + 1, cols):
                a[i][jj] = (a[r][j] * a[i][jj] - a[i][j] * a[r][jj]) // prev
            a[i][j] = 0
        prev = a[r][j]
        r += 1
        if r == rows:
            break
    return r


def homology_at(d_out: IntMatrix, d_in: IntMatrix) -> HomologySummary:
    """Homology ker(d_out) / im(d_in) of a two-step complex of free groups.

    ``d_out`` maps the middle group outward (middle -> next, so its column
    count is the middle rank) and ``d_in`` maps into it (previous -> middle,
    so its row count is the middle rank).  Composition d_out @ d_in must be
    zero; a nonzero entry is reported as "not a complex".
    """
    if d_out.cols != d_in.rows:
        raise ValueError(
            f"middle-rank mismatch: d_out acts on {d_out.cols} generators, d_in hits {d_in.rows}"
        )
    comp = d_out @ d_in
    if not comp.is_zero():
        (i, j), v = next(iter(sorted(comp.entries.items())))
        raise ValueError(f"not a complex: (d_out @ d_in)[{i},{j}] = {v}")
    snf_in = smith_normal_form(d_in, check=False)
    factors = snf_in.invariant_factors()
    rank_in = len(factors)
    rank_out = rank(d_out)
    betti = d_out.cols - rank_out - rank_in
    torsion = tuple(d for d in factors if d > 1)
    return HomologySummary(betti, torsion)
