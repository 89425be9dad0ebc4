"""Neighbor-pairings on lines of dots, their graph, and the signed complex.

For a color tuple (n_1, ..., n_l), a pairing selects disjoint neighbor pairs
(t, t+1) on each line c of n_c dots.  Pairings graded by the total number of
pairs form a graph whose edges add one pair; with the right-and-above edge
signs the signed incidence matrices square to zero, which the complex builder
verifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .intlinalg import IntMatrix


@dataclass(frozen=True)
class Pairing:
    """Disjoint neighbor pairs per component; a pair is stored by its lower index t."""

    pairs: tuple[tuple[int, ...], ...]  # per component, sorted tuple of pair starts

    def __post_init__(self):
        for line in self.pairs:
            if tuple(sorted(line)) != line:
                raise ValueError("pair starts must be sorted")
            for a, b in zip(line, line[1:]):
                if b - a < 2:
                    raise ValueError(f"pairs ({a},{a+1}) and ({b},{b+1}) overlap")

    @property
    def k_vector(self) -> tuple[int, ...]:
        return tuple(len(line) for line in self.pairs)

    @property
    def size(self) -> int:
        return sum(len(line) for line in self.pairs)

    def paired_strands(self, component: int) -> set[int]:
        out: set[int] = set()
        for t in self.pairs[component]:
            out.add(t)
            out.add(t + 1)
        return out

    def validate_for(self, colors: tuple[int, ...]) -> None:
        if len(self.pairs) != len(colors):
            raise ValueError(f"pairing has {len(self.pairs)} lines, colors have {len(colors)}")
        for c, line in enumerate(self.pairs):
            for t in line:
                if not (1 <= t < colors[c]):
                    raise ValueError(
                        f"pair ({t},{t+1}) references strand index > n_{c} = {colors[c]}"
                    )

    def contains(self, other: "Pairing") -> bool:
        return all(set(o) <= set(s) for o, s in zip(other.pairs, self.pairs))

    def added_pair(self, smaller: "Pairing") -> tuple[int, int]:
        """(component, pair start) of the unique pair of self not in smaller."""
        diff = [
            (c, t)
            for c, (line_s, line_small) in enumerate(zip(self.pairs, smaller.pairs))
            for t in set(line_s) - set(line_small)
        ]
        if len(diff) != 1 or not self.contains(smaller):
            raise ValueError("not a cover relation in the pairing order")
        return diff[0]

    @classmethod
    def empty(cls, n_components: int) -> "Pairing":
        return cls(tuple(() for _ in range(n_components)))

    def with_pair(self, component: int, t: int) -> "Pairing":
        line = tuple(sorted(self.pairs[component] + (t,)))
        return Pairing(self.pairs[:component] + (line,) + self.pairs[component + 1 :])

    def to_json(self) -> list[list[int]]:
        return [list(line) for line in self.pairs]

    def __str__(self) -> str:
        body = "; ".join(
            ",".join(f"({t},{t+1})" for t in line) if line else "-" for line in self.pairs
        )
        return f"[{body}]"


def _line_pairings(n: int, k: int) -> list[tuple[int, ...]]:
    """All k disjoint neighbor-pair selections on a line of n dots, lex order."""
    out: list[tuple[int, ...]] = []

    def rec(start: int, left: int, acc: tuple[int, ...]):
        if left == 0:
            out.append(acc)
            return
        for t in range(start, n):  # pair (t, t+1) needs t+1 <= n
            rec(t + 2, left - 1, acc + (t,))

    rec(1, k, ())
    return out


def enumerate_pairings(colors: tuple[int, ...], k: tuple[int, ...]) -> list[Pairing]:
    """All pairings with exactly k_c pairs on line c, in lexicographic order."""
    if len(colors) != len(k):
        raise ValueError("color tuple and k-vector lengths differ")
    for n, kk in zip(colors, k):
        if kk < 0 or 2 * kk > n:
            raise ValueError(f"k out of range: need 0 <= {kk} <= floor({n}/2)")
    per_line = [_line_pairings(n, kk) for n, kk in zip(colors, k)]
    out: list[Pairing] = []

    def rec(c: int, acc: tuple[tuple[int, ...], ...]):
        if c == len(colors):
            out.append(Pairing(acc))
            return
        for line in per_line[c]:
            rec(c + 1, acc + (line,))

    rec(0, ())
    return out


def all_pairings_by_grade(colors: tuple[int, ...]) -> list[list[Pairing]]:
    """Pairings graded by total pair count; grade k lists are lex-ordered."""
    max_k = sum(n // 2 for n in colors)
    grades: list[list[Pairing]] = [[] for _ in range(max_k + 1)]
    for k in _k_vectors(colors):
        grades[sum(k)].extend(enumerate_pairings(colors, k))
    for level in grades:
        level.sort(key=lambda p: p.pairs)
    return grades


def _k_vectors(colors: tuple[int, ...]):
    if not colors:
        yield ()
        return
    head, rest = colors[0], colors[1:]
    for k0 in range(head // 2 + 1):
        for tail in _k_vectors(rest):
            yield (k0, *tail)


def pairing_sign(s: Pairing, s_prime: Pairing, above: str = "smaller") -> int:
    """Sign (-1)^(s, s') for the cover s < s' adding one pair.

    The exponent counts pairs of s' strictly to the right of the new pair on
    the same line (larger start index) plus all pairs on lines "above" it.
    Which line order counts as above is ambiguous on paper; both conventions
    are available and the d^2 = 0 test pins the choice.
    """
    if above not in ("smaller", "larger"):
        raise ValueError("above must be 'smaller' or 'larger'")
    c_new, t_new = s_prime.added_pair(s)
    count = sum(1 for t in s_prime.pairs[c_new] if t > t_new)
    for c, line in enumerate(s_prime.pairs):
        if (c < c_new) if above == "smaller" else (c > c_new):
            count += len(line)
    return -1 if count % 2 else 1


@dataclass(frozen=True)
class PairingGraph:
    """The graded pairing graph with signed incidence matrices."""

    colors: tuple[int, ...]
    grades: tuple[tuple[Pairing, ...], ...]
    differentials: tuple[IntMatrix, ...]  # grades[k] -> grades[k+1]

    def edges(self, k: int) -> list[tuple[int, int, int]]:
        """(source index, target index, sign) triples of grade-k edges."""
        d = self.differentials[k]
        return sorted((j, i, v) for (i, j), v in d.entries.items())

    def to_json_dict(self) -> dict:
        return {
            "colors": list(self.colors),
            "pairings": [[p.to_json() for p in level] for level in self.grades],
            "edges": [
                [[src, dst, sign] for src, dst, sign in self.edges(k)]
                for k in range(len(self.differentials))
            ],
        }


def pairing_complex(
    colors: tuple[int, ...], above: str = "smaller", total_bound: int = 12, verify: bool = True
) -> PairingGraph:
    """Build the signed pairing complex and verify d(k+1) . d(k) = 0."""
    if sum(colors) > total_bound:
        raise ValueError(f"sum of colors {sum(colors)} exceeds bound {total_bound}")
    grades = all_pairings_by_grade(colors)
    diffs: list[IntMatrix] = []
    for k in range(len(grades) - 1):
        lower, upper = grades[k], grades[k + 1]
        index_upper = {p.pairs: i for i, p in enumerate(upper)}
        trips = []
        for j, s in enumerate(lower):
            for c, n in enumerate(colors):
                used = s.paired_strands(c)
                for t in range(1, n):
                    if t not in used and t + 1 not in used:
                        s_prime = s.with_pair(c, t)
                        trips.append(
                            (index_upper[s_prime.pairs], j, pairing_sign(s, s_prime, above))
                        )
        diffs.append(IntMatrix.from_triplets(len(upper), len(lower), trips))
    graph = PairingGraph(tuple(colors), tuple(tuple(g) for g in grades), tuple(diffs))
    if verify:
        for k in range(len(diffs) - 1):
            comp = diffs[k + 1] @ diffs[k]
            if not comp.is_zero():
                (i, j), v = next(iter(sorted(comp.entries.items())))
                raise AssertionError(
                    f"pairing d^2 != 0 at grade {k}: entry ({i},{j}) = {v}; "
                    f"witness 2-face {graph.grades[k][j]} -> {graph.grades[k+2][i]}"
                )
    return graph
