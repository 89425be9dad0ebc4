"""Kauffman bracket state sum and the (unnormalized) Jones polynomial.

This module is the ground-truth side of every cross-check: it never touches
chain complexes.  Conventions, pinned by the Euler-characteristic identity
with the homology side:

  * bracket: sum over all 2^c smoothings of A^(#A - #B) * delta^(#circles)
    with delta = -A^2 - A^(-2); the empty diagram has bracket 1, so a
    0-crossing unknot has bracket delta.
  * A-smoothing at a crossing with counterclockwise slots (s0..s3, under in
    at s0): reconnect (s1,s2) and (s3,s0).  Calibrated so that the
    A-smoothing of a positive kink splits off the kink circle.
  * jones: (-1)^w * A^(-3w) * bracket, then A^2 -> -q^(-1).  The 0-crossing
    unknot maps to q + q^(-1) and all exponents land on integers (an odd
    exponent after normalization raises, since it signals a convention bug).
"""

from __future__ import annotations

import math

from .diagram import FramedLinkDiagram
from .errors import DEFAULT_STATE_CAP, CapExceeded
from .laurent import LaurentPoly

# Slot pairs reconnected by each smoothing, counterclockwise slot labels.
A_PAIRING = ((1, 2), (3, 0))
B_PAIRING = ((0, 1), (2, 3))


def smoothing_circles(diagram: FramedLinkDiagram, mask: int) -> int:
    """Number of circles after smoothing; mask bit i set = B-smoothing at crossing i."""
    return len(smoothing_circle_classes(diagram, mask)) + sum(diagram.free_loops)


def smoothing_circle_classes(diagram: FramedLinkDiagram, mask: int) -> list[list[int]]:
    """Arc classes of the smoothed diagram (free loops excluded), sorted by min arc."""
    parent: dict[int, int] = {a: a for a in diagram.arcs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for ci, x in enumerate(diagram.crossings):
        pairing = B_PAIRING if (mask >> ci) & 1 else A_PAIRING
        for s1, s2 in pairing:
            union(x.ends[s1], x.ends[s2])
    classes: dict[int, list[int]] = {}
    for a in diagram.arcs:
        classes.setdefault(find(a), []).append(a)
    return sorted(classes.values(), key=min)


def bracket(diagram: FramedLinkDiagram, cap: int = DEFAULT_STATE_CAP) -> LaurentPoly:
    """Brute-force Kauffman bracket in the variable A."""
    c = diagram.n_crossings
    if 2**c > cap:
        raise CapExceeded(2**c, cap, f"bracket of a {c}-crossing diagram")
    delta = LaurentPoly({2: -1, -2: -1}, var="A")
    # Collect (A-exponent, circle-count) multiplicities, then expand once.
    weights: dict[tuple[int, int], int] = {}
    free = sum(diagram.free_loops)
    for mask in range(2**c):
        b = mask.bit_count()
        circles = len(smoothing_circle_classes(diagram, mask)) + free
        key = (c - 2 * b, circles)
        weights[key] = weights.get(key, 0) + 1
    total = LaurentPoly.zero("A")
    delta_powers: dict[int, LaurentPoly] = {0: LaurentPoly.one("A")}

    def delta_pow(n: int) -> LaurentPoly:
        if n not in delta_powers:
            delta_powers[n] = delta_pow(n - 1) * delta
        return delta_powers[n]

    for (exp, circles), count in weights.items():
        total = total + LaurentPoly.monomial(exp, count, "A") * delta_pow(circles)
    return total


def jones(diagram: FramedLinkDiagram, cap: int = DEFAULT_STATE_CAP) -> LaurentPoly:
    """Unnormalized Jones polynomial (unknot -> q + q^(-1))."""
    w = diagram.writhe()
    br = bracket(diagram, cap=cap)
    normalized = br.shifted(-3 * w) * (-1 if w % 2 else 1)
    out = LaurentPoly.zero("q")
    for e, coeff in normalized.coeffs.items():
        if e % 2:
            raise ArithmeticError(
                f"half-integer exponent: A-exponent {e} is odd after writhe normalization"
            )
        m = e // 2
        out = out + LaurentPoly.monomial(-m, -coeff if m % 2 else coeff, "q")
    return out


def binom_tuple(n: tuple[int, ...], k: tuple[int, ...]) -> int:
    """Product over components of C(n_i - k_i, k_i): the cabling coefficient.

    Also counts the pairings with k_i disjoint neighbor pairs on a line of
    n_i dots, which the pairing module reproduces by enumeration.
    """
    if len(n) != len(k):
        raise ValueError("color tuple and k-vector lengths differ")
    out = 1
    for ni, ki in zip(n, k):
        if ki < 0 or 2 * ki > ni:
            raise ValueError(f"k out of range: need 0 <= {ki} <= floor({ni}/2)")
        out *= math.comb(ni - ki, ki)
    return out


def colored_jones(
    diagram: FramedLinkDiagram, colors: tuple[int, ...], cap: int = DEFAULT_STATE_CAP
) -> LaurentPoly:
    """Colored Jones polynomial via the cabling formula.

    J_n(L) = sum over 0 <= k <= floor(n/2) of
             (-1)^{|k|} * prod C(n_i - k_i, k_i) * J(L^{n - 2k}),
    with every cable carrying alternating strand orientations.
    """
    from .cable import cable  # local import; cable does not import this module

    if len(colors) != diagram.n_components:
        raise ValueError(
            f"color tuple length {len(colors)} != component count {diagram.n_components}"
        )
    if any(c < 0 for c in colors):
        raise ValueError("colors must be non-negative")
    total = LaurentPoly.zero("q")
    for k in _k_range(colors):
        reduced = tuple(n - 2 * kk for n, kk in zip(colors, k))
        sub = cable(diagram, reduced).diagram
        term = jones(sub, cap=cap) * binom_tuple(colors, k) * (-1 if sum(k) % 2 else 1)
        total = total + term
    return total


def _k_range(colors: tuple[int, ...]):
    if not colors:
        yield ()
        return
    head, rest = colors[0], colors[1:]
    for k0 in range(head // 2 + 1):
        for tail in _k_range(rest):
            yield (k0, *tail)
