"""Braid closures as diagrams; the corpus generator uses this.

Braid strands run upward.  The positive generator ``+i`` crosses strand
position ``i`` under position ``i+1`` from bottom-left to top-right while the
other strand passes over from bottom-right to top-left; that orientation data
makes the crossing positive under the diagram module's sign rule.  Closure
arcs return each top position to the matching bottom position without
crossings.
"""

from __future__ import annotations

from .diagram import Crossing, FramedLinkDiagram


def braid_closure(word: list[int], n_strands: int) -> FramedLinkDiagram:
    """Close the braid given by ``word`` on ``n_strands`` strands.

    ``word`` entries are nonzero ints: ``+i`` / ``-i`` for the positive /
    negative crossing of positions i, i+1 (1-based, i < n_strands).
    """
    if n_strands < 1:
        raise ValueError("need at least one strand")
    next_label = 1

    def fresh() -> int:
        nonlocal next_label
        label = next_label
        next_label += 1
        return label

    start = [fresh() for _ in range(n_strands)]
    position = list(start)
    crossings: list[tuple[list[int], int]] = []
    for gen in word:
        i = abs(gen)
        if not (1 <= i < n_strands):
            raise ValueError(f"generator {gen} out of range for {n_strands} strands")
        a = position[i - 1]  # bottom-left
        b = position[i]  # bottom-right
        c = fresh()  # top-left
        d = fresh()  # top-right
        if gen > 0:
            # Under-strand a -> d; over-strand b -> c.  Counterclockwise from
            # the under-in (SW): [SW, SE, NE, NW] = [a, b, d, c], over enters
            # at slot 1.
            crossings.append(([a, b, d, c], 1))
        else:
            # Under-strand b -> c; over-strand a -> d.  Counterclockwise from
            # the under-in (SE): [SE, NE, NW, SW] = [b, d, c, a], over enters
            # at slot 3.
            crossings.append(([b, d, c, a], 3))
        position[i - 1] = c
        position[i] = d

    # Closure: identify each surviving top label with the start label of the
    # same position (the closure arcs carry no crossings).
    relabel = {}
    for top, bottom in zip(position, start):
        relabel[top] = bottom
    n_loops = 0
    for top, bottom in zip(position, start):
        if top == bottom:
            n_loops += 1  # strand with no crossings closes into a free circle

    def resolve(label: int) -> int:
        while label in relabel and relabel[label] != label:
            label = relabel[label]
        return label

    fixed = [
        Crossing(tuple(resolve(e) for e in ends), over_in) for ends, over_in in crossings
    ]
    diagram = FramedLinkDiagram.build(fixed)
    if n_loops:
        free = list(diagram.free_loops) + [1] * n_loops
        base = list(diagram.base_edges) + [None] * n_loops
        diagram = FramedLinkDiagram(
            diagram.crossings, diagram.n_components + n_loops, tuple(free), tuple(base)
        )
    return diagram
