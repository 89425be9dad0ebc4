"""Cables of framed diagrams and their pairing subcables.

Blackboard framing: each arc of the source becomes n parallel copies and each
crossing an n x m grid of crossings with over/under inherited.  Strand t of a
component runs in the original direction for odd t and reversed for even t;
strand 1 is the leftmost parallel copy relative to the original orientation.

Every cable-level object carries stable "full cable" ids so that deleting
strands (for the subcable D^s of a pairing) keeps crossings identifiable and
records each surviving arc as the chain of full-cable arcs it absorbed.  The
annulus chain maps lean on exactly this bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Crossing, FramedLinkDiagram
from .pairing import Pairing

# Compass bookkeeping for the local frame of a source crossing: the under
# strand enters from the south and the counterclockwise slot order is
# S, E, N, W.
_CCW_FROM = {
    "S": ("S", "E", "N", "W"),
    "N": ("N", "W", "S", "E"),
}


def _orient(t: int) -> int:
    """Strand orientation factor: original direction for odd strand index."""
    return 1 if t % 2 == 1 else -1


class FullCableInfo:
    """Id tables for the full cable of a source diagram.

    Arc keys:
      ("copy", a, t)      copy t of source arc a
      ("u", X, c, w)      under-column c of grid X, between row positions w, w+1
      ("o", X, w, c)      over-row at position w of grid X, between columns c, c+1
    Crossing key: (X, t_under, r_over) by strand indices.
    """

    __slots__ = (
        "source",
        "colors",
        "strand_order",
        "crossing_id",
        "crossing_origin",
        "crossing_strands",
        "crossing_record",
        "arc_id",
        "arc_key",
        "arc_strand",
        "strand_cycle",
        "strands",
    )

    def __init__(
        self, source: FramedLinkDiagram, colors: tuple[int, ...], strand_order: str = "leftmost"
    ):
        if len(colors) != source.n_components:
            raise ValueError(
                f"color-tuple length {len(colors)} != component count {source.n_components}"
            )
        if any(n < 1 for n in colors):
            raise ValueError("FullCableInfo needs positive colors; zeros are handled by deletion")
        if strand_order not in ("leftmost", "rightmost"):
            raise ValueError("strand_order must be 'leftmost' or 'rightmost'")
        self.source = source
        self.colors = tuple(colors)
        self.strand_order = strand_order

        comp_of = source.arc_component
        self.crossing_id: dict[tuple[int, int, int], int] = {}
        self.crossing_origin: list[tuple[int, int, int]] = []
        self.crossing_strands: list[tuple[tuple[int, int], tuple[int, int]]] = []
        self.arc_id: dict[tuple, int] = {}
        self.arc_key: list[tuple] = []
        self.arc_strand: list[tuple[int, int]] = []

        def arc(key: tuple, strand: tuple[int, int]) -> int:
            if key in self.arc_id:
                return self.arc_id[key]
            i = len(self.arc_key)
            self.arc_id[key] = i
            self.arc_key.append(key)
            self.arc_strand.append(strand)
            return i

        # Enumerate grid crossings in lex order (X, t, r).
        for xi, x in enumerate(source.crossings):
            cu = comp_of[x.ends[0]]
            cv = comp_of[x.ends[x.over_in]]
            for t in range(1, colors[cu] + 1):
                for r in range(1, colors[cv] + 1):
                    self.crossing_id[(xi, t, r)] = len(self.crossing_origin)
                    self.crossing_origin.append((xi, t, r))
                    self.crossing_strands.append(((cu, t), (cv, r)))

        # Build crossing records with arc ids.
        self.crossing_record: list[Crossing] = []
        for xi, t, r in self.crossing_origin:
            x = self.source.crossings[xi]
            cu = comp_of[x.ends[0]]
            cv = comp_of[x.ends[x.over_in]]
            n_u, n_v = self.colors[cu], self.colors[cv]
            row = self._row_of_copy(xi, r)
            col = self._col_of_copy(xi, t)
            stubs: dict[str, int] = {}
            # South / north stubs of column `col` around row `row`.
            stubs["S"] = (
                arc(("copy", x.ends[0], t), (cu, t))
                if row == 1
                else arc(("u", xi, col, row - 1), (cu, t))
            )
            stubs["N"] = (
                arc(("copy", x.ends[2], t), (cu, t))
                if row == n_v
                else arc(("u", xi, col, row), (cu, t))
            )
            stubs["E"] = (
                arc(("copy", x.ends[1], r), (cv, r))
                if col == n_u
                else arc(("o", xi, row, col), (cv, r))
            )
            stubs["W"] = (
                arc(("copy", x.ends[3], r), (cv, r))
                if col == 1
                else arc(("o", xi, row, col - 1), (cv, r))
            )
            under_dir_up = _orient(t) == 1
            over_dir = (-1 if x.over_in == 1 else 1) * _orient(r)  # -1 = westward
            under_in = "S" if under_dir_up else "N"
            order = _CCW_FROM[under_in]
            over_in_compass = "E" if over_dir == -1 else "W"
            over_slot = order.index(over_in_compass)
            record = Crossing(tuple(stubs[c] for c in order), over_slot)
            expected_sign = x.sign * _orient(t) * _orient(r)
            if record.sign != expected_sign:
                raise AssertionError(
                    f"cable sign bookkeeping broke at grid ({xi},{t},{r}): "
                    f"{record.sign} != {expected_sign}"
                )
            self.crossing_record.append(record)

        # Strand cycles: (arc id, crossing id, role) in source-orientation order.
        self.strands = tuple(
            (c, t) for c in range(source.n_components) for t in range(1, colors[c] + 1)
        )
        self.strand_cycle: dict[tuple[int, int], tuple[tuple[int, int, str], ...]] = {}
        for c, t in self.strands:
            self.strand_cycle[(c, t)] = tuple(self._walk_strand(c, t))

    def _col_of_copy(self, xi: int, t: int) -> int:
        """Geometric column position of under-copy t in grid xi (west = 1).

        The under-strand travels south to north in the local frame, so with
        strand 1 leftmost relative to the original orientation it sits at the
        west column; the rightmost convention mirrors the bundle.
        """
        x = self.source.crossings[xi]
        cu = self.source.arc_component[x.ends[0]]
        n_u = self.colors[cu]
        return t if self.strand_order == "leftmost" else n_u + 1 - t

    def _row_of_copy(self, xi: int, r: int) -> int:
        """Geometric row position of over-copy r in grid xi (south = 1)."""
        x = self.source.crossings[xi]
        cv = self.source.arc_component[x.ends[x.over_in]]
        n_v = self.colors[cv]
        # Over direction westward (over_in == 1): left of travel is south, so
        # copy 1 sits at the south row; eastward travel flips it.
        pos = r if x.over_in == 1 else n_v + 1 - r
        return pos if self.strand_order == "leftmost" else n_v + 1 - pos

    def _copy_of_row(self, xi: int, row: int) -> int:
        x = self.source.crossings[xi]
        cv = self.source.arc_component[x.ends[x.over_in]]
        n_v = self.colors[cv]
        pos = row if self.strand_order == "leftmost" else n_v + 1 - row
        return pos if x.over_in == 1 else n_v + 1 - pos

    def _walk_strand(self, c: int, t: int):
        source = self.source
        if source.free_loops[c]:
            return
        for a in source.component_cycle(c):
            yield_arc = self.arc_id[("copy", a, t)]
            xi, slot = source.arc_head(a)
            x = source.crossings[xi]
            cu = source.arc_component[x.ends[0]]
            cv = source.arc_component[x.ends[x.over_in]]
            if slot == 0:
                # Under passage: south to north through the copy's column.
                n_v = self.colors[cv]
                col = self._col_of_copy(xi, t)
                prev = yield_arc
                for row in range(1, n_v + 1):
                    r = self._copy_of_row(xi, row)
                    yield (prev, self.crossing_id[(xi, t, r)], "under")
                    if row < n_v:
                        prev = self.arc_id[("u", xi, col, row)]
            else:
                # Over passage through the row of copy t, in over-direction.
                n_u = self.colors[cu]
                row = self._row_of_copy(xi, t)
                cols = range(n_u, 0, -1) if x.over_in == 1 else range(1, n_u + 1)
                prev = yield_arc
                for idx, cpos in enumerate(cols):
                    tu = cpos if self.strand_order == "leftmost" else n_u + 1 - cpos
                    yield (prev, self.crossing_id[(xi, tu, t)], "over")
                    if idx < n_u - 1:
                        gap = cpos - 1 if x.over_in == 1 else cpos
                        prev = self.arc_id[("o", xi, row, gap)]


@dataclass(frozen=True, eq=False)
class CableDiagram:
    """A cable or pairing-subcable with full-cable bookkeeping.

    ``strand_cycles`` list (arc, crossing, role) triples per surviving strand
    in source-orientation order; ``arc_chains`` maps each diagram arc to the
    tuple of full-cable arcs it absorbed.
    """

    source: FramedLinkDiagram
    colors: tuple[int, ...]
    full: FullCableInfo
    kept: tuple[tuple[int, ...], ...]  # kept strand indices per source component
    diagram: FramedLinkDiagram
    strands: tuple[tuple[int, int], ...]  # diagram component order
    crossing_full_ids: tuple[int, ...]
    full_to_new_crossing: dict[int, int]
    arc_chains: dict[int, tuple[int, ...]]
    full_arc_to_new: dict[int, int]
    strand_cycles: dict[tuple[int, int], tuple[tuple[int, int, str], ...]]

    @property
    def is_full(self) -> bool:
        return all(len(k) == n for k, n in zip(self.kept, self.colors))

    def strand_component(self, strand: tuple[int, int]) -> int:
        return self.strands.index(strand)

    def kept_counts(self) -> tuple[int, ...]:
        return tuple(len(k) for k in self.kept)


def cable(
    diagram: FramedLinkDiagram, colors: tuple[int, ...], strand_order: str = "leftmost"
) -> CableDiagram:
    """The blackboard-framed cable with alternating strand orientations.

    Zero colors delete the component: the cable is built with those clamped
    to one strand and the clamped strands removed by the shared deletion
    machinery.
    """
    colors = tuple(colors)
    if len(colors) != diagram.n_components:
        raise ValueError(
            f"color-tuple length {len(colors)} != component count {diagram.n_components}"
        )
    if any(n < 0 for n in colors):
        raise ValueError("colors must be non-negative")
    clamped = tuple(max(n, 1) for n in colors)
    full = FullCableInfo(diagram, clamped, strand_order)
    remove = {(c, 1) for c, n in enumerate(colors) if n == 0}
    cd = _from_deletion(full, colors, remove)
    return cd


def subcable(cd: CableDiagram, pairing: Pairing) -> CableDiagram:
    """The subcable D^s: delete every strand paired by ``pairing``."""
    if not cd.is_full:
        raise ValueError("subcable expects the full cable; pairings index original strands")
    pairing.validate_for(cd.colors)
    remove = {
        (c, t)
        for c in range(len(cd.colors))
        for t in pairing.paired_strands(c)
    }
    return _from_deletion(cd.full, cd.colors, remove)


def _from_deletion(
    full: FullCableInfo, colors: tuple[int, ...], remove: set[tuple[int, int]]
) -> CableDiagram:
    kept = tuple(
        tuple(t for t in range(1, full.colors[c] + 1) if (c, t) not in remove and colors[c] > 0)
        for c in range(len(full.colors))
    )
    kept_set = {(c, t) for c, ts in enumerate(kept) for t in ts}

    kept_crossings = [
        fid
        for fid in range(len(full.crossing_origin))
        if full.crossing_strands[fid][0] in kept_set and full.crossing_strands[fid][1] in kept_set
    ]
    full_to_new = {fid: i for i, fid in enumerate(kept_crossings)}

    # Chains: walk each kept strand, cutting at kept crossings.
    chains: list[tuple[int, ...]] = []
    chain_index: dict[tuple[int, ...], int] = {}
    full_arc_to_chain: dict[int, int] = {}
    strand_cycles: dict[tuple[int, int], list[tuple[int, int, str]]] = {}
    free_loop_strands: list[tuple[int, int]] = []

    for strand in full.strands:
        if strand not in kept_set:
            continue
        cycle = full.strand_cycle[strand]
        if not cycle:
            free_loop_strands.append(strand)
            strand_cycles[strand] = []
            continue
        kept_positions = [i for i, (_, x, _) in enumerate(cycle) if x in full_to_new]
        if not kept_positions:
            # Every crossing on the strand vanished: it closes into a circle.
            free_loop_strands.append(strand)
            strand_cycles[strand] = []
            continue
        new_cycle: list[tuple[int, int, str]] = []
        m = len(cycle)
        for pos_idx, pos in enumerate(kept_positions):
            prev_pos = kept_positions[pos_idx - 1]
            # Arcs strictly after prev_pos's crossing up to pos's crossing.
            chain: list[int] = []
            i = (prev_pos + 1) % m
            while True:
                chain.append(cycle[i][0] if i != pos else cycle[pos][0])
                if i == pos:
                    break
                i = (i + 1) % m
            key = tuple(chain)
            if key not in chain_index:
                chain_index[key] = len(chains)
                chains.append(key)
                for fa in key:
                    full_arc_to_chain[fa] = chain_index[key]
            _, x, role = cycle[pos]
            new_cycle.append((chain_index[key], x, role))
        strand_cycles[strand] = new_cycle

    # Deterministic arc labels: order chains by their minimal full arc id.
    order = sorted(range(len(chains)), key=lambda i: min(chains[i]))
    chain_label = {old: new + 1 for new, old in enumerate(order)}  # arc labels from 1
    arc_chains = {chain_label[i]: chains[i] for i in range(len(chains))}
    full_arc_to_new = {fa: chain_label[ci] for fa, ci in full_arc_to_chain.items()}

    new_crossings = []
    for fid in kept_crossings:
        rec = full.crossing_record[fid]
        ends = tuple(full_arc_to_new[e] for e in rec.ends)
        new_crossings.append(Crossing(ends, rec.over_in))

    loop_set = set(free_loop_strands)
    arc_strand_min: dict[tuple[int, int], int] = {}
    for label, chain in arc_chains.items():
        s = full.arc_strand[chain[0]]
        arc_strand_min[s] = min(arc_strand_min.get(s, label), label)

    # Diagram component order: arc-bearing strands by minimal arc label (the
    # order the diagram constructor derives), then free-loop strands.
    arc_bearing = sorted(arc_strand_min, key=arc_strand_min.get)
    strands = tuple(arc_bearing) + tuple(s for s in full.strands if s in loop_set)

    free_loops = []
    base_edges: list[int | None] = []
    for s in strands:
        if s in loop_set:
            free_loops.append(1)
            base_edges.append(None)
        else:
            free_loops.append(0)
            c, t = s
            base_src = full.source.base_edges[c]
            if base_src is None:
                base_src = min(full.source.component_cycle(c))
            base_full = full.arc_id[("copy", base_src, t)]
            base_edges.append(full_arc_to_new[base_full])

    diagram = FramedLinkDiagram(
        tuple(new_crossings),
        len(strands),
        tuple(free_loops),
        tuple(base_edges),
    )

    # Re-align strand cycles to final arc labels and new crossing ids.
    cycles_out = {
        s: tuple((chain_label[ci], full_to_new[x], role) for (ci, x, role) in cyc)
        for s, cyc in strand_cycles.items()
    }
    return CableDiagram(
        source=full.source,
        colors=colors,
        full=full,
        kept=kept,
        diagram=diagram,
        strands=strands,
        crossing_full_ids=tuple(kept_crossings),
        full_to_new_crossing=full_to_new,
        arc_chains=arc_chains,
        full_arc_to_new=full_arc_to_new,
        strand_cycles=cycles_out,
    )
