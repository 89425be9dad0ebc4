"""The Khovanov-type bicomplex over the pairing graph of a cable.

For an edge s -> s' of the pairing graph, the two newly paired strands (the
"contracted" pair) cobound an annulus.  The induced chain map is realized
combinatorially: every crossing touching the pair receives a forced marker
so that, once smoothed, the corridor between the two strands pinches into
closed "contracted circles" and every other strand re-routes through the
corridor without changing the circle pattern of the smaller diagram.  States
carrying the forced markers with all contracted circles positive map to the
state of D^{s'} read off by deleting the contracted circles (sign +1);
states differing by one flipped crossing pair map to the same target with
sign -1, target circle signs obtained by Frobenius multiplication of the
circles that merge across the flip; everything else maps to zero.

The map also carries a reordering sign: with the diagram's crossing order
fixed, moving the pair's crossings behind everything else (the tensor
factorization in which the contracted data is the trailing factor) twists
each state by (-1)^(number of [pair-minus, other-minus] inversions).  With
that sign the per-edge maps commute with the Khovanov differentials; the
verification suite checks the identity exhaustively on the states where
either side can be nonzero.

Assembly: d' multiplies each edge map by the pairing sign; d'' is (-1)^k
times the Khovanov differential of each column.  The suite verifies
d'^2 = 0, d''^2 = 0 and the anticommutation d''d' + d'd'' = 0 blockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .bracket import colored_jones, smoothing_circle_classes
from .cable import CableDiagram, cable, subcable
from .conventions import DEFAULT_CONVENTIONS, Conventions
from .diagram import FramedLinkDiagram
from .errors import DEFAULT_STATE_CAP, CapExceeded, IdentityError
from .intlinalg import HomologySummary, IntMatrix, homology_at
from .khovanov import KhovanovCube
from .laurent import LaurentPoly
from .pairing import Pairing, all_pairings_by_grade, pairing_sign


@dataclass
class ContractionEvent:
    """One passage of a transversal strand across the contracted corridor."""

    kind: str  # "a" (other strand) | "b" (the pair crossing itself)
    site: int  # source-diagram crossing index
    axis: str  # "u": walls are the under-bundle; "o": walls are the over-bundle
    transversal: tuple[int, int]
    crossing_a: int  # D^s crossing on the lower wall strand
    crossing_b: int
    middle_arc: int
    bridge_side: str = ""  # "before" | "after" along the source orientation
    forced: dict[int, int] = field(default_factory=dict)  # crossing -> marker bit
    label: str = ""  # "a-1"/"a-2" for a-events (transversal over / under the walls)


class ContractionContext:
    """Forced-marker data for one edge of the pairing graph."""

    def __init__(
        self,
        full: "CableDiagram",
        s: Pairing,
        s_prime: Pairing,
        conventions: Conventions = DEFAULT_CONVENTIONS,
    ):
        self.s = s
        self.s_prime = s_prime
        self.conventions = conventions
        component, t = s_prime.added_pair(s)
        self.pair = (component, t)
        self.wall_a = (component, t)
        self.wall_b = (component, t + 1)
        walls = {self.wall_a, self.wall_b}
        self.sub = subcable(full, s)
        self.target = subcable(full, s_prime)
        sub = self.sub
        info = full.full

        def strand_of_arc(arc: int) -> tuple[int, int]:
            return info.arc_strand[sub.arc_chains[arc][0]]

        self.wall_arcs = {a for a in sub.diagram.arcs if strand_of_arc(a) in walls}
        self.strand_of_arc = strand_of_arc

        self.p_crossings = tuple(
            i
            for i, fid in enumerate(sub.crossing_full_ids)
            if info.crossing_strands[fid][0] in walls or info.crossing_strands[fid][1] in walls
        )
        p_set = set(self.p_crossings)
        self.degenerate = not self.p_crossings

        # Group the pair's crossings into corridor events.
        events: dict[tuple, ContractionEvent] = {}
        for i in self.p_crossings:
            fid = sub.crossing_full_ids[i]
            xi, tu, rv = info.crossing_origin[fid]
            su, sv = info.crossing_strands[fid]
            if su in walls:
                key = ("u", xi, sv)
                evt = events.get(key)
                if evt is None:
                    evt = events[key] = ContractionEvent(
                        kind="b" if sv in walls else "a",
                        site=xi,
                        axis="u",
                        transversal=sv,
                        crossing_a=-1,
                        crossing_b=-1,
                        middle_arc=-1,
                    )
                if su == self.wall_a:
                    evt.crossing_a = i
                else:
                    evt.crossing_b = i
            if sv in walls:
                key = ("o", xi, su)
                evt = events.get(key)
                if evt is None:
                    evt = events[key] = ContractionEvent(
                        kind="b" if su in walls else "a",
                        site=xi,
                        axis="o",
                        transversal=su,
                        crossing_a=-1,
                        crossing_b=-1,
                        middle_arc=-1,
                    )
                if sv == self.wall_a:
                    evt.crossing_a = i
                else:
                    evt.crossing_b = i
        for key, evt in events.items():
            if evt.crossing_a < 0 or evt.crossing_b < 0:
                raise IdentityError(
                    "corridor event incomplete",
                    f"edge {s}->{s_prime}: transversal {evt.transversal} misses a wall crossing",
                )
            evt.middle_arc = self._middle_arc(info, key)
            chain = sub.arc_chains[evt.middle_arc]
            if len(chain) != 1:
                raise IdentityError(
                    "corridor bridge arc not atomic",
                    f"edge {s}->{s_prime}: middle arc {evt.middle_arc} absorbed chain {chain}",
                )
            if evt.kind == "a":
                # Reporting label: whether the transversal passes over or
                # under the contracted pair (our reading of the two pictures).
                evt.label = "a-1" if evt.axis == "u" else "a-2"
        self.events = events

        # Walk both walls in source orientation; record arrival/departure
        # arcs per event and the walk position along the lower wall.
        self._walk_walls(walls)

        # Resolve bridge sides and forced markers.
        self._assign_bridges()
        self.forced: dict[int, int] = {}
        for evt in events.values():
            self._force_event(evt)
        self.forced_minus = sum(self.forced.values())

        delta = self._n_minus(sub.diagram) - self._n_minus(self.target.diagram)
        if self.forced_minus != delta:
            raise IdentityError(
                "grading shift",
                f"edge {s}->{s_prime}: forced pattern has {self.forced_minus} minus markers, "
                f"crossing deletion removes {delta}",
            )

        # Moves: a minus marker may step to an adjacent position along the
        # contracted strands; adjacency pairs consecutive crossings on either
        # wall and the two crossings of one corridor event.
        adjacency: set[frozenset[int]] = set()
        for wall in (self.wall_a, self.wall_b):
            cyc = [x for (_, x, _) in sub.strand_cycles[wall]]
            m = len(cyc)
            for idx in range(m):
                if cyc[idx] != cyc[(idx + 1) % m]:
                    adjacency.add(frozenset((cyc[idx], cyc[(idx + 1) % m])))
        for evt in events.values():
            adjacency.add(frozenset((evt.crossing_a, evt.crossing_b)))
        self.move_pairs = tuple(
            sorted(
                tuple(sorted(pair))
                for pair in adjacency
                if len(pair) == 2 and self.forced[min(pair)] != self.forced[max(pair)]
            )
        )

        self.middle_arcs = {evt.middle_arc for evt in events.values()}
        self.contracted_count = self._structural_contracted_count()

    # -- helpers -------------------------------------------------------------

    @staticmethod
    def _n_minus(diagram: FramedLinkDiagram) -> int:
        return sum(1 for x in diagram.crossings if x.sign < 0)

    def _middle_arc(self, info, key) -> int:
        axis, xi, transversal = key
        component, t = self.pair
        sub = self.sub
        if axis == "u":
            cols = sorted((info._col_of_copy(xi, t), info._col_of_copy(xi, t + 1)))
            if cols[1] - cols[0] != 1:
                raise AssertionError("contracted strands are not adjacent columns")
            row = info._row_of_copy(xi, transversal[1])
            full_arc = info.arc_id[("o", xi, row, cols[0])]
        else:
            rows = sorted((info._row_of_copy(xi, t), info._row_of_copy(xi, t + 1)))
            if rows[1] - rows[0] != 1:
                raise AssertionError("contracted strands are not adjacent rows")
            col = info._col_of_copy(xi, transversal[1])
            full_arc = info.arc_id[("u", xi, col, rows[0])]
        return sub.full_arc_to_new[full_arc]

    def _walk_walls(self, walls) -> None:
        sub = self.sub
        info = self.sub.full
        self.event_sides: dict[tuple, dict] = {key: {} for key in self.events}
        self.event_position: dict[tuple, int] = {}
        for wall in (self.wall_a, self.wall_b):
            cycle = sub.strand_cycles[wall]
            m = len(cycle)
            for idx, (arc, crossing, role) in enumerate(cycle):
                fid = sub.crossing_full_ids[crossing]
                xi, tu, rv = info.crossing_origin[fid]
                su, sv = info.crossing_strands[fid]
                if role == "under":
                    key = ("u", xi, sv)
                else:
                    key = ("o", xi, su)
                if key not in self.events:
                    raise AssertionError(f"wall walk met unknown event {key}")
                after_arc = cycle[(idx + 1) % m][0]
                sides = self.event_sides[key]
                if wall in sides:
                    raise AssertionError(f"wall {wall} met event {key} twice")
                sides[wall] = (arc, after_arc)
                if wall == self.wall_a:
                    self.event_position[key] = idx

    def _assign_bridges(self) -> None:
        component, t = self.pair
        lower_runs_forward = t % 2 == 1
        behind = "before" if lower_runs_forward else "after"
        ahead = "after" if lower_runs_forward else "before"
        chosen_a = behind if self.conventions.a_bridge == "behind" else ahead
        paired_b: dict[tuple, tuple] = {}
        for key, evt in self.events.items():
            if evt.kind == "a":
                evt.bridge_side = chosen_a
            else:
                axis, xi, transversal = key
                partner_strand = (
                    self.wall_b if transversal == self.wall_a else self.wall_a
                )
                paired_b[key] = (axis, xi, partner_strand)
        for key, partner in paired_b.items():
            evt = self.events[key]
            other = self.events[partner]
            # The pair's two passages across its own self-crossing bridge
            # away from each other: the first met (along the source
            # orientation) closes the corridor on its arrival side.
            if self.event_position[key] < self.event_position[partner]:
                evt.bridge_side = "before"
            else:
                evt.bridge_side = "after"
            del other  # partner resolved in its own iteration

    def _arc_end_slot(self, arc: int, crossing: int, arriving: bool, forward: bool) -> int:
        """Slot of an arc end at a crossing for a walk in source orientation.

        ``forward`` is whether the strand's own orientation agrees with the
        source orientation; arrival along the walk is the arc's head exactly
        in the forward case.
        """
        diagram = self.sub.diagram
        use_head = arriving == forward
        ci, slot = diagram.arc_head(arc) if use_head else diagram.arc_tail(arc)
        if ci != crossing:
            raise AssertionError(
                f"arc {arc} does not end at crossing {crossing} on the expected side"
            )
        return slot

    def _force_event(self, evt: ContractionEvent) -> None:
        diagram = self.sub.diagram
        component, t = self.pair
        mid = evt.middle_arc
        mid_head = diagram.arc_head(mid)
        mid_tail = diagram.arc_tail(mid)
        for wall, crossing in ((self.wall_a, evt.crossing_a), (self.wall_b, evt.crossing_b)):
            before, after = self.event_sides[self._event_key(evt)][wall]
            forward = wall[1] % 2 == 1
            if evt.bridge_side == "before":
                wall_slot = self._arc_end_slot(before, crossing, arriving=True, forward=forward)
            else:
                wall_slot = self._arc_end_slot(after, crossing, arriving=False, forward=forward)
            if mid_head[0] == crossing and mid_tail[0] == crossing:
                raise AssertionError("bridge arc loops back to one crossing")
            mid_slot = mid_head[1] if mid_head[0] == crossing else mid_tail[1]
            if mid_tail[0] != crossing and mid_head[0] != crossing:
                raise AssertionError("bridge arc misses its crossing")
            pair = frozenset((wall_slot, mid_slot))
            if pair in (frozenset((1, 2)), frozenset((3, 0))):
                marker = 0  # the A-smoothing realizes the bridge
            elif pair in (frozenset((0, 1)), frozenset((2, 3))):
                marker = 1
            else:
                raise IdentityError(
                    "contracted strands fail to close into circles",
                    f"bridge would join opposite slots {sorted(pair)} at crossing {crossing}",
                )
            previous = evt.forced.get(crossing)
            if previous is not None and previous != marker:
                raise IdentityError(
                    "contracted strands fail to close into circles",
                    f"crossing {crossing} forced to both markers within one event",
                )
            evt.forced[crossing] = marker
            known = self.forced.get(crossing)
            if known is not None and known != marker:
                raise IdentityError(
                    "contracted strands fail to close into circles",
                    f"crossing {crossing} forced inconsistently by overlapping events",
                )
            self.forced[crossing] = marker
        if evt.forced[evt.crossing_a] + evt.forced[evt.crossing_b] != 1:
            raise IdentityError(
                "forced markers",
                f"event at site {evt.site} lacks the one-minus-per-passage pattern",
            )

    def _event_key(self, evt: ContractionEvent) -> tuple:
        return (evt.axis, evt.site, evt.transversal)

    def _structural_contracted_count(self) -> int:
        """Contracted circles of the forced smoothing (non-pair markers +)."""
        if self.degenerate:
            return 1  # the crossing-free pair forms a single annulus unit
        mask = 0
        for crossing, marker in self.forced.items():
            if marker:
                mask |= 1 << crossing
        allowed = self.wall_arcs | self.middle_arcs
        count = 0
        for cls in smoothing_circle_classes(self.sub.diagram, mask):
            if all(a in allowed for a in cls):
                count += 1
        return count

    def describe(self) -> dict:
        return {
            "pair": {"component": self.pair[0], "strands": [self.pair[1], self.pair[1] + 1]},
            "events": [
                {
                    "kind": evt.kind,
                    "label": evt.label or "b",
                    "site": evt.site,
                    "crossings": [evt.crossing_a, evt.crossing_b],
                    "bridge_side": evt.bridge_side,
                    "forced": {str(c): m for c, m in sorted(evt.forced.items())},
                }
                for key, evt in sorted(self.events.items(), key=lambda kv: self.event_position[kv[0]])
            ],
            "degenerate": self.degenerate,
            "contracted_circles": self.contracted_count,
        }


class AnnulusMap:
    """The chain map C(D^s) -> C(D^{s'}) of one pairing-graph edge.

    Type 1: states carrying the forced markers with every contracted circle
    positive map, with sign +1, to the state read off by deleting the
    contracted circles.  Type 2: states whose markers differ from the forced
    pattern by moving one minus marker to an adjacent position along the
    contracted strands (adjacent = consecutive on a wall strand, or the other
    crossing of the same corridor event), with every contracted circle
    negative, map to the same deletion with sign -1.  Everything else maps to
    zero.  Non-contracted circle signs transport multiplicatively onto the
    circles of the smaller diagram (two minuses meeting kill the state), and
    every value carries the reordering sign that shuffles the pair's
    crossings behind the rest of the crossing order.
    """

    def __init__(self, ctx: ContractionContext, cube_s: KhovanovCube, cube_t: KhovanovCube):
        self.ctx = ctx
        self.cube_s = cube_s
        self.cube_t = cube_t
        sub, target = ctx.sub, ctx.target
        self.p_mask = 0
        for i in ctx.p_crossings:
            self.p_mask |= 1 << i
        self.forced_mask = 0
        for crossing, marker in ctx.forced.items():
            if marker:
                self.forced_mask |= 1 << crossing
        self.flip_masks = {}
        for i, j in ctx.move_pairs:
            bits = (1 << i) | (1 << j)
            self.flip_masks[self.forced_mask ^ bits] = 1
        self._type2: dict[tuple[int, int], int] | None = None
        self.pos_map = {}
        for i, fid in enumerate(sub.crossing_full_ids):
            if i not in set(ctx.p_crossings):
                self.pos_map[i] = target.full_to_new_crossing[fid]
        walls = {ctx.wall_a, ctx.wall_b}
        self.wall_loop_circles = set()
        self.loop_image = {}
        target_loops = {
            target.strands[comp]: k
            for k, comp in enumerate(cube_t.free_loop_components)
        }
        for k, comp in enumerate(cube_s.free_loop_components):
            strand = sub.strands[comp]
            if strand in walls:
                self.wall_loop_circles.add(k)
            else:
                self.loop_image[k] = target_loops[strand]
        self.target_loops = target_loops
        self._analysis: dict[int, tuple] = {}
        self._koszul: dict[int, int] = {}

    # -- per-mask analysis ----------------------------------------------------

    def _target_mask(self, mask: int) -> int:
        out = 0
        for i, pos in self.pos_map.items():
            if (mask >> i) & 1:
                out |= 1 << pos
        return out

    def _koszul_parity(self, mask: int) -> int:
        """Parity of inversions (pair-minus before other-minus) in crossing order."""
        if mask in self._koszul:
            return self._koszul[mask]
        h = 0
        p_minus_seen = 0
        for i in range(self.ctx.sub.diagram.n_crossings):
            if (mask >> i) & 1:
                if (self.p_mask >> i) & 1:
                    p_minus_seen += 1
                else:
                    h += p_minus_seen
        self._koszul[mask] = h & 1
        return h & 1

    def _analyze(self, mask: int):
        """Sign-independent circle bookkeeping for a marker mask.

        Returns (target_mask, contracted_bits, incidence, valid) where
        incidence maps each non-contracted circle id to its target circle id,
        contracted circles are those made of wall and bridge material only
        (they must carry +), and valid is False when some circle meets more
        than one target circle (the map vanishes there).
        """
        if mask in self._analysis:
            return self._analysis[mask]
        ctx = self.ctx
        tmask = self._target_mask(mask)
        s_sm = self.cube_s.smoothings[mask]
        t_sm = self.cube_t.smoothings[tmask]
        target = ctx.target
        allowed = ctx.wall_arcs | ctx.middle_arcs
        contracted_bits = 0
        incidence: dict[int, int] = {}
        valid = True
        for k in self.wall_loop_circles:
            contracted_bits |= 1 << k
        incidence.update(self.loop_image)
        n_free = self.cube_s.n_free
        for idx, cls in enumerate(s_sm.classes):
            circle = n_free + idx
            if all(a in allowed for a in cls):
                # Wall material plus bridge stubs only: a contracted circle.
                contracted_bits |= 1 << circle
                continue
            # Incidence through material surviving as-is: a detour borrows the
            # next event's bridge stub, so bridge stubs (middle arcs) carry no
            # incidence of their own.
            images = set()
            for a in cls:
                if a in allowed:
                    continue
                strand = ctx.strand_of_arc(a)
                if strand in self.target_loops:
                    images.add(self.target_loops[strand])
                else:
                    chain0 = ctx.sub.arc_chains[a][0]
                    images.add(t_sm.arc_circle[target.full_arc_to_new[chain0]])
            if len(images) != 1:
                valid = False
                incidence[circle] = -1
            else:
                incidence[circle] = next(iter(images))
        if valid:
            missing = set(range(t_sm.n_circles)) - set(incidence.values())
            if missing:
                raise AssertionError(
                    f"target circles {sorted(missing)} receive no sign (mask {mask:b})"
                )
        record = (tmask, contracted_bits, incidence, valid)
        self._analysis[mask] = record
        return record

    # -- evaluation -------------------------------------------------------------

    def evaluate(self, mask: int, smask: int):
        """Apply the edge map to one enhanced state.

        Returns (target_mask, target_smask, coeff) or None.
        """
        pm = mask & self.p_mask
        dev = pm ^ self.forced_mask
        if dev == 0:
            type_sign = 1
            contracted_minus = False
        elif pm in self.flip_masks:
            type_sign = -1
            contracted_minus = True
        else:
            return None
        tmask, contracted_bits, incidence, valid = self._analyze(mask)
        if not valid:
            if dev == 0:
                raise AssertionError(
                    f"forced smoothing produced a multi-incident circle (mask {mask:b})"
                )
            return None
        if contracted_minus:
            # Type 2 deletes negatively signed contracted circles.
            if (smask & contracted_bits) != contracted_bits:
                return None
        elif smask & contracted_bits:
            return None
        minus_counts: dict[int, int] = {}
        for circle, t_circle in incidence.items():
            if (smask >> circle) & 1:
                minus_counts[t_circle] = minus_counts.get(t_circle, 0) + 1
        tsmask = 0
        for t_circle, count in minus_counts.items():
            if count >= 2:
                return None
            tsmask |= 1 << t_circle
        coeff = type_sign if self._koszul_parity(mask) == 0 else -type_sign
        return (tmask, tsmask, coeff)


@dataclass
class Column:
    """One pairing's summand of a bicomplex column."""

    pairing: Pairing
    sub: CableDiagram
    cube: KhovanovCube


@dataclass
class Edge:
    """A signed pairing-graph edge with its chain map."""

    k: int
    src: int
    dst: int
    sign: int
    ctx: ContractionContext
    map: AnnulusMap

    def describe(self) -> str:
        return f"{self.ctx.s} -> {self.ctx.s_prime}"


class Bicomplex:
    """The (k, i)-bigraded double complex of a colored diagram.

    Columns are indexed by pairings graded by pair count; within one column
    the group at homological degree i is the sum of the Khovanov groups
    C^i(D^s), with the j-grading retained on basis labels.
    """

    def __init__(
        self,
        source: FramedLinkDiagram,
        colors: tuple[int, ...],
        conventions: Conventions = DEFAULT_CONVENTIONS,
        cap: int = DEFAULT_STATE_CAP,
    ):
        self.source = source
        self.colors = tuple(colors)
        self.conventions = conventions
        self.cap = cap
        self.full = cable(source, self.colors, conventions.strand_order)
        grades = all_pairings_by_grade(self.colors)
        self.columns: list[list[Column]] = []
        index: dict[tuple, tuple[int, int]] = {}
        for k, level in enumerate(grades):
            col = []
            for idx, p in enumerate(level):
                sub = subcable(self.full, p)
                col.append(Column(p, sub, KhovanovCube(sub.diagram, cap=cap)))
                index[p.pairs] = (k, idx)
            self.columns.append(col)
        self.edges: list[list[Edge]] = [[] for _ in range(len(grades))]
        for k, level in enumerate(grades[:-1]):
            for src_idx, col in enumerate(self.columns[k]):
                s = col.pairing
                for c, n in enumerate(self.colors):
                    used = s.paired_strands(c)
                    for t in range(1, n):
                        if t in used or t + 1 in used:
                            continue
                        s_prime = s.with_pair(c, t)
                        k2, dst_idx = index[s_prime.pairs]
                        ctx = ContractionContext(self.full, s, s_prime, conventions)
                        amap = AnnulusMap(
                            ctx, col.cube, self.columns[k2][dst_idx].cube
                        )
                        sign = pairing_sign(s, s_prime, conventions.above_lines)
                        self.edges[k].append(Edge(k, src_idx, dst_idx, sign, ctx, amap))

    # -- structural data -------------------------------------------------------

    @property
    def n_grades(self) -> int:
        return len(self.columns)

    def edges_from(self, k: int, src: int) -> list[Edge]:
        return [e for e in self.edges[k] if e.src == src]

    def _edge_masks(self, edge: Edge, max_dev: int) -> list[int]:
        """Marker masks whose pair-bit pattern is within max_dev of forced.

        The edge map vanishes unless the deviation is 0 or one event's bit
        pair, so any identity involving at most one extra differential step
        is identically zero outside deviation max_dev >= 3; enumerating these
        masks is therefore a complete check.
        """
        amap = edge.map
        cube = self.columns[edge.k][edge.src].cube
        c = cube.diagram.n_crossings
        p_positions = list(edge.ctx.p_crossings)
        non_p = [i for i in range(c) if not (amap.p_mask >> i) & 1]
        n_patterns = sum(
            1 for size in range(max_dev + 1) for _ in combinations(p_positions, size)
        )
        if n_patterns << len(non_p) > self.cap:
            raise CapExceeded(n_patterns << len(non_p), self.cap, "edge verification masks")
        masks = []
        for size in range(max_dev + 1):
            for bits in combinations(p_positions, size):
                pm = amap.forced_mask
                for b in bits:
                    pm ^= 1 << b
                for rest in range(1 << len(non_p)):
                    mask = pm
                    for pos, i in enumerate(non_p):
                        if (rest >> pos) & 1:
                            mask |= 1 << i
                    masks.append(mask)
        return masks

    def _column_masks(self, k: int, src: int, max_dev: int) -> list[int]:
        out: set[int] = set()
        for e in self.edges_from(k, src):
            out.update(self._edge_masks(e, max_dev))
        return sorted(out)

    # -- identity verification ---------------------------------------------------

    def verify_chain_maps(self) -> list[str]:
        """Per-edge chain-map identity d_{s'} . phi = phi . d_s; returns witnesses."""
        failures = []
        for k, level in enumerate(self.edges):
            for edge in level:
                cube_s = self.columns[k][edge.src].cube
                cube_t = self.columns[k + 1][edge.dst].cube
                for mask in self._edge_masks(edge, 3):
                    n_circ = cube_s.smoothings[mask].n_circles
                    for smask in range(1 << n_circ):
                        lhs: dict[tuple[int, int], int] = {}
                        for m2, s2, c in cube_s.differential(mask, smask):
                            r = edge.map.evaluate(m2, s2)
                            if r:
                                _acc(lhs, (r[0], r[1]), c * r[2])
                        rhs: dict[tuple[int, int], int] = {}
                        r = edge.map.evaluate(mask, smask)
                        if r:
                            for m2, s2, c in cube_t.differential(r[0], r[1]):
                                _acc(rhs, (m2, s2), r[2] * c)
                        if lhs != rhs:
                            failures.append(
                                f"edge {edge.describe()}: state mask={mask:b} signs={smask:b} "
                                f"phi.d={lhs} d.phi={rhs}"
                            )
                            if len(failures) >= 5:
                                return failures
        return failures

    def verify_d_prime_squared(self) -> list[str]:
        failures = []
        for k in range(self.n_grades - 2):
            for src in range(len(self.columns[k])):
                out_edges = self.edges_from(k, src)
                if not out_edges:
                    continue
                cube_s = self.columns[k][src].cube
                for mask in self._column_masks(k, src, 2):
                    n_circ = cube_s.smoothings[mask].n_circles
                    for smask in range(1 << n_circ):
                        acc: dict[tuple[int, int, int], int] = {}
                        for e1 in out_edges:
                            r1 = e1.map.evaluate(mask, smask)
                            if not r1:
                                continue
                            for e2 in self.edges_from(k + 1, e1.dst):
                                r2 = e2.map.evaluate(r1[0], r1[1])
                                if r2:
                                    _acc(
                                        acc,
                                        (e2.dst, r2[0], r2[1]),
                                        e1.sign * e2.sign * r1[2] * r2[2],
                                    )
                        if acc:
                            failures.append(
                                f"d'^2 != 0 from {self.columns[k][src].pairing} at "
                                f"mask={mask:b} signs={smask:b}: {acc}"
                            )
                            if len(failures) >= 5:
                                return failures
        return failures

    def verify_d_double_prime_squared(self) -> list[str]:
        failures = []
        for k, level in enumerate(self.columns):
            for col in level:
                try:
                    col.cube.verify_d_squared()
                except AssertionError as exc:
                    failures.append(f"column {col.pairing} (grade {k}): {exc}")
        return failures

    def verify_anticommutation(self) -> list[str]:
        """d''(k+1,i) d'(k,i) + d'(k,i+1) d''(k,i) = 0 on every basis state."""
        failures = []
        for k in range(self.n_grades - 1):
            for src in range(len(self.columns[k])):
                out_edges = self.edges_from(k, src)
                if not out_edges:
                    continue
                cube_s = self.columns[k][src].cube
                sign_col = -1 if k % 2 else 1
                for mask in self._column_masks(k, src, 3):
                    n_circ = cube_s.smoothings[mask].n_circles
                    for smask in range(1 << n_circ):
                        acc: dict[tuple[int, int, int], int] = {}
                        for e in out_edges:
                            r = e.map.evaluate(mask, smask)
                            if r:
                                cube_t = self.columns[k + 1][e.dst].cube
                                for m2, s2, c in cube_t.differential(r[0], r[1]):
                                    _acc(
                                        acc,
                                        (e.dst, m2, s2),
                                        (-sign_col) * e.sign * r[2] * c,
                                    )
                        for m1, s1, c in cube_s.differential(mask, smask):
                            for e in out_edges:
                                r = e.map.evaluate(m1, s1)
                                if r:
                                    _acc(
                                        acc,
                                        (e.dst, r[0], r[1]),
                                        sign_col * c * e.sign * r[2],
                                    )
                        if acc:
                            failures.append(
                                f"anticommutation fails from {self.columns[k][src].pairing} "
                                f"at mask={mask:b} signs={smask:b}: {acc}"
                            )
                            if len(failures) >= 5:
                                return failures
        return failures

    # -- invariants and reports ---------------------------------------------------

    def bigraded_euler(self) -> LaurentPoly:
        """Sum of (-1)^(k+i) q^j over the rank table; equals the colored Jones."""
        out = LaurentPoly.zero("q")
        for k, level in enumerate(self.columns):
            for col in level:
                for (i, j), rk in col.cube.rank_table().items():
                    sign = -1 if (k + i) % 2 else 1
                    out = out + LaurentPoly.monomial(j, sign * rk, "q")
        return out

    def euler_matches_colored_jones(self) -> tuple[bool, LaurentPoly, LaurentPoly]:
        lhs = self.bigraded_euler()
        rhs = colored_jones(self.source, self.colors, cap=self.cap)
        return lhs == rhs, lhs, rhs

    def parity_report(self) -> dict:
        """Contracted-circle counts per edge (Remark-style evenness check).

        Crossing-bearing edges must show an even count; a crossing-free
        contracted pair forms a single annulus unit and is reported as the
        documented degenerate case rather than a failure.
        """
        entries = []
        ok = True
        for level in self.edges:
            for e in level:
                ctx = e.ctx
                even = ctx.contracted_count % 2 == 0
                if not ctx.degenerate and not even:
                    ok = False
                entries.append(
                    {
                        "edge": e.describe(),
                        "degenerate": ctx.degenerate,
                        "contracted_circles": ctx.contracted_count,
                        "even": even,
                        "events": {
                            "a": sum(1 for evt in ctx.events.values() if evt.kind == "a"),
                            "b": sum(1 for evt in ctx.events.values() if evt.kind == "b"),
                        },
                    }
                )
        return {"ok": ok, "edges": entries}

    def verify_all(self) -> dict:
        """Run the full identity suite; the CLI report and exit code feed on this."""
        chain = self.verify_chain_maps()
        dp2 = self.verify_d_prime_squared()
        dpp2 = self.verify_d_double_prime_squared()
        anti = self.verify_anticommutation()
        euler_ok, lhs, rhs = self.euler_matches_colored_jones()
        parity = self.parity_report()
        report = {
            "identities": {
                "chain_maps": "ok" if not chain else "FAIL",
                "d_prime_squared": "ok" if not dp2 else "FAIL",
                "d_double_prime_squared": "ok" if not dpp2 else "FAIL",
                "anticommutation": "ok" if not anti else "FAIL",
                "euler_vs_colored_jones": "ok" if euler_ok else "FAIL",
                "contracted_parity": "ok" if parity["ok"] else "FAIL",
            },
            "witnesses": {
                "chain_maps": chain,
                "d_prime_squared": dp2,
                "d_double_prime_squared": dpp2,
                "anticommutation": anti,
            },
            "euler": {
                "bigraded": lhs.to_json_dict(),
                "colored_jones": rhs.to_json_dict(),
            },
            "parity": parity,
            "conventions": {
                "strand_order": self.conventions.strand_order,
                "above_lines": self.conventions.above_lines,
                "a_bridge": self.conventions.a_bridge,
            },
            "columns": [
                [
                    {
                        "pairing": str(col.pairing),
                        "crossings": col.sub.diagram.n_crossings,
                        "states": col.cube.n_states(),
                    }
                    for col in level
                ]
                for level in self.columns
            ],
        }
        report["ok"] = all(v == "ok" for v in report["identities"].values())
        return report

    # -- total complex --------------------------------------------------------------

    def total_basis(self) -> dict[int, list[tuple[int, int, int, int]]]:
        """Total-degree n = k + i bases as (k, column, mask, smask), ordered."""
        basis: dict[int, list[tuple[int, int, int, int]]] = {}
        total = sum(col.cube.n_states() for level in self.columns for col in level)
        if total > self.cap:
            raise CapExceeded(total, self.cap, "total-complex basis")
        for k, level in enumerate(self.columns):
            for idx, col in enumerate(level):
                for mask, smask in col.cube.states():
                    i, _ = col.cube.gradings(mask, smask)
                    basis.setdefault(k + i, []).append((k, idx, mask, smask))
        for n in basis:
            basis[n].sort(
                key=lambda el: (
                    el[0],
                    el[1],
                    self.columns[el[0]][el[1]].cube.state_sort_key(el[2], el[3]),
                )
            )
        return basis

    def total_differential(self, basis: dict[int, list]) -> dict[int, IntMatrix]:
        index: dict[tuple[int, int, int, int], tuple[int, int]] = {}
        for n, elements in basis.items():
            for pos, el in enumerate(elements):
                index[el] = (n, pos)
        matrices: dict[int, dict[tuple[int, int], int]] = {}
        for n, elements in basis.items():
            rows = len(basis.get(n + 1, []))
            trips: dict[tuple[int, int], int] = {}
            for pos, (k, idx, mask, smask) in enumerate(elements):
                col = self.columns[k][idx]
                sign_col = -1 if k % 2 else 1
                for m2, s2, c in col.cube.differential(mask, smask):
                    n2, row = index[(k, idx, m2, s2)]
                    if n2 != n + 1:
                        raise AssertionError("vertical differential broke the total degree")
                    _acc(trips, (row, pos), sign_col * c)
                for e in self.edges_from(k, idx):
                    r = e.map.evaluate(mask, smask)
                    if r:
                        n2, row = index[(k + 1, e.dst, r[0], r[1])]
                        if n2 != n + 1:
                            raise AssertionError("horizontal differential broke the total degree")
                        _acc(trips, (row, pos), e.sign * r[2])
            matrices[n] = IntMatrix(
                rows, len(elements), {key: v for key, v in trips.items() if v}
            )
        return matrices

    def total_homology(self) -> dict[int, HomologySummary]:
        """Homology of (Tot, d' + d'') per total degree k + i."""
        basis = self.total_basis()
        mats = self.total_differential(basis)
        out: dict[int, HomologySummary] = {}
        degrees = sorted(basis)
        for n in degrees:
            dim = len(basis[n])
            d_out = mats.get(n, IntMatrix.zeros(0, dim))
            if n - 1 in mats:
                d_in = mats[n - 1]
            else:
                d_in = IntMatrix.zeros(dim, 0)
            summary = homology_at(d_out, d_in)
            if summary.rank or summary.torsion:
                out[n] = summary
        return out


def _acc(acc: dict, key, value: int) -> None:
    v = acc.get(key, 0) + value
    if v:
        acc[key] = v
    elif key in acc:
        del acc[key]


def classify_contraction(
    full: CableDiagram,
    s: Pairing,
    s_prime: Pairing,
    conventions: Conventions = DEFAULT_CONVENTIONS,
) -> ContractionContext:
    """Forced markers and event classification for one pairing-graph edge."""
    return ContractionContext(full, s, s_prime, conventions)


def build_bicomplex(
    source: FramedLinkDiagram,
    colors: tuple[int, ...],
    conventions: Conventions = DEFAULT_CONVENTIONS,
    cap: int = DEFAULT_STATE_CAP,
) -> Bicomplex:
    """Assemble the bicomplex of a colored diagram (identities not yet checked)."""
    if len(colors) != source.n_components:
        raise ValueError(
            f"color-tuple length {len(colors)} != component count {source.n_components}"
        )
    return Bicomplex(source, colors, conventions, cap)
