"""Oriented framed link diagrams as combinatorial planar data.

A diagram is a list of crossings; each crossing records its four incident
arc ends in counterclockwise planar order starting from the incoming
under-strand, plus the slot (1 or 3) at which the over-strand enters.  The
counterclockwise order is a rotation system, so planarity is checkable via
Euler's formula, and the crossing sign is forced by the two orientations:
with the under-strand entering slot 0, the over-strand entering the next
counterclockwise slot (slot 1) makes the crossing positive.

Crossing-free circles ("free loops") carry no arcs and are stored as a
per-component counter.  Framing is blackboard: the diagram is the framing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class DiagramError(ValueError):
    """Invalid diagram data (structure, orientation, or planarity)."""


class ParseError(DiagramError):
    """Malformed input document; carries a human-readable position."""


@dataclass(frozen=True)
class Crossing:
    """One crossing: arc labels counterclockwise from the incoming under-strand."""

    ends: tuple[int, int, int, int]
    over_in: int  # slot (1 or 3) where the over-strand enters

    def __post_init__(self):
        if self.over_in not in (1, 3):
            raise DiagramError(f"over_in must be 1 or 3, got {self.over_in}")

    @property
    def sign(self) -> int:
        # Under-strand runs slot0 -> slot2.  Rotating its direction counter-
        # clockwise by 90 degrees points along slot1 -> slot3; the crossing is
        # positive exactly when the over-strand runs that way.
        return 1 if self.over_in == 1 else -1

    @property
    def over_out(self) -> int:
        return (self.over_in + 2) % 4

    def incoming_slots(self) -> tuple[int, int]:
        return (0, self.over_in)

    def outgoing_slots(self) -> tuple[int, int]:
        return (2, self.over_out)

    def continuation(self, slot_in: int) -> int:
        """Outgoing slot of the strand that enters at ``slot_in``."""
        if slot_in == 0:
            return 2
        if slot_in == self.over_in:
            return self.over_out
        raise DiagramError(f"slot {slot_in} is not an incoming slot")


class FramedLinkDiagram:
    """Validated oriented framed link diagram.  Immutable after construction."""

    __slots__ = (
        "crossings",
        "n_components",
        "free_loops",
        "base_edges",
        "arcs",
        "arc_component",
        "_arc_head",
        "_arc_tail",
        "_component_cycles",
    )

    def __init__(
        self,
        crossings: tuple[Crossing, ...],
        n_components: int,
        free_loops: tuple[int, ...],
        base_edges: tuple[int | None, ...],
    ):
        self.crossings = tuple(crossings)
        self.n_components = n_components
        self.free_loops = tuple(free_loops)
        self.base_edges = tuple(base_edges)
        self._validate()

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        crossings,
        n_components: int | None = None,
        free_loops=None,
        base_edges=None,
    ) -> "FramedLinkDiagram":
        """Build from raw crossing data, deriving defaults.

        ``crossings`` is an iterable of (ends, over_in) pairs or Crossing
        objects.  If counts are omitted they are derived: one component per
        arc orbit, no free loops.
        """
        xs = tuple(c if isinstance(c, Crossing) else Crossing(tuple(c[0]), c[1]) for c in crossings)
        orbits = _arc_orbits(xs)
        n_arc_components = len(orbits)
        if free_loops is None:
            if n_components is None:
                n_components = n_arc_components
            free_loops = tuple([0] * n_arc_components + [1] * (n_components - n_arc_components))
        else:
            free_loops = tuple(free_loops)
            if n_components is None:
                n_components = len(free_loops)
        if base_edges is None:
            base_edges = [None] * n_components
        return cls(xs, n_components, free_loops, tuple(base_edges))

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        if self.n_components < 0:
            raise DiagramError("negative component count")
        if len(self.free_loops) != self.n_components:
            raise DiagramError("free_loops length must equal the component count")
        if len(self.base_edges) != self.n_components:
            raise DiagramError("base_edges length must equal the component count")

        incoming: dict[int, list[tuple[int, int]]] = {}
        outgoing: dict[int, list[tuple[int, int]]] = {}
        occurrences: dict[int, int] = {}
        for ci, x in enumerate(self.crossings):
            if len(x.ends) != 4:
                raise DiagramError(f"crossing {ci} does not have 4 arc ends")
            for slot, arc in enumerate(x.ends):
                occurrences[arc] = occurrences.get(arc, 0) + 1
                if slot in x.incoming_slots():
                    incoming.setdefault(arc, []).append((ci, slot))
                else:
                    outgoing.setdefault(arc, []).append((ci, slot))
        for arc, n in occurrences.items():
            if n != 2:
                raise DiagramError(f"arc multiplicity: arc {arc} appears {n} times (expected 2)")
        for arc in occurrences:
            n_in = len(incoming.get(arc, ()))
            n_out = len(outgoing.get(arc, ()))
            if n_in != 1 or n_out != 1:
                raise DiagramError(
                    f"orientation inconsistency: arc {arc} has {n_in} incoming and {n_out} outgoing ends"
                )
        self.arcs = tuple(sorted(occurrences))
        self._arc_head = {a: incoming[a][0] for a in occurrences}
        self._arc_tail = {a: outgoing[a][0] for a in occurrences}

        cycles = _arc_orbits(self.crossings)
        arc_component: dict[int, int] = {}
        loop_component_slots = [c for c in range(self.n_components) if self.free_loops[c] > 0]
        arc_component_slots = [c for c in range(self.n_components) if self.free_loops[c] == 0]
        if len(arc_component_slots) != len(cycles):
            raise DiagramError(
                f"component count mismatch: {len(cycles)} arc components traced, "
                f"{len(arc_component_slots)} declared (free-loop components excluded)"
            )
        for slot, cycle in zip(arc_component_slots, cycles):
            for a in cycle:
                arc_component[a] = slot
        for c in loop_component_slots:
            if self.free_loops[c] != 1:
                raise DiagramError(
                    f"component {c}: a free-loop component is exactly one circle "
                    f"(free_loops={self.free_loops[c]})"
                )
        self.arc_component = arc_component
        self._component_cycles = {
            slot: tuple(cycle) for slot, cycle in zip(arc_component_slots, cycles)
        }

        for c, base in enumerate(self.base_edges):
            if base is not None:
                if base not in arc_component or arc_component[base] != c:
                    raise DiagramError(f"base edge {base} does not lie on component {c}")

        self._check_planarity()

    def _check_planarity(self) -> None:
        """Euler check V - E + F = 2 on every connected piece of the 4-valent graph."""
        n = len(self.crossings)
        if n == 0:
            return
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        arc_ends: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for slot, arc in enumerate(x.ends):
                arc_ends.setdefault(arc, []).append((ci, slot))
        for ends in arc_ends.values():
            ra, rb = find(ends[0][0]), find(ends[1][0])
            if ra != rb:
                parent[ra] = rb

        faces = self.faces()
        v_count: dict[int, int] = {}
        e_count: dict[int, int] = {}
        f_count: dict[int, int] = {}
        for ci in range(n):
            r = find(ci)
            v_count[r] = v_count.get(r, 0) + 1
        for arc, ends in arc_ends.items():
            r = find(ends[0][0])
            e_count[r] = e_count.get(r, 0) + 1
        for face in faces:
            r = find(face[0][0])
            f_count[r] = f_count.get(r, 0) + 1
        for r in v_count:
            euler = v_count[r] - e_count.get(r, 0) + f_count.get(r, 0)
            if euler != 2:
                raise DiagramError(
                    f"non-planar rotation data: connected piece has V-E+F = {euler} (expected 2)"
                )

    # -- structure ---------------------------------------------------------

    def faces(self) -> list[tuple[tuple[int, int], ...]]:
        """Faces of the rotation system as orbits of darts (crossing, slot).

        The face walk maps a dart to the counterclockwise-next slot at the
        far end of its arc; orbit count feeds the Euler-formula check.
        """
        other_end: dict[tuple[int, int], tuple[int, int]] = {}
        arc_ends: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for slot, arc in enumerate(x.ends):
                arc_ends.setdefault(arc, []).append((ci, slot))
        for ends in arc_ends.values():
            (p, q) = ends
            other_end[p] = q
            other_end[q] = p
        seen: set[tuple[int, int]] = set()
        faces = []
        for start in sorted(other_end):
            if start in seen:
                continue
            face = []
            d = start
            while d not in seen:
                seen.add(d)
                face.append(d)
                ci, slot = other_end[d]
                d = (ci, (slot + 1) % 4)
            faces.append(tuple(face))
        return faces

    def arc_head(self, arc: int) -> tuple[int, int]:
        """(crossing, slot) where the arc points into a crossing."""
        return self._arc_head[arc]

    def arc_tail(self, arc: int) -> tuple[int, int]:
        """(crossing, slot) where the arc leaves a crossing."""
        return self._arc_tail[arc]

    def next_arc(self, arc: int) -> int:
        """The arc continuing ``arc`` through the crossing at its head."""
        ci, slot = self._arc_head[arc]
        x = self.crossings[ci]
        return x.ends[x.continuation(slot)]

    def component_cycle(self, component: int) -> tuple[int, ...]:
        """Arcs of a component in orientation order, starting at its base edge."""
        if self.free_loops[component]:
            return ()
        cycle = self._component_cycles[component]
        base = self.base_edges[component]
        if base is None:
            base = min(cycle)
        i = cycle.index(base)
        return cycle[i:] + cycle[:i]

    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def is_empty(self) -> bool:
        return self.n_components == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FramedLinkDiagram)
            and self.crossings == other.crossings
            and self.n_components == other.n_components
            and self.free_loops == other.free_loops
            and self.base_edges == other.base_edges
        )

    def __repr__(self) -> str:
        return (
            f"FramedLinkDiagram({self.n_crossings} crossings, {self.n_components} components, "
            f"writhe {self.writhe()})"
        )

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "components": self.n_components,
            "crossings": [[*x.ends, x.sign] for x in self.crossings],
            "orientations": [x.over_in for x in self.crossings],
            "base_edges": [b for b in self.base_edges],
            "free_loops": list(self.free_loops),
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"


def _arc_orbits(crossings: tuple[Crossing, ...]) -> list[list[int]]:
    """Oriented arc cycles (components), ordered by smallest arc label."""
    head: dict[int, tuple[int, int]] = {}
    for ci, x in enumerate(crossings):
        for slot in x.incoming_slots():
            arc = x.ends[slot]
            if arc in head:
                # Leave full reporting to _validate; a duplicate here would
                # only corrupt orbit tracing.
                raise DiagramError(f"orientation inconsistency: arc {arc} enters two crossings")
            head[arc] = (ci, slot)
    cycles = []
    seen: set[int] = set()
    for start in sorted(head):
        if start in seen:
            continue
        cycle = []
        a = start
        while a not in seen:
            seen.add(a)
            cycle.append(a)
            ci, slot = head[a]
            x = crossings[ci]
            a = x.ends[x.continuation(slot)]
        cycles.append(cycle)
    return cycles


def parse_diagram(text: str) -> FramedLinkDiagram:
    """Parse the PD-code JSON document into a validated diagram.

    Grammar (all unlisted keys rejected):
      components   integer >= 0
      crossings    list of [a, b, c, d] or [a, b, c, d, sign]; arc-end labels
                   counterclockwise starting from the incoming under-strand
      orientations list of 1 | 3 per crossing: the slot at which the
                   over-strand enters
      base_edges   optional list (arc label or null) per component
      free_loops   optional list of counts per component
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    allowed = {"components", "crossings", "orientations", "base_edges", "free_loops"}
    unknown = set(data) - allowed
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    for key in ("components", "crossings", "orientations"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
    raw_crossings = data["crossings"]
    orientations = data["orientations"]
    if not isinstance(raw_crossings, list) or not isinstance(orientations, list):
        raise ParseError("crossings and orientations must be lists")
    if len(raw_crossings) != len(orientations):
        raise ParseError("orientations length must match crossings length")
    crossings = []
    for idx, (raw, over_in) in enumerate(zip(raw_crossings, orientations)):
        if not isinstance(raw, list) or len(raw) not in (4, 5):
            raise ParseError(f"crossing {idx}: expected [a,b,c,d] or [a,b,c,d,sign]")
        ends = tuple(raw[:4])
        if not all(isinstance(e, int) for e in ends):
            raise ParseError(f"crossing {idx}: arc labels must be integers")
        if over_in not in (1, 3):
            raise ParseError(f"crossing {idx}: orientation must be slot 1 or 3")
        x = Crossing(ends, over_in)
        if len(raw) == 5 and raw[4] != x.sign:
            raise DiagramError(
                f"crossing {idx}: declared sign {raw[4]} contradicts orientations (derived {x.sign})"
            )
        crossings.append(x)
    n_components = data["components"]
    free_loops = data.get("free_loops")
    base_edges = data.get("base_edges")
    if free_loops is None:
        free_loops = [0] * n_components
    if base_edges is None:
        base_edges = [None] * n_components
    return FramedLinkDiagram(tuple(crossings), n_components, tuple(free_loops), tuple(base_edges))
