"""Development harness: solve the chain-map equations of one pairing edge.

For a candidate forced-marker assignment, the per-edge chain map phi is
supported on the forced pattern and its event flips.  Treating every phi
value (a vector over target enhanced states) as an unknown and fixing only
the normalization phi(forced, all-plus) = +(all-plus target), this sets up
the exact linear system phi . d = d . phi and reports solvability.  Used to
pin the bridge-side conventions; not part of the package API.
"""

from __future__ import annotations

import itertools
import sys
from collections import defaultdict
from fractions import Fraction

sys.path.insert(0, "src")

import khovacable.bicomplex as bx
from khovacable.braid import braid_closure
from khovacable.conventions import Conventions
from khovacable.diagram import FramedLinkDiagram


def edge_system_solvable(diagram, colors, edge_index=0, side_of=None, verbose=False):
    """side_of: callable(evt) -> 'before' | 'after' for a-events."""
    if side_of is not None:
        bx.A_SIDE_HOOK = lambda ctx, evt, chosen, behind, ahead: side_of(evt)
    b = bx.Bicomplex(diagram, colors, Conventions())
    edge = b.edges[0][edge_index]
    ctx, amap = edge.ctx, edge.map
    k = edge.k
    cube_s = b.columns[k][edge.src].cube
    cube_t = b.columns[k + 1][edge.dst].cube
    forced = amap.forced_mask
    nc = cube_s.diagram.n_crossings
    pats = {forced}
    for evt in ctx.events.values():
        pats.add(forced ^ ((1 << evt.crossing_a) | (1 << evt.crossing_b)))
    targets = [
        (m, s) for m, sm in enumerate(cube_t.smoothings) for s in range(1 << sm.n_circles)
    ]
    tidx = {t: i for i, t in enumerate(targets)}
    NT = len(targets)
    non_p = [i for i in range(nc) if not (amap.p_mask >> i) & 1]
    unknown_states = []
    for pm in pats:
        for rest in range(1 << len(non_p)):
            mask = pm
            for pos, i in enumerate(non_p):
                if (rest >> pos) & 1:
                    mask |= 1 << i
            for smask in range(1 << cube_s.smoothings[mask].n_circles):
                unknown_states.append((mask, smask))
    uidx = {u: i for i, u in enumerate(unknown_states)}
    eqs = []
    maskset = set()
    for pm in pats:
        for flips in itertools.chain(
            [()], itertools.combinations(range(nc), 1), itertools.combinations(range(nc), 2)
        ):
            m = pm
            for f in flips:
                m ^= 1 << f
            maskset.add(m)
    for mask in maskset:
        for smask in range(1 << cube_s.smoothings[mask].n_circles):
            lhs_vars = defaultdict(int)
            any_support = (mask, smask) in uidx
            for m2, s2, c in cube_s.differential(mask, smask):
                if (m2, s2) in uidx:
                    lhs_vars[uidx[(m2, s2)]] += c
                    any_support = True
            if not any_support:
                continue
            dmat = defaultdict(int)
            i0 = uidx.get((mask, smask))
            if i0 is not None:
                for t0 in range(NT):
                    for m2, s2, c in cube_t.differential(*targets[t0]):
                        dmat[(tidx[(m2, s2)], t0)] += c
            for T in range(NT):
                row = {}
                for i, cf in lhs_vars.items():
                    if cf:
                        row[(i, T)] = row.get((i, T), 0) + cf
                if i0 is not None:
                    for (TT, t0), c in dmat.items():
                        if TT == T:
                            row[(i0, t0)] = row.get((i0, t0), 0) - c
                row = {kk: v for kk, v in row.items() if v}
                if row:
                    eqs.append(row)
    vars_list = sorted({v for row in eqs for v in row})
    r = amap.evaluate(forced, 0)
    if r is None:
        return False, "normalization state evaluates to zero"
    norm_var = (uidx[(forced, 0)], tidx[(r[0], r[1])])
    if norm_var not in set(vars_list):
        vars_list.append(norm_var)
    vpos = {v: i for i, v in enumerate(vars_list)}
    NVAR = len(vars_list)
    mat = []
    for row in eqs:
        rr_ = [Fraction(0)] * (NVAR + 1)
        for v, c in row.items():
            rr_[vpos[v]] = Fraction(c)
        mat.append(rr_)
    extra = [Fraction(0)] * (NVAR + 1)
    extra[vpos[norm_var]] = Fraction(1)
    extra[NVAR] = Fraction(1)
    mat.append(extra)
    rr = 0
    for col in range(NVAR):
        piv = next((i for i in range(rr, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rr], mat[piv] = mat[piv], mat[rr]
        inv = 1 / mat[rr][col]
        mat[rr] = [x * inv for x in mat[rr]]
        for i in range(len(mat)):
            if i != rr and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * bb for a, bb in zip(mat[i], mat[rr])]
        rr += 1
    bad = any(
        all(x == 0 for x in row[:NVAR]) and row[NVAR] != 0 for row in mat
    )
    return (not bad), f"vars={NVAR} rank={rr} free={NVAR - rr}"


def main():
    hopf = braid_closure([1, 1], 2)
    print("hopf (2,1) edge, all a-side combos:")
    # events keyed by site: assign side per site index
    for s0 in ("before", "after"):
        for s1 in ("before", "after"):
            ok, info = edge_system_solvable(
                hopf, (2, 1), side_of=lambda evt, s0=s0, s1=s1: s0 if evt.site == 0 else s1
            )
            print(f"  site0={s0} site1={s1}: solvable={ok} ({info})")


if __name__ == "__main__":
    main()
