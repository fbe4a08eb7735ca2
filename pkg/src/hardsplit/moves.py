"""Reidemeister moves over the raw surgeries.

`surgery` rewires darts; this module decides which rewirings count as
moves (decoration side conditions, emptiness of the swept disk),
enumerates every site available on a diagram, and reads/writes the
one-move-per-line script format.

Enumeration is identical in plane and sphere mode.  The modes differ
only in which diagrams count as equal: sphere equality quotients out the
choice of outer region, so "moves across the outer face" never appear as
extra sites.  Scripts can still record an explicit `ROOT` re-rooting
step - a sphere isotopy, not a Reidemeister move - so a sequence found
on a re-rooted representative stays replayable line by line.
"""

from __future__ import annotations

from typing import NamedTuple

from . import surgery
from .maps import ROOT, SPHERE, Diagram, DiagramError, MoveError

__all__ = [
    "CROSSING_DELTA",
    "MoveSite",
    "MoveSequence",
    "enumerate_moves",
    "apply_move",
    "top_of_sequence",
    "replay",
    "format_move",
    "parse_move",
    "apply_script",
]

#: crossing-count change per move kind
CROSSING_DELTA = {"RI+": 1, "RI-": -1, "RII+": 2, "RII-": -2, "RIII": 0, "ROOT": 0}


class MoveSite(NamedTuple):
    """One applicable move, pinned to the diagram it was enumerated on.

    spot payloads:
        RI+   ("d", dart, over) or ("loop", index, side, over)
        RI-   (petal_dart,)
        RII+  (region, elem_a, elem_b, over, captured, engulfed, order)
        RII-  (bigon_face,)
        RIII  (triangle_face,)
        ROOT  (region,)       sphere re-rooting, never enumerated
    """

    kind: str
    spot: tuple


class MoveSequence(NamedTuple):
    start: Diagram
    steps: tuple


def _rii_decorations_ok(d, fkey):
    f1, q1 = d.face_darts(fkey)
    return d.is_over_dart(f1) != d.is_over_dart(q1)


def _subsets(items):
    out = [()]
    for it in sorted(items):
        out += [s + (it,) for s in out]
    return out


def enumerate_moves(d: Diagram):
    """All applicable move sites, deterministically ordered.

    Complete: every diagram one Reidemeister move away is apply_move of
    some returned site.  Distinct sites may still produce equal diagrams
    (e.g. a poke described from either strand's point of view).
    """
    sites = []
    for x in d.darts():
        for ov in (0, 1):
            sites.append(MoveSite("RI+", ("d", x, ov)))
        if d.hosts[d.island_of[x]][1] == d.face_of[x]:
            # arc on the island's outer face: the lobe can also wrap
            # around the island, putting everything inside the petal
            for ov in (0, 1):
                sites.append(MoveSite("RI+", ("wrap", x, ov)))
    for i in range(len(d.loops)):
        for side in ("out", "in"):
            for ov in (0, 1):
                sites.append(MoveSite("RI+", ("loop", i, side, ov)))

    for p in surgery.petal_darts(d):
        if surgery.swept_face_ok(d, d.face_of[p]):
            sites.append(MoveSite("RI-", (p,)))

    for region in d.region_keys:
        elems = d.region_boundary(region)
        kids = set(d.region_children.get(region, ()))
        for a in elems:
            for b in elems:
                if a[0] == "d" and b[0] == "d" and b[1] == d.theta[a[1]]:
                    continue  # two flanks of one edge: not a site
                parts = set()
                for e in (a, b):
                    parts.add(
                        ("I", d.island_of[e[1]]) if e[0] == "d" else ("L", e[1])
                    )
                split = (a == b) or (
                    a[0] == "d" == b[0] and d.face_of[a[1]] == d.face_of[b[1]]
                )
                if b[0] == "d":
                    far = d.region_of_face(d.face_of[d.theta[b[1]]])
                elif region == ("l", b[1]):
                    far = d.loops[b[1]].host
                else:
                    far = ("l", b[1])
                cap_pool = sorted(kids - parts) if split else []
                eng_pool = sorted(set(d.region_children.get(far, ())) - parts)
                orders = (1, 2) if (a == b and a[0] == "d") else (1,)
                for ov in ("A", "B"):
                    for order in orders:
                        for cap in _subsets(cap_pool):
                            for eng in _subsets(eng_pool):
                                sites.append(
                                    MoveSite(
                                        "RII+", (region, a, b, ov, cap, eng, order)
                                    )
                                )

    for f in surgery.bigon_faces(d):
        if _rii_decorations_ok(d, f) and surgery.swept_face_ok(d, f):
            sites.append(MoveSite("RII-", (f,)))

    for orb in d.faces:
        if len(orb) == 3 and len({x >> 2 for x in orb}) == 3:
            if surgery.triangle_coherent(d, orb[0]) and surgery.swept_face_ok(
                d, orb[0]
            ):
                sites.append(MoveSite("RIII", (orb[0],)))
    return sites


def apply_move(d: Diagram, site) -> Diagram:
    "Apply one site; raises MoveError when the site is stale or illegal."
    kind, spot = site
    if kind == "RI+":
        if spot[0] in ("d", "wrap"):
            _k, x, ov = spot
            return surgery.ri_add(d, (spot[0], x), ov)
        _k, i, side, ov = spot
        return surgery.ri_add(d, ("loop", i, side), ov)
    if kind == "RI-":
        if not 0 <= spot[0] < d.ndart:
            raise MoveError("no dart %r" % (spot[0],))
        return surgery.ri_remove(d, spot[0])
    if kind == "RII+":
        region, a, b, ov, cap, eng, order = spot
        return surgery.rii_add(
            d, region, a, b, ov, captured=cap, engulfed=eng, order=order
        )
    if kind == "RII-":
        (f,) = spot
        if not 0 <= f < d.ndart:
            raise MoveError("no face %r" % (f,))
        orb = d.face_darts(d.face_of[f])
        if (
            len(orb) == 2
            and len({x >> 2 for x in orb}) == 2
            and not _rii_decorations_ok(d, d.face_of[f])
        ):
            raise MoveError("2-gon %r is a clasp, not an over/under bigon" % (f,))
        return surgery.rii_remove(d, f)
    if kind == "RIII":
        (f,) = spot
        if not 0 <= f < d.ndart:
            raise MoveError("no face %r" % (f,))
        orb = d.face_darts(d.face_of[f])
        if (
            len(orb) == 3
            and len({x >> 2 for x in orb}) == 3
            and not surgery.triangle_coherent(d, d.face_of[f])
        ):
            raise MoveError("triangle heights are cyclic; no slide exists")
        return surgery.riii(d, f)
    if kind == "ROOT":
        if d.mode != SPHERE:
            raise MoveError("re-rooting is a move only on the sphere")
        try:
            return d.rerooted(spot[0])
        except DiagramError as e:
            raise MoveError(str(e)) from e
    raise MoveError("unknown move kind %r" % (kind,))


def replay(seq: MoveSequence):
    "Diagrams D^0 .. D^r along the sequence; MoveError names the bad step."
    out = [seq.start]
    for i, s in enumerate(seq.steps):
        try:
            out.append(apply_move(out[-1], s))
        except MoveError as e:
            raise MoveError("step %d: %s" % (i, e)) from e
    return out

def top_of_sequence(seq: MoveSequence) -> int:
    "Largest crossing excess over the start, taken over all prefixes."
    base = seq.start.ncross
    return max(x.ncross - base for x in replay(seq))


# -- script format ---------------------------------------------------
#
#   RI+ dart=5 side=R over=1        RI+ loop=0 side=out over=0
#   RI- crossing=2
#   RII+ dartA=1 dartB=3 over=A     (loopA=/loopB=; order=2, from=far,
#                                    captured=I0,L1 engulfed=... as needed)
#   RII- face=5
#   RIII face=0 variant=0
#   ROOT region=f5                  (also root / l0; sphere scripts only)
#
# Lines refer to the diagram produced by the preceding lines, using its
# dart numbering; `variant` is accepted for symmetry but there is only
# one way to slide a triangle, so it carries no information.


def _fmt_children(refs):
    return ",".join("%s%d" % (kind, ref) for kind, ref in refs)


def format_move(site) -> str:
    kind, spot = site
    if kind == "RI+":
        if spot[0] == "d":
            return "RI+ dart=%d side=R over=%d" % (spot[1], spot[2])
        if spot[0] == "wrap":
            return "RI+ dart=%d side=R over=%d wrap=1" % (spot[1], spot[2])
        return "RI+ loop=%d side=%s over=%d" % (spot[1], spot[2], spot[3])
    if kind == "RI-":
        return "RI- crossing=%d" % (spot[0] >> 2)
    if kind == "RII+":
        region, a, b, ov, cap, eng, order = spot
        toks = []
        for name, e in (("A", a), ("B", b)):
            if e[0] == "d":
                toks.append("dart%s=%d" % (name, e[1]))
            else:
                toks.append("loop%s=%d" % (name, e[1]))
        toks.append("over=%s" % ov)
        if order != 1:
            toks.append("order=%d" % order)
        if a == b and a[0] == "loop" and region == ("l", a[1]):
            toks.append("from=far")
        if cap:
            toks.append("captured=%s" % _fmt_children(cap))
        if eng:
            toks.append("engulfed=%s" % _fmt_children(eng))
        return "RII+ " + " ".join(toks)
    if kind == "RII-":
        return "RII- face=%d" % spot[0]
    if kind == "RIII":
        return "RIII face=%d variant=0" % spot[0]
    if kind == "ROOT":
        (r,) = spot
        return "ROOT region=%s" % ("root" if r == ROOT else "%s%d" % r)
    raise MoveError("unknown move kind %r" % (kind,))


def _parse_children(text):
    out = []
    for tok in text.split(","):
        if len(tok) < 2 or tok[0] not in "IL" or not tok[1:].isdigit():
            raise MoveError("bad content reference %r" % tok)
        out.append((tok[0], int(tok[1:])))
    return tuple(out)


def _kv(parts):
    kv = {}
    for tok in parts:
        k, eq, v = tok.partition("=")
        if not eq or k in kv:
            raise MoveError("bad token %r" % tok)
        kv[k] = v
    return kv


def _take_int(kv, key):
    v = kv.pop(key, None)
    if v is None or not v.lstrip("-").isdigit():
        raise MoveError("missing or bad %s=" % key)
    return int(v)


def parse_move(d: Diagram, line: str) -> MoveSite:
    "Parse one script line against the diagram it will apply to."
    parts = line.split()
    if not parts:
        raise MoveError("empty move line")
    kind, kv = parts[0], _kv(parts[1:])

    if kind == "RI+":
        ov = _take_int(kv, "over")
        if ov not in (0, 1):
            raise MoveError("over must be 0 or 1")
        side = kv.pop("side", None)
        wrap = kv.pop("wrap", "0")
        if wrap not in ("0", "1"):
            raise MoveError("wrap must be 0 or 1")
        if "dart" in kv:
            x = _take_int(kv, "dart")
            if side not in ("L", "R"):
                raise MoveError("side must be L or R")
            if not 0 <= x < d.ndart:
                raise MoveError("no dart %d" % x)
            spot = (
                "wrap" if wrap == "1" else "d",
                x if side == "R" else d.theta[x],
                ov,
            )
        else:
            if wrap == "1":
                raise MoveError("wrap only applies to dart curls")
            i = _take_int(kv, "loop")
            if side not in ("in", "out"):
                raise MoveError("side must be in or out")
            spot = ("loop", i, side, ov)
        site = MoveSite("RI+", spot)

    elif kind == "RI-":
        c = _take_int(kv, "crossing")
        if not 0 <= c < d.ncross:
            raise MoveError("no crossing %d" % c)
        # a crossing with two retractable petals is a lone curl, whose two
        # retractions give the same diagram; the smaller dart stands in
        pets = [
            p
            for p in surgery.petal_darts(d)
            if p >> 2 == c and surgery.swept_face_ok(d, d.face_of[p])
        ]
        if not pets:
            raise MoveError("crossing %d has no retractable petal" % c)
        site = MoveSite("RI-", (pets[0],))

    elif kind == "RII+":
        elems = {}
        for name in ("A", "B"):
            if "dart" + name in kv:
                x = _take_int(kv, "dart" + name)
                if not 0 <= x < d.ndart:
                    raise MoveError("no dart %d" % x)
                elems[name] = ("d", x)
            else:
                i = _take_int(kv, "loop" + name)
                if not 0 <= i < len(d.loops):
                    raise MoveError("no loop %d" % i)
                elems[name] = ("loop", i)
        a, b = elems["A"], elems["B"]
        far_flag = kv.pop("from", None)
        if far_flag not in (None, "far"):
            raise MoveError("from= only takes 'far'")
        region = _site_region(d, a, b, far_flag == "far")
        ov = kv.pop("over", None)
        if ov not in ("A", "B"):
            raise MoveError("over must be A or B")
        order = int(kv.pop("order", 1))
        cap = _parse_children(kv.pop("captured")) if "captured" in kv else ()
        eng = _parse_children(kv.pop("engulfed")) if "engulfed" in kv else ()
        site = MoveSite("RII+", (region, a, b, ov, cap, eng, order))

    elif kind == "RII-":
        f = _take_int(kv, "face")
        if not 0 <= f < d.ndart:
            raise MoveError("no face %d" % f)
        site = MoveSite("RII-", (f,))

    elif kind == "RIII":
        f = _take_int(kv, "face")
        if not 0 <= f < d.ndart:
            raise MoveError("no face %d" % f)
        if kv.pop("variant", "0") not in ("0", "1"):
            raise MoveError("variant must be 0 or 1")
        site = MoveSite("RIII", (f,))

    elif kind == "ROOT":
        tok = kv.pop("region", None)
        if tok == "root":
            region = ROOT
        elif tok and tok[0] in "fl" and tok[1:].isdigit():
            region = (tok[0], int(tok[1:]))
        else:
            raise MoveError("missing or bad region=")
        site = MoveSite("ROOT", (region,))

    else:
        raise MoveError("unknown move kind %r" % kind)

    if kv:
        raise MoveError("unexpected tokens %s" % ", ".join(sorted(kv)))
    return site


def _site_region(d, a, b, from_far):
    "The region a parsed RII+ site pokes through."
    if from_far:
        if a != b or a[0] != "loop":
            raise MoveError("from=far only applies to a circle poked through itself")
        return ("l", a[1])
    for e in (a, b):
        if e[0] == "d":
            return d.region_of_face(d.face_of[e[1]])
    i, j = a[1], b[1]
    if i == j:
        return d.loops[i].host
    cands = {d.loops[i].host, ("l", i)} & {d.loops[j].host, ("l", j)}
    if len(cands) != 1:
        raise MoveError("circles %d and %d bound no common region" % (i, j))
    return cands.pop()


def apply_script(d: Diagram, text: str) -> Diagram:
    "Run a move script; each line sees the numbering of the diagram so far."
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            d = apply_move(d, parse_move(d, line))
        except MoveError as e:
            raise MoveError("line %d: %s" % (ln, e)) from e
    return d
