"""Trace replay and resolution graphs for a curve swept over a tangle.

A trace holds a marked overlay -- one diagram containing a closed shadow
curve labelled ``U`` together with a decorated background tangle -- and a
sequence of move events tagged by whose strands they touch: ``C`` events
move the curve across itself, ``M`` events move the background only, and
``X`` events slide the curve over background strands.  Replaying the
events yields the layer states; smoothing every curve self-crossing in
each of its two planar ways and keeping the connected outcomes gives the
resolution vertices.  Consecutive layers are joined by the local moves
M1, M2a, M3a, M3b at the event site, and M2b pairs rival smoothings
inside a layer next to an R2 event.  A walk through that graph trades
the self-touching sweep for a motion of simple curves whose crossing
count against the background never exceeds the trace's own peak.

Edge existence is decided by tracing the smoothed strands through the
event site and comparing the induced boundary matchings; no case tables
are consulted.  The classical corner-parity rule is still evaluated, but
only to name each edge and to cross-check the traced matchings.
"""

from collections import deque
from itertools import combinations, product
from typing import NamedTuple

from . import moves, pdio, surgery
from .maps import Diagram, DiagramError, MoveError, PLANE, opp

__all__ = [
    "TraceError",
    "ResolutionError",
    "ShadowOverlay",
    "TraceEvent",
    "Trace",
    "parse_trace",
    "Resolution",
    "GraphEdge",
    "ResolutionGraph",
    "enumerate_resolutions",
    "build_resolution_graph",
    "IsotopyPath",
    "find_isotopy_path",
    "VerifyResult",
    "verify_isotopy",
]


class TraceError(Exception):
    "Malformed trace text, or an event its own diagram cannot absorb."


class ResolutionError(Exception):
    "A structural invariant of the resolution calculus failed to hold."


# -- overlays --------------------------------------------------------

U_LABEL = "U"


def _normalized(d):
    # the sweep curve has no over/under, so every crossing it passes
    # keeps height bit 0; this makes replayed states canonical no matter
    # what the event scripts spelled
    over = list(d.over)
    touched = False
    for c in range(d.ncross):
        la, lb = d.strandpair_labels(c)
        if U_LABEL in (la, lb) and over[c]:
            over[c] = 0
            touched = True
    if not touched:
        return d
    return Diagram(
        d.mode, d.theta, over, d.labels, [(lp.label, lp.host) for lp in d.loops], d.hosts
    )


class ShadowOverlay:
    """One diagram holding the sweep curve (labelled ``U``) and the tangle.

    The curve is a closed shadow: it has no over/under against itself or
    against tangle strands.  Tangle self-crossings keep their real
    decorations.  The discrete length of the curve is its number of
    crossings with the tangle.
    """

    __slots__ = ("diagram", "u_self_ids", "mixed", "m_self", "u_darts")

    def __init__(self, diagram):
        stranded = [i for i, lab in enumerate(diagram.labels) if lab == U_LABEL]
        looped = [i for i, lp in enumerate(diagram.loops) if lp.label == U_LABEL]
        if len(stranded) + len(looped) != 1:
            raise TraceError(
                "the overlay needs exactly one component labelled %r, found %d"
                % (U_LABEL, len(stranded) + len(looped))
            )
        diagram = _normalized(diagram)
        self.diagram = diagram

        uu = []
        um = mm = 0
        for c in range(diagram.ncross):
            la, lb = diagram.strandpair_labels(c)
            k = (la == U_LABEL) + (lb == U_LABEL)
            if k == 2:
                uu.append(c)
            elif k == 1:
                um += 1
            else:
                mm += 1
        self.u_self_ids = tuple(uu)
        self.mixed = um
        self.m_self = mm
        if stranded:
            comp = stranded[0]
            self.u_darts = tuple(
                x for x in diagram.darts() if diagram.comp_of[x] == comp
            )
        else:
            self.u_darts = ()

    @property
    def length(self):
        "Crossings between the curve and the tangle."
        return self.mixed

    @property
    def is_simple(self):
        return not self.u_self_ids

    @property
    def counts(self):
        "(curve self, curve-tangle, tangle self) crossing counts."
        return (len(self.u_self_ids), self.mixed, self.m_self)


# -- trace text ------------------------------------------------------
#
#   OVERLAY X c0 E0 E1 E2 E3; C U E0 E1 E2 E3; F E0:E3
#   C R2+ dartA=0 dartB=2          # curve-only event: site strands all U
#   M RII- face=5                  # tangle-only event
#   X RIII face=2                  # the curve slides over tangle strands
#
# The OVERLAY payload is the PD text of `pdio` with ";" standing in for
# line breaks; exactly one component must be labelled U.  C events use
# the move-script site spellings of `moves` with the curve's shadow
# names R1+/R1-/R2+/R2-/R3 and no decoration tokens (heights are
# implied).  M and X events carry full script lines.  Every line sees
# the numbering of the diagram produced by the lines before it, and
# "#" starts a comment.

_C_KINDS = {
    "R1+": "RI+",
    "R1-": "RI-",
    "R2+": "RII+",
    "R2-": "RII-",
    "R3": "RIII",
}


class TraceEvent(NamedTuple):
    tag: str  # C, M, or X
    kind: str  # script kind: RI+, RI-, RII+, RII-, RIII, ROOT
    site: moves.MoveSite
    text: str  # source line, kept verbatim for replay reports


class Trace:
    """A parsed and fully replayed event trace.

    ``states[i]`` is the overlay after the first ``i`` events.  Layer
    times are derived: the first layer is the start, each further layer
    sits immediately after one curve-only event, and the last layer is
    the end of the trace.  Everything here is immutable after parse, so
    distinct traces can be processed concurrently.
    """

    __slots__ = ("events", "states", "sigmas", "c_events", "layer_pos")

    def __init__(self, events, states, sigmas):
        self.events = tuple(events)
        self.states = tuple(states)
        self.sigmas = tuple(sigmas)
        cs = tuple(i for i, ev in enumerate(self.events) if ev.tag == "C")
        self.c_events = cs
        if cs:
            self.layer_pos = (
                (0,)
                + tuple(cs[j - 1] + 1 for j in range(1, len(cs)))
                + (len(self.events),)
            )
        else:
            self.layer_pos = (len(self.events),)

    @property
    def overlay(self):
        return self.states[0]

    @property
    def nlayers(self):
        return len(self.layer_pos)

    def layer_state(self, j) -> ShadowOverlay:
        return self.states[self.layer_pos[j]]


def _site_strand_labels(d, site):
    "Labels of the strands a parsed site touches, duplicates kept."
    kind, spot = site
    if kind == "RI+":
        if spot[0] == "loop":
            return (d.loops[spot[1]].label,)
        return (d.label_of_dart(spot[1]),)
    if kind == "RI-":
        return (d.label_of_dart(spot[0]),)
    if kind == "RII+":
        out = []
        for e in (spot[1], spot[2]):
            out.append(d.loops[e[1]].label if e[0] == "loop" else d.label_of_dart(e[1]))
        return tuple(out)
    if kind in ("RII-", "RIII"):
        want = 2 if kind == "RII-" else 3
        orb = d.face_darts(d.face_of[spot[0]])
        if len(orb) != want or len({x >> 2 for x in orb}) != want:
            raise MoveError(
                "face %r is not a %s"
                % (spot[0], "two-crossing bigon" if want == 2 else "three-crossing triangle")
            )
        return tuple(d.label_of_dart(x) for x in orb)
    return ()  # ROOT touches no strands


def _check_tag(tag, labels):
    if tag == "C":
        if not labels or any(lab != U_LABEL for lab in labels):
            raise TraceError(
                "a C event may only touch the sweep curve; site strands are %r"
                % (labels,)
            )
    elif tag == "M":
        if U_LABEL in labels:
            raise TraceError("an M event may not touch the sweep curve")
    else:
        if U_LABEL not in labels or all(lab == U_LABEL for lab in labels):
            raise TraceError(
                "an X event must touch both the sweep curve and the tangle;"
                " site strands are %r" % (labels,)
            )


def _apply_event(d, tag, site):
    kind = site.kind
    if tag != "M" and kind == "RII-":
        # curve bigons carry no heights, so the clasp veto of the
        # decorated calculus does not apply
        return surgery.rii_remove(d, site.spot[0])
    if tag != "M" and kind == "RIII":
        # likewise the height-order veto: the curve slides freely
        return surgery.riii(d, site.spot[0])
    return moves.apply_move(d, site)


def _removed_crossings(d, site):
    kind = site.kind
    if kind == "RI-":
        return (site.spot[0] >> 2,)
    if kind == "RII-":
        orb = d.face_darts(d.face_of[site.spot[0]])
        return tuple(sorted({x >> 2 for x in orb}))
    return ()


def _packdown(ncross, removed):
    out, j = [], 0
    for c in range(ncross):
        if c in removed:
            out.append(None)
        else:
            out.append(j)
            j += 1
    return tuple(out)


def parse_trace(text, mode=PLANE) -> Trace:
    """Parse trace text and eagerly replay every event.

    Raises TraceError for grammar problems and for events the diagram at
    that point cannot absorb; the message carries the line number.
    Layer times are derived from the event tags, never read from the
    text, so they cannot be inconsistent.
    """
    overlay = None
    events, states, sigmas = [], [], []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if overlay is None:
            if head != "OVERLAY":
                raise TraceError("line %d: trace must open with an OVERLAY line" % ln)
            try:
                pd = pdio.parse_pd(rest.replace(";", "\n"), mode=mode)
                overlay = ShadowOverlay(pd.diagram.check())
            except (DiagramError, TraceError) as e:
                raise TraceError("line %d: %s" % (ln, e)) from e
            states.append(overlay)
            continue
        if head not in ("C", "M", "X"):
            raise TraceError(
                "line %d: events are tagged C, M, or X, not %r" % (ln, head)
            )
        d = states[-1].diagram
        try:
            site = _parse_event_site(d, head, rest)
            _check_tag(head, _site_strand_labels(d, site))
            new = _apply_event(d, head, site)
            removed = _removed_crossings(d, site)
            state = ShadowOverlay(new)
        except (MoveError, DiagramError, TraceError) as e:
            raise TraceError("line %d: %s" % (ln, e)) from e
        events.append(TraceEvent(head, site.kind, site, line))
        states.append(state)
        sigmas.append(_packdown(d.ncross, set(removed)) if removed else None)
    if overlay is None:
        raise TraceError("empty trace: an OVERLAY line is required")
    return Trace(events, states, sigmas)


def _parse_event_site(d, tag, rest):
    if tag != "C":
        return moves.parse_move(d, rest)
    kind, _, body = rest.partition(" ")
    if kind not in _C_KINDS:
        raise TraceError(
            "C events are R1+, R1-, R2+, R2-, or R3, not %r" % (kind,)
        )
    toks = body.split()
    if any(t.partition("=")[0] == "over" for t in toks):
        raise TraceError("the sweep curve carries no over/under; drop over=")
    toks.insert(0, _C_KINDS[kind])
    if kind == "R1+":
        toks.append("over=0")
    elif kind == "R2+":
        toks.append("over=A")
    return moves.parse_move(d, " ".join(toks))


# -- resolutions -----------------------------------------------------
#
# A self-crossing of the curve is smoothed by pairing its four ports
# either as {0,1}{2,3} (port ^ 1) or as {1,2}{3,0} (port ^ 3); ^ 2 is
# the untouched through-passage.  A smoothing assignment resolves the
# curve into disjoint circles; the resolutions are the assignments that
# leave a single circle.


class Resolution(NamedTuple):
    layer: int
    assignment: tuple  # ((crossing, mask), ...) sorted, mask 1 or 3


def _resolved_components(overlay, masks):
    "Circles left by smoothing; `masks` maps curve self-crossings to 1 or 3."
    darts = overlay.u_darts
    if not darts:
        return 1  # a bare loop
    theta = overlay.diagram.theta
    seen = set()
    orbits = 0
    for d0 in darts:
        if d0 in seen:
            continue
        orbits += 1
        x = d0
        while True:
            seen.add(x)
            y = theta[x]
            x = y ^ masks.get(y >> 2, 2)
            if x == d0:
                break
    if orbits & 1:
        raise ResolutionError("odd directed orbit count %d" % orbits)
    return orbits // 2


def enumerate_resolutions(overlay: ShadowOverlay):
    """All connected smoothings of the curve, sorted by assignment.

    Each result is a ((crossing, mask), ...) tuple over the curve's
    self-crossings; the smoothed curve is a single simple circle whose
    length still equals the overlay's curve-tangle crossing count.
    """
    ids = overlay.u_self_ids
    out = []
    for picks in product((1, 3), repeat=len(ids)):
        if _resolved_components(overlay, dict(zip(ids, picks))) == 1:
            out.append(tuple(zip(ids, picks)))
    return tuple(out)


# -- site matchings --------------------------------------------------


def _leg_matching(d, site, masks, internal):
    """Boundary trace of a smoothed event site.

    `site` is the set of crossings inside the event disk, `internal` the
    darts of edges interior to it, and `masks` the port pairing at each
    site crossing (1 or 3 a smoothing, 2 passes through).  The remaining
    ports are legs.  Returns (pairing, cycles): which legs the smoothed
    strands connect to each other, and how many closed strands never
    reach a leg.  Two site assignments produce the same curve exactly
    when these agree — legs compared across a move must first be carried
    to a common naming.
    """
    theta = d.theta
    ports = [x for c in sorted(site) for x in range(4 * c, 4 * c + 4)]
    legs = set(p for p in ports if p not in internal)
    seen = set()
    pairs = []
    for p in ports:
        if p in seen or p not in legs:
            continue
        seen.add(p)
        x = p
        while True:
            z = x ^ masks[x >> 2]
            seen.add(z)
            if z in legs:
                break
            x = theta[z]
            seen.add(x)
        pairs.append(frozenset((p, z)))
    cycles = 0
    for p in ports:
        if p in seen:
            continue
        cycles += 1
        x = p
        while x not in seen:
            seen.add(x)
            z = x ^ masks[x >> 2]
            seen.add(z)
            x = theta[z]
    return frozenset(pairs), cycles


def _face_internal_darts(d, orb):
    "Darts of the edges carrying a face orbit (the site's interior edges)."
    darts = set()
    for x in orb:
        darts.add(x)
        darts.add(d.theta[x])
    return darts


def _corner_masks(orb):
    # a face-orbit dart at slot s spans the corner ports {s-1, s}; the
    # smoothing that rounds that corner is ^1 when s is odd, ^3 when s
    # is even.  Used only to name edges and audit the traced matchings.
    return {x >> 2: (1 if x & 1 else 3) for x in orb}


# -- the graph -------------------------------------------------------


class GraphEdge(NamedTuple):
    move: str  # M1, M2a, M2b, M3a, or M3b
    a: tuple  # (layer, index), a < b
    b: tuple


class ResolutionGraph:
    """Resolutions per layer, joined by the local moves."""

    __slots__ = ("trace", "layers", "edges", "_adj")

    def __init__(self, trace, layers, edges):
        self.trace = trace
        self.layers = layers
        self.edges = edges
        adj = {}
        for i, e in enumerate(edges):
            adj.setdefault(e.a, []).append((e.b, i))
            adj.setdefault(e.b, []).append((e.a, i))
        self._adj = {v: tuple(nb) for v, nb in adj.items()}

    @property
    def nlayers(self):
        return len(self.layers)

    def vertex(self, ref) -> Resolution:
        return self.layers[ref[0]][ref[1]]

    def neighbors(self, ref):
        "((other, edge index), ...) in deterministic edge order."
        return self._adj.get(ref, ())

    def degree(self, ref):
        return len(self._adj.get(ref, ()))

    def degree_sequences(self):
        "Per layer, the sorted vertex degrees."
        return tuple(
            tuple(sorted(self.degree((j, i)) for i in range(len(layer))))
            for j, layer in enumerate(self.layers)
        )


def build_resolution_graph(trace: Trace) -> ResolutionGraph:
    """Vertices are the connected resolutions of each layer state; edges
    join smoothings that trace to the same curve across one curve event
    (M1/M2a/M3a/M3b) or at a rival bigon smoothing in place (M2b).

    Raises ResolutionError if the built graph breaks the parity rule:
    every vertex outside the first and last layers must have degree 2,
    4, or 6.
    """
    layers = []
    for j in range(trace.nlayers):
        asgs = enumerate_resolutions(trace.layer_state(j))
        layers.append(tuple(Resolution(j, a) for a in asgs))
    layers = tuple(layers)

    edges = []
    for j in range(trace.nlayers - 1):
        edges.extend(_transition_edges(trace, j, layers))
    edges.sort()
    graph = ResolutionGraph(trace, layers, tuple(edges))

    deg = {}
    for e in graph.edges:
        deg[e.a] = deg.get(e.a, 0) + 1
        deg[e.b] = deg.get(e.b, 0) + 1
    for lj in range(1, graph.nlayers - 1):
        for i in range(len(layers[lj])):
            k = deg.get((lj, i), 0)
            if k not in (2, 4, 6):
                raise ResolutionError(
                    "vertex %r in internal layer has degree %d" % ((lj, i), k)
                )
    return graph


def _compose_sigma(x, sigmas):
    for s in sigmas:
        if s is not None and x is not None:
            x = s[x]
    return x


def _transition_edges(trace, j, layers):
    p0, p1 = trace.layer_pos[j], trace.layer_pos[j + 1]
    gs = [i for i in range(p0, p1) if trace.events[i].tag == "C"]
    if len(gs) != 1:
        raise ResolutionError("layer gap %d holds %d curve events" % (j, len(gs)))
    g = gs[0]
    ev = trace.events[g]
    pre = trace.states[g].diagram  # at event time
    post = trace.states[g + 1].diagram

    # crossing identities: layer j ids -> event time (f1, a bijection on
    # curve self-crossings, since only C events make or break them), and
    # event time -> layer j+1 (f2)
    f1 = {c: _compose_sigma(c, trace.sigmas[p0:g]) for c in trace.layer_state(j).u_self_ids}
    inv_f1 = {v: k for k, v in f1.items()}

    def f2(x):
        x = _compose_sigma(x, trace.sigmas[g + 1 : p1])
        if x is None:
            raise ResolutionError("a curve self-crossing vanished outside a C event")
        return x

    kind = ev.kind
    if kind == "RI+":
        n = pre.ncross
        orb = [x for x in surgery.petal_darts(post) if x >> 2 == n]
        site_pre, site_post = (), (n,)
        walk_d, walk_site = post, (n,)
        internal = _face_internal_darts(post, orb)
        corners = _corner_masks(orb)
        move = "M1"
    elif kind == "RI-":
        c = ev.site.spot[0] >> 2
        orb = [ev.site.spot[0]]
        site_pre, site_post = (c,), ()
        walk_d, walk_site = pre, (c,)
        internal = _face_internal_darts(pre, orb)
        corners = _corner_masks(orb)
        move = "M1"
    elif kind == "RII+":
        n = pre.ncross
        orb = _fresh_bigon(post, n)
        site_pre, site_post = (), (n, n + 1)
        walk_d, walk_site = post, (n, n + 1)
        internal = _face_internal_darts(post, orb)
        corners = _corner_masks(orb)
        move = "M2a"
    elif kind == "RII-":
        orb = pre.face_darts(pre.face_of[ev.site.spot[0]])
        cs = tuple(sorted({x >> 2 for x in orb}))
        site_pre, site_post = cs, ()
        walk_d, walk_site = pre, cs
        internal = _face_internal_darts(pre, orb)
        corners = _corner_masks(orb)
        move = "M2a"
    elif kind == "RIII":
        orb = pre.face_darts(pre.face_of[ev.site.spot[0]])
        cs = tuple(sorted({x >> 2 for x in orb}))
        site_pre = site_post = cs
        corners = _corner_masks(orb)
        move = None
    else:
        raise ResolutionError("curve event of kind %r" % (kind,))

    # matchings per site assignment; () keys the crossing-free side,
    # whose matching is the plain through-passage on the other side's
    # state (adding or removing the site crossings does not move the
    # legs)
    if kind == "RIII":
        bp = [opp(orb[(i + 1) % 3]) for i in range(3)]
        post_orb = post.face_darts(post.face_of[bp[0]])
        if sorted(post_orb) != sorted(bp):
            raise ResolutionError("slid triangle did not land on its own face")
        pre_internal = _face_internal_darts(pre, orb)
        post_internal = _face_internal_darts(post, bp)
        # the slide swaps each corner's triangle-side and outward ports:
        # the germ at old leg opp(y) re-enters at the new leg theta[y],
        # for y running over the pre triangle-edge darts.  Carry the post
        # legs back through that before comparing matchings.
        back = {y: opp(pre.theta[y]) for y in pre_internal}
        ports = {x for c in site_pre for x in range(4 * c, 4 * c + 4)}
        if post_internal != {opp(y) for y in pre_internal} or set(back) != (
            ports - post_internal
        ):
            raise ResolutionError("slid triangle legs do not line up")
        pre_match, post_match = {}, {}
        for picks in product((1, 3), repeat=3):
            masks = dict(zip(site_pre, picks))
            pre_match[picks] = _leg_matching(pre, site_pre, masks, pre_internal)
            pp, pc = _leg_matching(post, site_pre, masks, post_internal)
            post_match[picks] = (
                frozenset(frozenset(back[q] for q in pr) for pr in pp),
                pc,
            )
    else:
        ksite = len(walk_site)
        full = {}
        for picks in product((1, 3), repeat=ksite):
            full[picks] = _leg_matching(
                walk_d, walk_site, dict(zip(walk_site, picks)), internal
            )
        phantom = _leg_matching(
            walk_d, walk_site, {c: 2 for c in walk_site}, internal
        )
        if site_pre:
            pre_match, post_match = full, {(): phantom}
        else:
            pre_match, post_match = {(): phantom}, full

    # vertex buckets keyed by the off-site assignment, transported into
    # layer j+1 crossing ids
    pre_layer_sites = tuple(sorted(inv_f1[c] for c in site_pre))
    sig_c = trace.sigmas[g]
    fwd = {}
    for c, x in f1.items():
        if c in pre_layer_sites:
            continue
        fwd[c] = f2(x if sig_c is None else sig_c[x])
    post_layer_sites = tuple(sorted(f2(c) for c in site_post))

    pre_buckets = _bucket(layers[j], set(pre_layer_sites), fwd)
    post_buckets = _bucket(layers[j + 1], set(post_layer_sites), None)

    # site masks are spoken in layer ids but the matchings in event-time
    # ids; pack-down maps are monotone, so sorted order lines up
    othru = tuple(corners[c] ^ 2 for c in sorted(corners))

    out = []
    for key, pres in pre_buckets.items():
        posts = post_buckets.get(key)
        if not posts:
            continue
        for pi, pm in pres:
            mp = pre_match[pm]
            for qi, qm in posts:
                if post_match[qm] != mp:
                    continue
                if kind == "RIII":
                    name = _triangle_edge_name(pm, qm, othru)
                else:
                    name = move
                    _audit_r12(kind, pm, qm, othru)
                out.append(GraphEdge(name, (j, pi), (j + 1, qi)))

    if kind in ("RII+", "RII-"):
        side = j + 1 if kind == "RII+" else j
        buckets = post_buckets if kind == "RII+" else pre_buckets
        match = post_match if kind == "RII+" else pre_match
        turn = {
            (othru[0], othru[1] ^ 2),
            (othru[0] ^ 2, othru[1]),
        }
        for members in buckets.values():
            for (ai, am), (bi, bm) in combinations(members, 2):
                if am != bm and match[am] == match[bm]:
                    if {am, bm} != turn:
                        raise ResolutionError(
                            "level bigon pair %r is not the turnback pair" % ({am, bm},)
                        )
                    x, y = sorted((ai, bi))
                    out.append(GraphEdge("M2b", (side, x), (side, y)))
    return out


def _fresh_bigon(d, n):
    "The 2-gon between the two crossings a poke just added."
    for x in range(4 * n, 4 * n + 4):
        orb = d.face_darts(d.face_of[x])
        if len(orb) == 2 and {y >> 2 for y in orb} == {n, n + 1}:
            return orb
    raise ResolutionError("no bigon between freshly added crossings")


def _audit_r12(kind, pm, qm, othru):
    # the crossing-free side matched, so the other side must sit at the
    # plain through-smoothing of every site corner
    got = qm if qm else pm
    if got != othru:
        raise ResolutionError(
            "%s matched the bare side at %r, expected the through pair %r"
            % (kind, got, othru)
        )


def _triangle_edge_name(pm, qm, othru):
    po = [i for i in range(3) if pm[i] == othru[i]]
    qo = [i for i in range(3) if qm[i] == othru[i]]
    if len(po) == 2 and len(qo) == 2 and po == qo:
        return "M3a"
    if (len(po), len(qo)) in ((1, 3), (3, 1)):
        return "M3b"
    raise ResolutionError(
        "triangle sides matched outside the move tables: %r -> %r" % (pm, qm)
    )


def _bucket(layer_verts, site_set, transport):
    out = {}
    for idx, r in enumerate(layer_verts):
        off = []
        smask = {}
        for c, mval in r.assignment:
            if c in site_set:
                smask[c] = mval
            else:
                off.append((transport[c], mval) if transport is not None else (c, mval))
        key = tuple(sorted(off))
        out.setdefault(key, []).append((idx, tuple(smask[c] for c in sorted(site_set))))
    return out


# -- paths and certification -----------------------------------------


class IsotopyPath(NamedTuple):
    vertices: tuple  # (layer, index) refs, first in layer 0
    edges: tuple  # indices into graph.edges, one per hop


def find_isotopy_path(graph: ResolutionGraph) -> IsotopyPath:
    """Shortest walk from the start resolution to the last layer.

    The trace must open with a simple curve, so layer 0 holds exactly
    one vertex, of degree one toward the rest of the graph.  Existence
    of a path is the handshake argument over the parity rule; failing to
    find one means the engine itself is broken.
    """
    trace = graph.trace
    start_state = trace.layer_state(0)
    if start_state.u_self_ids:
        raise TraceError(
            "the trace must start with a simple curve; the start has %d"
            " self-crossings" % len(start_state.u_self_ids)
        )
    if len(graph.layers[0]) != 1:
        raise ResolutionError(
            "simple start should give one resolution, got %d" % len(graph.layers[0])
        )
    start = (0, 0)
    if graph.nlayers > 1 and graph.degree(start) != 1:
        raise ResolutionError(
            "start resolution should have degree 1, has %d" % graph.degree(start)
        )

    last = graph.nlayers - 1
    prev = {start: None}
    goal = start if start[0] == last else None
    queue = deque([start])
    while queue and goal is None:
        v = queue.popleft()
        for w, ei in graph.neighbors(v):
            if w in prev:
                continue
            prev[w] = (v, ei)
            if w[0] == last:
                goal = w
                break
            queue.append(w)
    if goal is None:
        raise ResolutionError("no route to the last layer; parity is broken")
    verts, hops = [goal], []
    while prev[verts[-1]] is not None:
        v, ei = prev[verts[-1]]
        verts.append(v)
        hops.append(ei)
    return IsotopyPath(tuple(reversed(verts)), tuple(reversed(hops)))


class VerifyResult(NamedTuple):
    m: int  # peak overlay crossing count along the trace
    steps: int  # hops in the certified path
    report: str


def verify_isotopy(trace: Trace, path=None, *, graph=None) -> VerifyResult:
    """Replay a path through the resolution graph as a motion of simple
    curves and certify the crossing bound.

    The bound m is the largest overlay crossing count (curve-tangle plus
    tangle-self) over all trace states.  Every path step must stay at or
    under m; tangle and mixed events are replayed at the layer
    transitions where they happen, in reverse when the path walks down a
    layer.  Any failed check raises ResolutionError: the construction
    guarantees these hold, so a failure is an engine bug, not a property
    of the input.
    """
    if graph is None:
        graph = build_resolution_graph(trace)
    if path is None:
        path = find_isotopy_path(graph)

    m = max(st.mixed + st.m_self for st in trace.states)
    lines = [
        "trace: %d events over %d layers" % (len(trace.events), trace.nlayers),
        "m = %d  (peak overlay crossing count along the trace)" % m,
    ]
    for k, ref in enumerate(path.vertices):
        if k:
            lines.extend(_hop_lines(trace, graph, path, k))
        res = graph.vertex(ref)
        st = trace.layer_state(ref[0])
        if tuple(c for c, _ in res.assignment) != st.u_self_ids:
            raise ResolutionError(
                "resolution at %r does not cover the layer's self-crossings" % (ref,)
            )
        if st.mixed + st.m_self > m:
            raise ResolutionError(
                "step %d exceeds the bound: %d+%d > %d"
                % (k, st.mixed, st.m_self, m)
            )
        lines.append(
            "step %d: layer %d  smoothing %s  overlay %d+%d <= %d"
            % (k, ref[0], list(res.assignment), st.mixed, st.m_self, m)
        )

    final_ref = path.vertices[-1]
    if final_ref[0] != graph.nlayers - 1:
        raise ResolutionError("path does not end in the last layer")
    final_state = trace.layer_state(final_ref[0])
    if final_state.is_simple:
        if graph.vertex(final_ref).assignment:
            raise ResolutionError("simple final curve paired with smoothings")
        lines.append("final: the ending curve is simple and the path ends on it exactly")
    else:
        lines.append(
            "final: resolution of the ending curve (%d self-crossings smoothed)"
            % len(final_state.u_self_ids)
        )
    lines.append("verified: %d steps, overlay bound m = %d holds throughout" % (len(path.edges), m))
    return VerifyResult(m, len(path.edges), "\n".join(lines) + "\n")


def _hop_lines(trace, graph, path, k):
    edge = graph.edges[path.edges[k - 1]]
    va, vb = path.vertices[k - 1], path.vertices[k]
    if edge.move == "M2b":
        return ["  move: M2b (level)"]
    ja = edge.a[0]  # lower layer of the hop
    p0, p1 = trace.layer_pos[ja], trace.layer_pos[ja + 1]
    g = next(i for i in range(p0, p1) if trace.events[i].tag == "C")
    out = []
    if vb[0] > va[0]:
        for ev in trace.events[p0:g]:
            out.append("  replay: " + ev.text)
        out.append("  move: %s (up)" % edge.move)
        for ev in trace.events[g + 1 : p1]:
            out.append("  replay: " + ev.text)
    else:
        for ev in reversed(trace.events[g + 1 : p1]):
            out.append("  undo: " + ev.text)
        out.append("  move: %s (down)" % edge.move)
        for ev in reversed(trace.events[p0:g]):
            out.append("  undo: " + ev.text)
    return out
