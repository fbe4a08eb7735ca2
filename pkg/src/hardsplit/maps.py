"""Combinatorial-map representation of link diagrams.

A diagram with n crossings uses dart identifiers 0..4n-1; dart 4c+s is the
s-th edge end at crossing c, with slots numbered counterclockwise.  Only the
pairing involution ``theta`` (matching the two ends of each edge) needs to be
stored; the rotation system is implicit in the dart numbering.  Crossing-free
components ("loops") and the nesting of disconnected pieces are carried
alongside the map so that the planar embedding stays faithful for split
diagrams.

Faces are traced with phi(d) = rot(theta(d)); the orbit of a dart under phi
is the face lying to the right of that dart.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional

PLANE = "plane"
SPHERE = "sphere"

#: Region key of the unbounded region (plane mode: the outer region).
ROOT = ("root",)


class DiagramError(Exception):
    """Malformed diagram data."""


class MoveError(DiagramError):
    """A move site that is absent, stale, or blocked."""


def opp(d: int) -> int:
    "Dart on the same strand directly across the crossing."
    return d ^ 2


def rot(d: int) -> int:
    "Next dart counterclockwise around the same crossing."
    return (d & ~3) | ((d + 1) & 3)


def rot_inv(d: int) -> int:
    return (d & ~3) | ((d - 1) & 3)


def cross_of(d: int) -> int:
    return d >> 2


def slot_of(d: int) -> int:
    return d & 3


class Loop(NamedTuple):
    """A crossing-free circle living in some region of the diagram."""

    label: Optional[str]
    host: tuple


def _orbits(step, domain):
    # domain must be sorted ascending; each orbit tuple starts at its min dart
    seen = set()
    out = []
    for d in domain:
        if d in seen:
            continue
        orb = [d]
        seen.add(d)
        x = step(d)
        while x != d:
            orb.append(x)
            seen.add(x)
            x = step(x)
        out.append(tuple(orb))
    return out


class Diagram:
    """An immutable link diagram.

    Parameters
    ----------
    mode : "plane" or "sphere"
    theta : pairing involution over darts 0..4n-1 (fixed-point free)
    over : per crossing, 0 if the strand through slots {0,2} passes over,
        1 if the strand through slots {1,3} does
    labels : per strand component (ordered by smallest dart), a name or None
    loops : iterable of (label, host_region_key) for crossing-free circles
    hosts : mapping island_key -> (host_region_key, up_face_key); islands
        not mentioned sit in the root region with a default up face
    """

    __slots__ = ("mode", "theta", "over", "labels", "loops", "hosts", "_cache")

    def __init__(self, mode, theta, over, labels=None, loops=(), hosts=None):
        if mode not in (PLANE, SPHERE):
            raise DiagramError("mode must be %r or %r" % (PLANE, SPHERE))
        object.__setattr__(self, "mode", mode)
        theta = tuple(theta)
        if len(theta) % 4:
            raise DiagramError("dart count %d is not a multiple of 4" % len(theta))
        nd = len(theta)
        for d in range(nd):
            t = theta[d]
            if not 0 <= t < nd or t == d or theta[t] != d:
                raise DiagramError("theta is not a fixed-point-free involution at dart %d" % d)
        object.__setattr__(self, "theta", theta)
        over = tuple(int(o) & 1 for o in over)
        if len(over) * 4 != nd:
            raise DiagramError("over has %d entries for %d crossings" % (len(over), nd // 4))
        object.__setattr__(self, "over", over)
        object.__setattr__(self, "_cache", {})

        comps = self.components
        if labels is None:
            labels = (None,) * len(comps)
        labels = tuple(labels)
        if len(labels) != len(comps):
            raise DiagramError(
                "%d labels for %d strand components" % (len(labels), len(comps))
            )
        object.__setattr__(self, "labels", labels)

        loops = tuple(Loop(lab, self._norm_region(host)) for lab, host in loops)
        object.__setattr__(self, "loops", loops)

        norm_hosts = {}
        for key in self.islands_keys:
            if hosts and key in hosts:
                host, up = hosts[key]
                norm_hosts[key] = (self._norm_region(host), self.face_of[up])
            else:
                norm_hosts[key] = (ROOT, self.face_of[key])
        if hosts:
            for key in hosts:
                if key not in norm_hosts:
                    raise DiagramError("host entry for unknown island %r" % (key,))
        object.__setattr__(self, "hosts", norm_hosts)

    def __setattr__(self, name, value):
        raise AttributeError("Diagram is immutable")

    # -- basic sizes -------------------------------------------------

    @property
    def ncross(self) -> int:
        return len(self.over)

    @property
    def ndart(self) -> int:
        return len(self.theta)

    def darts(self):
        return range(self.ndart)

    # -- derived structure (memoized) --------------------------------

    def _get(self, key, build):
        cache = self._cache
        if key not in cache:
            cache[key] = build()
        return cache[key]

    @property
    def faces(self):
        "Face orbits of phi = rot . theta, each starting at its smallest dart."
        return self._get(
            "faces", lambda: tuple(_orbits(lambda d: rot(self.theta[d]), self.darts()))
        )

    @property
    def face_of(self):
        "Map dart -> face key (the smallest dart on its face)."

        def build():
            out = {}
            for orb in self.faces:
                for d in orb:
                    out[d] = orb[0]
            return out

        return self._get("face_of", build)

    def face_darts(self, fkey):
        for orb in self.faces:
            if orb[0] == fkey:
                return orb
        raise DiagramError("no face with key %r" % (fkey,))

    @property
    def components(self):
        """Strand components as forward dart cycles (one dart per edge).

        The forward direction is the orbit containing the component's
        smallest dart, which makes derived orientations deterministic.
        """

        def build():
            step = lambda d: opp(self.theta[d])
            orbs = _orbits(step, self.darts())
            paired = set()
            comps = []
            for orb in orbs:
                if orb[0] in paired:
                    continue
                mirror_rep = min(self.theta[d] for d in orb)
                m = min(orb[0], mirror_rep)
                if m == orb[0]:
                    comps.append(orb)
                else:
                    # rotate the mirror orbit to start at its min dart
                    mirror = _orbits(step, sorted(self.theta[d] for d in orb))[0]
                    comps.append(mirror)
                for d in comps[-1]:
                    paired.add(d)
                    paired.add(self.theta[d])
            comps.sort(key=lambda orb: orb[0])
            return tuple(comps)

        return self._get("components", build)

    @property
    def comp_of(self):
        "Map dart -> component index."

        def build():
            out = {}
            for i, orb in enumerate(self.components):
                for d in orb:
                    out[d] = i
                    out[self.theta[d]] = i
            return out

        return self._get("comp_of", build)

    def label_of_dart(self, d):
        return self.labels[self.comp_of[d]]

    @property
    def islands_keys(self):
        "Sorted smallest-dart keys of the connected shadow pieces."
        return self._get("islands_keys", lambda: tuple(sorted(self.islands)))

    @property
    def islands(self):
        "Map island key -> sorted tuple of its darts."

        def build():
            seen = set()
            out = {}
            for d0 in self.darts():
                if d0 in seen:
                    continue
                stack = [d0]
                seen.add(d0)
                acc = []
                while stack:
                    d = stack.pop()
                    acc.append(d)
                    for nb in (rot(d), self.theta[d]):
                        if nb not in seen:
                            seen.add(nb)
                            stack.append(nb)
                acc.sort()
                out[acc[0]] = tuple(acc)
            return out

        return self._get("islands", build)

    @property
    def island_of(self):
        def build():
            out = {}
            for key, ds in self.islands.items():
                for d in ds:
                    out[d] = key
            return out

        return self._get("island_of", build)

    def island_faces(self, key):
        return tuple(orb[0] for orb in self.faces if self.island_of[orb[0]] == key)

    # -- regions -----------------------------------------------------
    #
    # Region keys: ROOT, ('f', face_key) for a face that is not some
    # island's up face, or ('l', loop_index) for the far side of a loop.

    @property
    def region_children(self):
        "Map region key -> list of ('I', island_key) and ('L', loop_index)."

        def build():
            out = {ROOT: []}
            for key in self.islands_keys:
                host, up = self.hosts[key]
                out.setdefault(host, []).append(("I", key))
            for i, lp in enumerate(self.loops):
                out.setdefault(lp.host, []).append(("L", i))
            for key in self.region_keys:
                out.setdefault(key, [])
            return out

        return self._get("region_children", build)

    @property
    def region_keys(self):
        def build():
            ups = {up for (_h, up) in self.hosts.values()}
            keys = [ROOT]
            for orb in self.faces:
                if orb[0] not in ups:
                    keys.append(("f", orb[0]))
            for i in range(len(self.loops)):
                keys.append(("l", i))
            return tuple(keys)

        return self._get("region_keys", build)

    def _norm_region(self, rkey):
        "Region keys name faces by their smallest dart; fix up any other dart."
        rkey = tuple(rkey)
        if rkey and rkey[0] == "f":
            return ("f", self.face_of[rkey[1]])
        return rkey

    def region_of_face(self, fkey):
        """Region key for the area of face `fkey` (follows up faces outward)."""
        fkey = self.face_of[fkey]
        host, up = self.hosts[self.island_of[fkey]]
        if fkey == up:
            return host
        return ("f", fkey)

    def region_boundary(self, rkey):
        """Boundary elements of a region: ('d', dart) and ('loop', index).

        Darts listed have the region on their right; loops listed are the
        circles bounding the region (hosted in it, or the loop itself when
        the region is its far side).
        """
        elems = []
        if rkey[0] == "f":
            elems.extend(("d", d) for d in self.face_darts(rkey[1]))
        elif rkey[0] == "l":
            elems.append(("loop", rkey[1]))
        elif rkey != ROOT:
            raise DiagramError("bad region key %r" % (rkey,))
        for kind, ref in self.region_children.get(rkey, ()):
            if kind == "I":
                _host, up = self.hosts[ref]
                elems.extend(("d", d) for d in self.face_darts(up))
            else:
                elems.append(("loop", ref))
        return elems

    # -- validation --------------------------------------------------

    def validate(self):
        "Return a list of violation strings (empty when the diagram is sound)."
        out = []
        for key, ds in self.islands.items():
            ncr = len(ds) // 4
            nfaces = sum(1 for orb in self.faces if self.island_of[orb[0]] == key)
            chi = ncr - 2 * ncr + nfaces
            if chi != 2:
                out.append(
                    "island %d: Euler characteristic %d (not planar)" % (key, chi)
                )
        for key, (host, up) in self.hosts.items():
            if self.island_of.get(up) != key:
                out.append("island %d: up face %r is not its own face" % (key, up))
            if host != ROOT and not self._region_exists(host):
                out.append("island %d: host region %r does not exist" % (key, host))
            if host[0] == "f" and self.island_of.get(host[1]) == key:
                out.append("island %d hosted inside itself" % key)
        for i, lp in enumerate(self.loops):
            if lp.host != ROOT and not self._region_exists(lp.host):
                out.append("loop %d: host region %r does not exist" % (i, lp.host))
        out.extend(self._forest_violations())
        return out

    def _region_exists(self, rkey):
        if rkey == ROOT:
            return True
        if rkey[0] == "f":
            return rkey[1] in self.face_of and self.region_of_face(rkey[1]) == rkey
        if rkey[0] == "l":
            return 0 <= rkey[1] < len(self.loops)
        return False

    def _node_parent(self, node):
        "Owning node of a region-hosted node, or None at the root region."
        kind, ref = node
        host = self.hosts[ref][0] if kind == "I" else self.loops[ref].host
        if host == ROOT:
            return None
        if host[0] == "f":
            return ("I", self.island_of[host[1]])
        return ("L", host[1])

    def _forest_violations(self):
        out = []
        nodes = [("I", k) for k in self.islands_keys] + [
            ("L", i) for i in range(len(self.loops))
        ]
        for start in nodes:
            seen = {start}
            node = start
            while True:
                try:
                    node = self._node_parent(node)
                except (KeyError, IndexError, DiagramError):
                    out.append("node %r: broken host chain" % (start,))
                    break
                if node is None:
                    break
                if node in seen:
                    out.append("node %r: hosting cycle" % (start,))
                    break
                seen.add(node)
        return out

    def check(self):
        "Raise DiagramError if validate() reports anything."
        bad = self.validate()
        if bad:
            raise DiagramError("; ".join(bad))
        return self

    # -- crossing classification ------------------------------------

    def is_over_dart(self, d: int) -> bool:
        "True when dart d sits on the over strand of its crossing."
        return (d & 1) == self.over[d >> 2]

    def strandpair_labels(self, c: int):
        "Labels of the two transversal strands at crossing c (slots 0/2 first)."
        return (self.label_of_dart(4 * c), self.label_of_dart(4 * c + 1))

    def crossing_partition(self, u=("U",), m=("M1", "M2")):
        """Count crossings by class: (u-self, mixed, m-self).

        Every strand component must carry a label from u or m.
        """
        useen = set(u)
        mseen = set(m)
        for lab in self.labels:
            if lab not in useen and lab not in mseen:
                raise DiagramError("component label %r outside the u/m partition" % (lab,))
        for lp in self.loops:
            if lp.label not in useen and lp.label not in mseen:
                raise DiagramError("loop label %r outside the u/m partition" % (lp.label,))
        uu = um = mm = 0
        for c in range(self.ncross):
            a, b = self.strandpair_labels(c)
            au = a in useen
            bu = b in useen
            if au and bu:
                uu += 1
            elif au or bu:
                um += 1
            else:
                mm += 1
        return (uu, um, mm)

    # -- transformations ---------------------------------------------

    def with_mode(self, mode):
        return Diagram(mode, self.theta, self.over, self.labels, self.loops, self.hosts)

    def relabeled(self, perm=None, shifts=None):
        """Rename crossings and rotate slot numbering; an isotopy no-op.

        perm : sequence, perm[c] = new id of crossing c
        shifts : per crossing, how many slots to rotate the numbering by
        """
        n = self.ncross
        perm = list(perm) if perm is not None else list(range(n))
        shifts = list(shifts) if shifts is not None else [0] * n
        dmap = {}
        for c in range(n):
            for s in range(4):
                dmap[4 * c + s] = 4 * perm[c] + ((s + shifts[c]) & 3)
        theta = [0] * self.ndart
        for d, t in enumerate(self.theta):
            theta[dmap[d]] = dmap[t]
        over = [0] * n
        for c in range(n):
            over[perm[c]] = (self.over[c] + shifts[c]) & 1

        skel = Diagram(self.mode, theta, over)
        old_label_by_min = {}
        for i, orb in enumerate(self.components):
            full = list(orb) + [self.theta[d] for d in orb]
            old_label_by_min[min(dmap[d] for d in full)] = self.labels[i]
        labels = []
        for orb in skel.components:
            full_min = min(min(orb), min(theta[d] for d in orb))
            labels.append(old_label_by_min[full_min])

        def map_region(rkey):
            if rkey == ROOT or rkey[0] == "l":
                return rkey
            return ("f", skel.face_of[dmap[rkey[1]]])

        loops = [(lp.label, map_region(lp.host)) for lp in self.loops]
        hosts = {}
        for _key, (host, up) in self.hosts.items():
            new_up = skel.face_of[dmap[up]]
            hosts[skel.island_of[new_up]] = (map_region(host), new_up)
        return Diagram(self.mode, theta, over, labels, loops, hosts)

    def rerooted(self, new_root):
        """Re-choose which region is outermost (a sphere isotopy).

        Returns an equal diagram whose root region is the area formerly
        known by region key `new_root`.
        """
        if new_root == ROOT:
            return self
        if not self._region_exists(new_root):
            raise DiagramError("no region %r" % (new_root,))
        hosts = {k: list(v) for k, v in self.hosts.items()}
        loops = [[lp.label, lp.host] for lp in self.loops]
        # membership decisions come from the original tree: each region along
        # the inverted chain is handled exactly once, mutations never cascade
        orig_children = self.region_children

        def move_children(rkey, newkey, skip):
            for kind, ref in orig_children.get(rkey, ()):
                if (kind, ref) == skip:
                    continue
                if kind == "I":
                    hosts[ref][0] = newkey
                else:
                    loops[ref][1] = newkey

        # occupants of the new root region float to the top ...
        if new_root[0] == "f":
            node = ("I", self.island_of[new_root[1]])
        else:
            node = ("L", new_root[1])
        move_children(new_root, ROOT, None)
        # ... then the chain of former ancestors is turned inside out
        carry_host = ROOT
        carry_up = new_root[1] if new_root[0] == "f" else None
        while node is not None:
            kind, ref = node
            if kind == "I":
                old_host, old_up = self.hosts[ref]
                hosts[ref] = [carry_host, carry_up]
                freed = ("f", old_up)
            else:
                old_host = self.loops[ref].host
                loops[ref][1] = carry_host
                freed = ("l", ref)
            move_children(old_host, freed, node)
            if old_host == ROOT:
                node = None
            elif old_host[0] == "f":
                node = ("I", self.island_of[old_host[1]])
                carry_host, carry_up = freed, old_host[1]
            else:
                node = ("L", old_host[1])
                carry_host, carry_up = freed, None
        return Diagram(
            self.mode,
            self.theta,
            self.over,
            self.labels,
            [(lab, tuple(h)) for lab, h in loops],
            {k: (tuple(h), u) for k, (h, u) in hosts.items()},
        )

    # -- canonical form ----------------------------------------------

    def canonical_code(self):
        "Canonical code; equal codes mean equal up to relabeling and isotopy."

        def build():
            from . import canon

            return canon.canonical_code(self)

        return self._get("canonical_code", build)

    def canonically_equal(self, other) -> bool:
        return self.canonical_code() == other.canonical_code()

    # -- misc --------------------------------------------------------

    def __repr__(self):
        return "<Diagram %s %d crossings, %d loops, %d components>" % (
            self.mode,
            self.ncross,
            len(self.loops),
            len(self.labels) + len(self.loops),
        )
