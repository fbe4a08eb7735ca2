"""Pure-Python walk-code kernel.

The compiled module `_canon_cy` exports the same `best_walk`; this one is
the fallback and the reference the compiled kernel is tested against.

A walk code is a breadth-first certificate of one connected piece rooted
at a start dart: darts are numbered in discovery order (neighbors pushed
as rotation-successor first, then edge partner), and each dart in that
order contributes three bytes — the numbers of its two neighbors and its
decoration byte.  Equal codes mean isomorphic rooted decorated pieces.
"""

from __future__ import annotations

__all__ = ["walk_label_order", "walk_code", "best_walk"]


def walk_label_order(theta, start):
    "Discovery order of the piece's darts; order[i] is the dart numbered i."
    lab = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for nb in ((d & ~3) | ((d + 1) & 3), theta[d]):
            if nb not in lab:
                lab[nb] = len(order)
                order.append(nb)
    return order, lab


def walk_code(theta, deco, start):
    order, lab = walk_label_order(theta, start)
    out = bytearray()
    for d in order:
        out.append(lab[(d & ~3) | ((d + 1) & 3)])
        out.append(lab[theta[d]])
        out.append(deco[d])
    return bytes(out)


def _walk_code_wide(theta, deco, start):
    # same certificate with big-endian two-byte dart numbers, for pieces
    # whose numbering would not fit a byte; byte order keeps code
    # comparison equal to numeric comparison
    order, lab = walk_label_order(theta, start)
    out = bytearray()
    for d in order:
        a = lab[(d & ~3) | ((d + 1) & 3)]
        b = lab[theta[d]]
        out += bytes((a >> 8, a & 255, b >> 8, b & 255, deco[d]))
    return bytes(out)


def best_walk(theta, deco, starts):
    """Smallest walk code over the given start darts, and all its achievers.

    `starts` must be exactly the dart set of one connected piece.  Pieces
    of more than 252 darts switch to a two-byte encoding; the two widths
    can never produce codes of equal length, so codes stay unambiguous.
    """
    if len(starts) <= 252:
        coder, stride = walk_code, 3
    else:
        coder, stride = _walk_code_wide, 5
    best = None
    argmin = []
    for s in starts:
        code = coder(theta, deco, s)
        if len(code) != stride * len(starts):
            raise ValueError("starts must be the darts of one connected piece")
        if best is None or code < best:
            best, argmin = code, [s]
        elif code == best:
            argmin.append(s)
    return best, argmin
