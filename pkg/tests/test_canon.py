import pytest

from hardsplit import canon, _canon_py
from hardsplit.canon import state_digest
from hardsplit.maps import PLANE, ROOT, SPHERE, Diagram, DiagramError, Loop

KINK = [3, 2, 1, 0]
TREFOIL = [11, 10, 5, 4, 3, 2, 9, 8, 7, 6, 1, 0]


def tre(over=(0, 0, 0), **kw):
    return Diagram(PLANE, TREFOIL, over, labels=["T"], **kw)


def test_relabel_invariance():
    d = tre()
    assert d.canonically_equal(d.relabeled([2, 0, 1], [1, 2, 3]))
    assert d.canonically_equal(d.relabeled([1, 2, 0], [3, 0, 1]))


def test_decoration_matters():
    assert not tre().canonically_equal(tre(over=(0, 0, 1)))
    a = Diagram(PLANE, KINK, [0], labels=["A"])
    b = Diagram(PLANE, KINK, [0], labels=["B"])
    assert not a.canonically_equal(b)


def test_mirror_differs():
    # reflect the slot numbering; odd slots stay odd so over bits carry over
    d = tre()
    dmap = {4 * c + s: 4 * c + ((-s) & 3) for c in range(3) for s in range(4)}
    theta = [0] * 12
    for x, t in enumerate(d.theta):
        theta[dmap[x]] = dmap[t]
    m = Diagram(PLANE, theta, d.over, labels=["T"])
    assert not d.canonically_equal(m)
    assert not d.with_mode(SPHERE).canonically_equal(m.with_mode(SPHERE))


def test_plane_embedding_matters_sphere_does_not():
    a = Diagram(PLANE, KINK, [0], labels=["K"])  # petal outward
    b = Diagram(PLANE, KINK, [0], labels=["K"], hosts={0: (ROOT, 1)})
    assert not a.canonically_equal(b)
    assert a.with_mode(SPHERE).canonically_equal(b.with_mode(SPHERE))


def test_sphere_reroot_invariance():
    d = Diagram(SPHERE, KINK, [0], labels=["K"], loops=[("C", ("f", 2))])
    for region in (("f", 1), ("f", 2), ("l", 0)):
        assert d.canonically_equal(d.rerooted(region))


def test_split_pieces_commute():
    a = Diagram(
        PLANE, KINK + [x + 4 for x in KINK], [0, 1],
        labels=["A", "B"], loops=[("C", ROOT)],
    )
    # same content with the two pieces' ids exchanged
    b = a.relabeled([1, 0], None)
    assert a.labels == ("A", "B") and b.labels == ("B", "A")
    assert a.canonically_equal(b)


def test_nesting_depth_coded():
    flat = Diagram(PLANE, KINK, [0], labels=["K"], loops=[("C", ROOT)])
    nested = Diagram(PLANE, KINK, [0], labels=["K"], loops=[("C", ("f", 2))])
    assert not flat.canonically_equal(nested)


def test_digest_shape():
    d = tre()
    fp = state_digest(d.canonical_code())
    assert isinstance(fp, bytes) and len(fp) == 16
    assert fp == state_digest(d.relabeled([2, 0, 1], [1, 2, 3]).canonical_code())
    assert fp != state_digest(tre(over=(0, 0, 1)).canonical_code())


def test_label_table_limit():
    labels = ["L%d" % i for i in range(16)]
    loops = [(lab, ROOT) for lab in labels]
    d = Diagram(PLANE, [], [], labels=[], loops=loops)
    with pytest.raises(DiagramError):
        d.canonical_code()


def test_kernel_parity():
    "The compiled walk kernel must agree byte for byte with the fallback."
    if canon.backend != "compiled":
        pytest.skip("compiled kernel not built")
    from hardsplit import _canon_cy

    for theta, over in [
        (KINK, [0]),
        (TREFOIL, [0, 0, 0]),
        (TREFOIL, [0, 1, 0]),
        ([7, 6, 10, 9, 8, 11, 1, 0, 4, 3, 2, 5], [0, 0, 1]),
    ]:
        d = Diagram(PLANE, theta, over, labels=["T"])
        ctx = canon._Ctx(d)
        darts = list(d.islands[0])
        assert _canon_cy.best_walk(ctx.theta, ctx.deco, darts) == _canon_py.best_walk(
            ctx.theta, ctx.deco, darts
        )
