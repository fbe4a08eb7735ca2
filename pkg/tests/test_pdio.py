import pytest

from hardsplit.maps import PLANE, ROOT, Diagram, Loop
from hardsplit.pdio import PDError, emit_pd, parse_pd

KINK_TEXT = """
# a single curl, petal between the twin E1 ends
X k E1 E2 E2 E1
F E2:R
O C E1:R   # circle tucked inside the petal
"""


def test_parse_kink():
    pd = parse_pd(KINK_TEXT)
    d = pd.diagram
    assert list(d.theta) == [3, 2, 1, 0]
    assert d.over == (1,)  # positions 2 and 4 pass over by default
    assert d.hosts == {0: (ROOT, 1)}
    assert d.loops == (Loop("C", ("f", 0)),)
    assert pd.crossing_names == ("k",)
    assert pd.edge_ends["E1"] == [0, 3]


def test_parse_over_flip():
    pd = parse_pd("X k E1 E2 E2 E1 over=1\n")
    assert pd.diagram.over == (0,)
    pd3 = parse_pd("X k E1 E2 E2 E1 over=3\n")
    assert pd3.diagram.over == (0,)


def test_parse_component_labels():
    pd = parse_pd("X k E1 E2 E2 E1\nC K E1 E2\n")
    assert pd.diagram.labels == ("K",)
    with pytest.raises(PDError):
        parse_pd("X k E1 E2 E2 E1\nC ~bad E1\n")


def test_parse_nested_pieces():
    text = """
    X a E1 E2 E2 E1
    X b E3 E4 E4 E3
    F E1:L
    H E3 E1:R E3:L
    """
    d = parse_pd(text).diagram
    assert d.hosts == {0: (ROOT, 1), 4: (("f", 0), 5)}


def test_parse_loop_hints():
    text = """
    O A outer
    O - in:A
    O B in:A
    """
    d = parse_pd(text).diagram
    assert d.loops == (
        Loop("A", ROOT),
        Loop(None, ("l", 0)),
        Loop("B", ("l", 0)),
    )


def test_parse_errors():
    with pytest.raises(PDError):
        parse_pd("X k E1 E2 E2\n")  # three edges
    with pytest.raises(PDError):
        parse_pd("X k E1 E2 E2 E3\n")  # dangling E1/E3
    with pytest.raises(PDError):
        parse_pd("X k E1 E2 E2 E1\nX k E3 E4 E4 E3\n")  # reused name
    with pytest.raises(PDError):
        parse_pd("X k E1 E2 E2 E1 over=2\n")
    with pytest.raises(PDError):
        parse_pd("O C nowhere\n")
    with pytest.raises(PDError):
        parse_pd("Y what\n")
    with pytest.raises(PDError):
        parse_pd("X a E1 E2 E2 E1\nC K E9\n")


def test_parse_ambiguous_loop_name():
    with pytest.raises(PDError):
        parse_pd("O A outer\nO A outer\nO B in:A\n")


def test_parse_hosting_cycle():
    text = """
    X a E1 E2 E2 E1
    X b E3 E4 E4 E3
    H E1 E3:R E1:L
    H E3 E1:R E3:L
    """
    with pytest.raises(PDError):
        parse_pd(text)


def test_emit_normal_form():
    d = Diagram(PLANE, [3, 2, 1, 0], [0], labels=["K"])
    text = emit_pd(d)
    assert "over=" not in text
    assert text.splitlines()[0].startswith("X c0 ")
    assert any(line.startswith("F ") for line in text.splitlines())


ROUND_TRIP_CASES = [
    Diagram(PLANE, [3, 2, 1, 0], [0], labels=["K"]),
    Diagram(PLANE, [3, 2, 1, 0], [1], labels=None),
    Diagram(
        PLANE,
        [11, 10, 5, 4, 3, 2, 9, 8, 7, 6, 1, 0],
        [0, 1, 0],
        labels=["T"],
        hosts={0: (ROOT, 2)},
    ),
    Diagram(
        PLANE,
        [3, 2, 1, 0] + [7, 6, 5, 4],
        [0, 1],
        labels=["A", None],
        loops=[("C", ("f", 2)), (None, ROOT), (None, ("l", 1))],
        hosts={4: (("f", 2), 5)},
    ),
    Diagram(PLANE, [7, 6, 10, 9, 8, 11, 1, 0, 4, 3, 2, 5], [0, 0, 1], labels=["K"]),
]


@pytest.mark.parametrize("d", ROUND_TRIP_CASES, ids=lambda d: repr(d))
def test_emit_parse_round_trip(d):
    d.check()
    back = parse_pd(emit_pd(d)).diagram
    norm = d.relabeled(None, [0 if o else 1 for o in d.over])
    assert back.mode == norm.mode
    assert list(back.theta) == list(norm.theta)
    assert back.over == norm.over
    assert back.labels == norm.labels
    assert back.loops == norm.loops
    assert back.hosts == norm.hosts
    assert back.canonically_equal(d)
