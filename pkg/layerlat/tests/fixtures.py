import os

from layerlat.algebra.bunch import make_bunch
from layerlat.algebra.ogroup import Identity, Int, IntMultiples, ScaleInt, Trivial, UnitMap, Whole

FIXTURES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES_DIR, name)


def read_fixture(name: str) -> str:
    with open(fixture_path(name)) as f:
        return f.read()


def s3():
    """
    The 3-element odd Sugihara chain: bottom < t < top
    """
    return make_bunch(
        ["t", "u"],
        {"t": "O", "u": "I"},
        {"t": Trivial(), "u": Trivial()},
        {"u": Whole(Trivial())},
        {("t", "u"): UnitMap(Trivial(), Trivial())},
    )


def zb():
    """
    The integers with a bottom and a top
    """
    return make_bunch(
        ["t", "u"],
        {"t": "O", "u": "I"},
        {"t": Int(), "u": Trivial()},
        {"u": Whole(Trivial())},
        {("t", "u"): UnitMap(Int(), Trivial())},
    )


def ze():
    """
    The integers with f = -1
    """
    return make_bunch(["t"], {"t": "J"}, {"t": Int()})


def lz():
    return make_bunch(
        ["t", "u"],
        {"t": "O", "u": "I"},
        {"t": Int(), "u": Int()},
        {"u": Whole(Int())},
        {("t", "u"): Identity(Int())},
    )


def lz2():
    return make_bunch(
        ["t", "u"],
        {"t": "O", "u": "I"},
        {"t": Int(), "u": Int()},
        {"u": IntMultiples(Int(), 2)},
        {("t", "u"): ScaleInt(2)},
    )


def one_element():
    return make_bunch(["t"], {"t": "O"}, {"t": Trivial()})


FIXTURES = {
    "s3": s3,
    "zb": zb,
    "ze": ze,
    "lz": lz,
    "lz2": lz2,
}
