import pytest

from exactcat.approx import AddSubcat
from exactcat.fflinalg import FpMatrix
from exactcat.repcat import RepCategory, a_n


@pytest.fixture(scope="session")
def a2():
    cat = RepCategory(a_n(2), 2)
    one = FpMatrix(2, [[1]])
    objs = {
        "P1": cat.obj({"1": 1, "2": 1}, {"a1": one}, name="P1"),
        "S1": cat.obj({"1": 1}, name="S1"),
        "S2": cat.obj({"2": 1}, name="S2"),
    }
    return cat, objs


@pytest.fixture(scope="session")
def a3():
    cat = RepCategory(a_n(3), 2)
    one = FpMatrix(2, [[1]])
    objs = {
        "P1": cat.obj({"1": 1, "2": 1, "3": 1}, {"a1": one, "a2": one}, name="P1"),
        "P2": cat.obj({"2": 1, "3": 1}, {"a2": one}, name="P2"),
        "S3": cat.obj({"3": 1}, name="S3"),
        "S1": cat.obj({"1": 1}, name="S1"),
        "I2": cat.obj({"1": 1, "2": 1}, {"a1": one}, name="I2"),
        "S2": cat.obj({"2": 1}, name="S2"),
    }
    return cat, objs


@pytest.fixture(scope="session")
def a3_sub(a3):
    cat, objs = a3
    gens = [objs[n] for n in ("P1", "P2", "S3", "S1", "I2")]
    return AddSubcat(cat, gens, label="P")


@pytest.fixture(scope="session")
def a3_nonsplit(a3):
    """The nonsplit conflation 0 -> P2 -> P1 -> S1 -> 0."""
    cat, objs = a3
    incl = cat.hom_basis(objs["P2"], objs["P1"])[0]
    proj = cat.hom_basis(objs["P1"], objs["S1"])[0]
    return cat.conflation(incl, proj)
