"""Smoke test for the charkummer_py extension."""

import charkummer_py as ck

STAR = """
curve C1 self=-3
curve C2 self=-2
curve C3 self=-2
curve C4 self=-2
curve C5 self=-2
edge C1 C2 mult=1
edge C2 C3 mult=1
edge C2 C4 mult=1
edge C2 C5 mult=1
"""


def main():
    f4 = ck.Field("2^2")
    assert f4.order == 4
    assert len(f4.elements()) == 4
    assert f4.mul("g", "g") == "g^2"

    s = ck.Series("x + y", ["x", "y"])
    assert str(s ** 2) == str(ck.Series("x^2 + y^2", ["x", "y"]))
    assert ck.Series("z^2 + x*y", ["x", "y", "z"]).tjurina() == 2
    assert ck.tjurina("z^2 + y*x^2*z + x^5 + y^3") == 12

    inv = ck.Involution("x", "y")
    assert inv.equation() == "z^2 + x^2*y + x*y^2 + x*y*z"
    assert inv.singular_points() == 3
    assert inv.verify_identity()
    assert ck.Involution("x^2", "y^2").singular_points() is None

    star = ck.CurveConfig.from_graph(STAR)
    assert star.fundamental_cycle() == [1, 2, 1, 1, 1]
    assert star.dynkin() is None

    depth, guaranteed, failing, cm = ck.sym_depth(3, 2, 2)
    assert (depth, guaranteed, failing) == (5, 5, 6)

    records = ck.scenario(2)
    assert records and all(passed for _, passed, _, _ in records)
    assert all(passed for _, passed, _, _ in ck.verify(6))

    try:
        ck.Involution("0", "y")
    except ValueError:
        pass
    else:
        raise AssertionError("zero parameter accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
