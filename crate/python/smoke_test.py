"""Smoke test for the ffhyper extension module.

Build and install first, e.g. `pip install maturin && maturin develop -m crates/py/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

from fractions import Fraction

import ffhyper


def main():
    f13 = ffhyper.Field("13")
    assert f13.order == 13 and f13.characteristic == 13
    assert [f13.chi(i) for i in (0, 1, 2, 4)] == [0, 1, -1, 1]

    f9 = ffhyper.Field("3^2")
    assert f9.order == 9 and f9.degree == 2
    assert ffhyper.Field(f9.spec) == f9

    p = ffhyper.Poly(f13, "x1*x2+1")
    assert p.nvars == 2 and p.degree == 2 and p.is_symmetric()
    assert p.eval([3, 4]) == 0
    assert p.admissible()["status"] == "Admissible"
    assert ffhyper.Poly(ffhyper.Field("7"), "x1*x2").admissible()["status"] == "FailsPrimitive"

    y = ffhyper.Hypergraph(p)
    assert y.k == 2 and y.order == 13
    epo = y.epo()
    assert epo["observed"] == 7928
    assert epo["predicted_main"] == Fraction(13**4, 2)
    est = y.epo_charsum()["estimate"]
    assert est == Fraction(13**4, 2) + Fraction(y.epo_charsum("naive")["s"], 2)

    sub = ffhyper.Hypergraph(ffhyper.Poly(ffhyper.Field("101"), "x1*x2+1")).m_subsets(3)
    assert sub["observed"] == 22075 and sub["within_envelope"]

    paley = ffhyper.Hypergraph.paley(f13, 2)
    assert paley.clique()["omega"] == 4
    try:
        ffhyper.Hypergraph.paley(ffhyper.Field("101"), 2).clique(node_budget=5)
    except ffhyper.BudgetExceeded:
        pass
    else:
        raise AssertionError("expected BudgetExceeded")

    w = ffhyper.weil(f13, [1, 0, 1], 1)
    assert w["sum"] == -1 and w["holds"]

    x = ffhyper.xset(ffhyper.Poly(ffhyper.Field("5"), "x1*x2+1"))
    assert len(x["members"]) == 1 and x["within_bounds"]

    s = ffhyper.slavov([ffhyper.Poly(f13, t, 2) for t in ("x1", "x2", "x1+x2")])
    assert s["observed"] == 12 and s["condition_holds"]

    fields = [ffhyper.Field(q) for q in ("5", "7")]
    one = ffhyper.scan(fields, seed=3, samples=4, workers=1)
    assert one == ffhyper.scan(fields, seed=3, samples=4, workers=4)
    assert one.startswith("# ffhyper scan v1 seed=3")

    report = ffhyper.verify(only=["weil"])
    assert report["pass"] and report["checks"][0]["check"] == "weil"

    try:
        ffhyper.Poly(f13, "x1+*x2")
    except ffhyper.FfhyperError as e:
        assert "column" in str(e)
    else:
        raise AssertionError("expected a parse error")

    print("ffhyper smoke test passed")


if __name__ == "__main__":
    main()
