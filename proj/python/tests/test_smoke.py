from fractions import Fraction

import pytest

import bushy


def test_fstring_and_space():
    s = bushy.FString("1.2")
    assert len(s) == 2 and s[1] == 2
    assert str(s.child(0)) == "1.2.0"
    assert bushy.FString("1").is_prefix_of(s)
    assert str(bushy.BoundedSpace.parse("3/2")) == "3,3/2"


def test_is_big_agrees_with_oracle():
    sp = bushy.BoundedSpace.parse("3/2")
    b = bushy.StringSet.explicit({bushy.FString("0"), bushy.FString("1.0"), bushy.FString("1.2")})
    t = bushy.is_big(b, "e", 2, sp)
    assert t is not None
    assert set(map(str, t.leaves())) <= {"0", "1.0", "1.2"}
    assert t.validate() == []
    assert bushy.is_big(b, "e", 3, sp) is None
    for n in (1, 2, 3):
        assert (bushy.is_big(b, "e", n, sp) is not None) == bushy.is_big_oracle(b, "e", n, sp)


def test_closure_and_measure():
    sp = bushy.BoundedSpace.parse("2/2")
    c = bushy.k_closure(bushy.StringSet.explicit({bushy.FString("0.0"), bushy.FString("0.1")}), 2, sp)
    assert c.contains(bushy.FString("0"))
    assert bushy.measure_oracle([bushy.FString("0"), bushy.FString("1.1")], 4) == Fraction(3, 4)


def test_forcing_and_kurtz():
    sp = bushy.BoundedSpace.parse("3/6")
    g = bushy.Functional.random(sp, 2, 5, step_min=3, step_max=5)
    rows, truncated = bushy.kurtz_run(g, 2)
    assert not truncated
    assert rows[2]["mu"] <= Fraction(9, 16) * rows[0]["mu"]
    value, tree = bushy.force_value(g, "e", 0)
    assert all(g.at(leaf)[0] == value for leaf in tree.leaves())


def test_allowance_and_errors():
    assert bushy.check_allowance(bushy.random_allowance(3)) == []
    with pytest.raises(bushy.ParseError):
        bushy.FString("1.x")
    with pytest.raises(bushy.DomainError):
        bushy.BoundedSpace(2, [3])
