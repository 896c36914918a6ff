"""Smoke test for the `mealy` extension module.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import math

import mealy

BELLMAN = """
alphabet = 3
b = (a, 1, b)[2,3,1]
a = (1, 1, a)[1,1,2]
main = b
"""

FIBONACCI = """
alphabet = 2
s = (t, s)[1,1]
t = (1, s)
main = s
"""

ODOMETER = """
alphabet = 2
t = (1, t)[2,1]
"""


def main():
    b = mealy.parse_wreath(BELLMAN)
    assert b.default_name == "b" and b.names()[:2] == ["b", "a"]
    t, a = b["b"], b["a"]
    assert t.alphabet_size == 3
    assert t.apply([1, 2, 3]) == mealy.apply(t, [1, 2, 3])
    assert (a * a * a) == (a * a)
    assert t ** 11 == t ** 8 and t ** 10 != t ** 7

    series = mealy.activity_series(t, 10)
    assert series == list(range(2, 12)), series
    assert mealy.brute_force_activity(t, 5) == series[4]
    assert mealy.classify(t)["degree"] == 1

    order = mealy.decide_order(t)
    assert order["verdict"] == "finite", order
    assert order["period"] == 3 and order["index"] == 8
    assert order["vertices"] == 9 and order["complete"]
    assert mealy.power_oracle(t, order["period"]) == (8, 3)

    s = mealy.parse_wreath(FIBONACCI)["s"]
    assert s * s == s
    fib = mealy.activity_series(s, 40)
    assert all(x + y == z for x, y, z in zip(fib, fib[1:], fib[2:]))
    assert isinstance(mealy.activity(s, 200), int) and mealy.activity(s, 200) > 2**64
    growth = mealy.classify(s)
    assert growth["kind"] == "exponential"
    assert abs(growth["lambda"] - (1 + math.sqrt(5)) / 2) < 1e-6

    odo = mealy.parse_wreath(ODOMETER)["t"]
    assert mealy.decide_order(odo)["verdict"] == "infinite"

    flip = mealy.Transformation(2, [[0, 0]], [[2, 1]])
    assert (flip * flip).is_identity() and flip.state_count == 1
    assert flip == mealy.Transformation.identity(2).compose(flip)
    assert mealy.parse_wreath(flip.to_wreath("f"))["f"] == flip

    try:
        mealy.parse_wreath("alphabet = 2\nx = (y, x)[1,2]\n")
    except mealy.MealyError as e:
        assert isinstance(e, ValueError)
    else:
        raise AssertionError("unknown name accepted")
    try:
        mealy.brute_force_activity(s, 30, budget=10)
    except mealy.ResourceLimitError:
        pass
    else:
        raise AssertionError("budget ignored")

    print("smoke test passed")


if __name__ == "__main__":
    main()
