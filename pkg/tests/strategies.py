"""Hypothesis strategies for carriers, maps and families."""
from fractions import Fraction

from hypothesis import strategies as st

from realstruct.core import Carrier, DistMap, MapFamily
from realstruct.lab import VALUE_POOL, metric_closure

values = st.sampled_from(VALUE_POOL)


@st.composite
def carriers(draw, low=1, high=4):
    n = draw(st.integers(low, high))
    return Carrier(tuple("abcdefgh"[:n]))


@st.composite
def matrices(draw, n, pi="all"):
    if pi == "all":
        return tuple(tuple(draw(values) for _ in range(n)) for _ in range(n))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = draw(values)
    if pi == "weak":
        zero = draw(st.integers(0, n - 1))
        for i in range(n):
            m[i][i] = Fraction(0) if i == zero else draw(values)
    return metric_closure(m)


@st.composite
def maps(draw, carrier, pi="all", name="d"):
    return DistMap(carrier, name, draw(matrices(carrier.size, pi)))


@st.composite
def families(draw, carrier, pi="all", name="P", low=1, high=3):
    k = draw(st.integers(low, high))
    return MapFamily(carrier, name, tuple(draw(maps(carrier, pi, f"{name.lower()}{i}")) for i in range(k)))


pis = st.sampled_from(["all", "weak", "pseudo"])
