"""Shared hypothesis strategies and small construction helpers for tests."""

from fractions import Fraction

from hypothesis import strategies as st

from multipoint.rational import rat


def to_rat(f: Fraction):
    return rat(f.numerator, f.denominator)


def rationals(min_value=-2, max_value=2, max_denominator=16):
    return st.fractions(
        min_value=min_value, max_value=max_value, max_denominator=max_denominator
    ).map(to_rat)


def points2(**kw):
    return st.tuples(rationals(**kw), rationals(**kw))


def points3(**kw):
    return st.tuples(rationals(**kw), rationals(**kw), rationals(**kw))


def segments2(**kw):
    return st.tuples(points2(**kw), points2(**kw))


def nondegenerate_triangle3(**kw):
    from multipoint.exactgeom import cross3, vsub
    return (
        st.tuples(points3(**kw), points3(**kw), points3(**kw))
        .filter(lambda t: cross3(vsub(t[1], t[0]), vsub(t[2], t[0])) != (0, 0, 0))
    )
