"""Hypothesis strategies for random algebraic values."""
from hypothesis import strategies as st

from directfinite import GF, QQ, FreeAbelianGroup, FreeGroup, GroupRingElem, NearRingElem, symmetric

Z = FreeAbelianGroup(1)
S3 = symmetric(3)
F2 = FreeGroup(2)
GF5 = GF(5)

GROUP_ELEMENTS = {
    "Z": [Z((i,)) for i in range(-2, 3)],
    "S3": S3.elements(),
    "F2": F2.ball(1),
}
GROUPS = {"Z": Z, "S3": S3, "F2": F2}


def coefficients(field):
    if field is QQ:
        return st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(lambda c: c != 0)
    return st.integers(1, field.order - 1)


@st.composite
def near_ring_elems(draw, group_name, field, max_terms=2, max_degree=3):
    G = GROUP_ELEMENTS[group_name]
    group = GROUPS[group_name]
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        vars_ = draw(st.lists(st.sampled_from(G), max_size=max_degree))
        mono = {}
        for g in vars_:
            mono[g] = mono.get(g, 0) + 1
        terms.append((draw(coefficients(field)), mono))
    return NearRingElem.from_terms(group, field, terms)


@st.composite
def group_ring_elems(draw, group_name, field, max_terms=3):
    G = GROUP_ELEMENTS[group_name]
    coeffs = {}
    for _ in range(draw(st.integers(0, max_terms))):
        g = draw(st.sampled_from(G))
        coeffs[g] = draw(coefficients(field))
    return GroupRingElem(GROUPS[group_name], field, coeffs)

