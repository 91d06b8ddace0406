import pytest

from wspin.polyparse import parse_poly


def ade_family(max_param=10):
    """(name, text) for the A, D, E superpotentials with parameters up to ``max_param``."""
    out = [(f"A{r - 1}", f"x^{r}") for r in range(2, max_param + 1)]
    out += [(f"D{n + 1}", f"x^{n} + x*y^2") for n in range(2, max_param + 1)]
    out += [("E6", "x^3 + y^4"), ("E7", "x^3 + x*y^3"), ("E8", "x^3 + y^5")]
    return out


ADE = ade_family()
ADE_TWO_VARS = [(n, t) for n, t in ADE if "y" in t]


@pytest.fixture(params=ADE, ids=[n for n, _ in ADE])
def ade(request):
    name, text = request.param
    return name, parse_poly(text)
