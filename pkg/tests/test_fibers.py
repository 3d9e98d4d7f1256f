"""Fiberwise oracles: Hasse sets, Jacobian ranks, HS by linear algebra."""
import random

import pytest

from toricres.binomial_charts import ChartBinomial, make_state
from toricres.fibers import (fiber_report, hasse_derivative_polys, hasse_sets_agree, hs_fiber,
                             jacobian_check, laurent_generators, nu_mod_p, singular_points_agree)
from toricres.hasse_hypersurface import resolve_hypersurface
from toricres.lattice_fan import standard_fan
from toricres.standard_basis_hs import hs_at_distinguished, lattice_split
from helpers import hypersurface_state, rand_hypersurface


def chart0(alpha, beta, gamma=()):
    return hypersurface_state(len(alpha), len(gamma), alpha, beta, gamma).ideals[0]


def test_vanishing_binomial_coefficient_mod_2():
    # d/dx1 of x1^2 is 2 x1, which is zero mod 2; the monomial x1 still cuts the same set
    f = ChartBinomial((2, 0, 0), (0, 1, 1), ())
    polys = hasse_derivative_polys(f, 2)
    assert all(all(e != (1, 0, 0) for _, e in P) for P in polys[1:])
    for p in (2, 3):
        agree, n = hasse_sets_agree(f, p)
        assert agree and n >= 1


def test_unit_direction_counts_in_char_2():
    # every x-derivative of x3^2 - x1^2 y1 vanishes mod 2; the y1-derivative does not
    f = chart0((0, 0, 2), (2, 0, 0), (1,)).binomials[0]
    assert hasse_sets_agree(f, 2) == (True, 2)


@pytest.mark.parametrize("seed", range(15))
def test_hasse_sets_random(seed):
    rng = random.Random(seed)
    while True:
        f = hypersurface_state(*rand_hypersurface(rng, max_n=4)).ideals[0].binomials[0]
        if f.d >= 2:
            break
    for p in (2, 3):
        assert hasse_sets_agree(f, p)[0]


def test_e1_singular_point_is_the_origin():
    I = chart0((2, 0, 0), (0, 1, 1))
    for p in (2, 3, 5):
        rep = jacobian_check(I, p)
        assert rep.singular_points == 1
        assert singular_points_agree(I, p) == (True, 1, 1)


def test_resolved_charts_are_smooth_in_every_fiber():
    st = hypersurface_state(3, 0, (2, 0, 0), (0, 1, 1), ())
    fin = resolve_hypersurface(st).final_state
    for I in fin.ideals:
        for p in (2, 3, 5):
            assert jacobian_check(I, p).ok


@pytest.mark.parametrize("seed", range(8))
def test_hs_fiber_matches_staircase(seed):
    rng = random.Random(200 + seed)
    r, m, a, b, g = rand_hypersurface(rng, max_n=4, max_exp=2)
    I = hypersurface_state(r, m, a, b, g).ideals[0]
    h = hs_at_distinguished(I)
    if h.empty:
        return
    for p in (2, 3, 5):
        assert list(hs_fiber(I, p, 4)) == list(h.values(4))
        assert nu_mod_p(I, p) == lattice_split(I).nu


def test_curve_hs_in_every_fiber():
    st = make_state(standard_fan(3), [([((0, 2, 0), (1, 0, 1), ()), ((3, 0, 0), (0, 1, 1), ()),
                                        ((2, 1, 0), (0, 0, 2), ())], ())])
    I = st.ideals[0]
    for p in (2, 3, 5):
        assert hs_fiber(I, p, 5) == (1, 4, 7, 10, 13, 16)


def test_laurent_generators_of_a_hypersurface():
    I = chart0((1, 0), (0, 2), (1,))
    # x1 - x2^2 y1 up to the unit -y1^-1
    assert laurent_generators(I) == [[(1, (0, 2, 0)), (-1, (1, 0, -1))]]


def test_fiber_report_on_e1():
    st = hypersurface_state(3, 0, (2, 0, 0), (0, 1, 1), ())
    rep = fiber_report(st, [2, 3])
    assert rep["ok"]
    entry = rep["charts"][0]["primes"][0]
    assert entry["singular_points"] == 1 and entry["jacobian_agrees"] and entry["hasse_sets_agree"]
