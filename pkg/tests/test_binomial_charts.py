import random

import pytest

from toricres.binomial_charts import (Chart, ChartBinomial, ChartIdeal, EmbeddingState, Monomial,
                                      TorusRelation, character_lattice, check_gluing, make_ideal,
                                      make_state, normalize, order_key, restrict_positions,
                                      restrict_to_face, torus_lattice)
from toricres.blowup_transform import blow_up_global
from toricres.errors import InvalidInput, SharedSupport, TorsionError, ZeroBinomial
from toricres.lattice_fan import cone, standard_fan

from helpers import hypersurface_state, rand_hypersurface


def test_normalize_orders_sides():
    f = normalize((0, 1, 1), (2, 0, 0), ())
    assert f == ChartBinomial((0, 1, 1), (2, 0, 0), ())
    g = normalize((2, 0, 0), (0, 1, 1), ())
    assert g == f
    h = normalize((3, 0), (0, 1), (2, -1))
    assert h == ChartBinomial((0, 1), (3, 0), (-2, 1))


def test_normalize_special_cases():
    assert normalize((0, 0), (0, 0), (1, -2)) == TorusRelation((1, -2))
    assert normalize((0, 0), (1, 2), ()) == ChartBinomial((0, 0), (1, 2), ())
    assert isinstance(normalize(None, (1, 0), (1,)), Monomial)
    with pytest.raises(SharedSupport):
        normalize((1, 1), (0, 1))
    with pytest.raises(ZeroBinomial):
        normalize((0, 0), (0, 0), (0,))
    with pytest.raises(ZeroBinomial):
        normalize(None, None)
    with pytest.raises(InvalidInput):
        normalize((1, -1), (0, 0))


@pytest.mark.parametrize("seed", range(30))
def test_normalize_idempotent(seed):
    rng = random.Random(seed)
    _, _, a, b, g = rand_hypersurface(rng)
    f = normalize(a, b, g)
    assert normalize(f.alpha, f.beta, f.gamma) == f
    assert f.is_normalized()
    assert order_key(f.alpha) <= order_key(f.beta)
    assert normalize(b, a, tuple(-x for x in g)) == f


def test_torsion_detection():
    I = make_ideal([((2, 0), (0, 2), ())])
    with pytest.raises(TorsionError):
        torus_lattice(I)
    J = make_ideal([((2, 0), (0, 3), ())])
    assert torus_lattice(J).rank == 1
    K = make_ideal([((1,), (0,), (0,))], torus=[(2,)])
    with pytest.raises(TorsionError):
        torus_lattice(K)


def test_restriction_moves_variables_to_torus():
    I = make_ideal([((2, 0, 0), (0, 1, 1), ())])
    R = restrict_positions(I, (0, 1))
    assert R.nx == 2 and R.ny == 1
    # x2 * x3 = x1^2 with x3 a unit
    assert R.binomials == (ChartBinomial((0, 1), (2, 0), (-1,)),)
    assert R.chart.moved == (2,)
    R0 = restrict_positions(I, ())
    assert not R0.binomials and R0.torus.gammas == ((2, -1, -1),)


@pytest.mark.parametrize("seed", range(25))
def test_restriction_composes(seed):
    rng = random.Random(seed)
    r, m, a, b, g = rand_hypersurface(rng)
    st = hypersurface_state(r, m, a, b, g)
    I = st.ideals[0]
    k1 = sorted(rng.sample(range(r), rng.randint(0, r)))
    k2 = sorted(rng.sample(k1, rng.randint(0, len(k1))))
    step = restrict_positions(restrict_positions(I, k1), [k1.index(i) for i in k2])
    direct = restrict_positions(I, k2)
    assert step.chart.slots == direct.chart.slots
    assert set(step.chart.moved) == set(direct.chart.moved)
    assert character_lattice(step, st.fan) == character_lattice(direct, st.fan)


def test_state_validation():
    fan = standard_fan(2)
    with pytest.raises(InvalidInput):
        make_state(fan, [([(None, (1, 0), ())], ())])
    with pytest.raises(InvalidInput):
        EmbeddingState(fan, ())
    st = make_state(fan, [([((2, 0), (0, 3), ())], ())])
    assert check_gluing(st)[0]


def test_gluing_detects_mismatch():
    st = hypersurface_state(3, 0, (2, 0, 0), (0, 1, 1), ())
    new, _ = blow_up_global(st, cone(0, 1, 2))
    assert check_gluing(new)[0]
    ideals = list(new.ideals)
    ideals[1] = ideals[1].with_binomials([ChartBinomial((1, 0, 0), (0, 0, 1), ())])
    ok, bad = check_gluing(EmbeddingState(new.fan, tuple(ideals)))
    assert not ok and bad


@pytest.mark.parametrize("seed", range(20))
def test_blowups_keep_gluing(seed):
    rng = random.Random(seed)
    r, m, a, b, g = rand_hypersurface(rng)
    st = hypersurface_state(r, m, a, b, g)
    for _ in range(3):
        cones = [c for c in st.fan.all_cones() if c.dim >= 2]
        if not cones:
            break
        st, _ = blow_up_global(st, rng.choice(cones))
        assert check_gluing(st)[0]
