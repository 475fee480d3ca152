import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamelib import coordination, matching_pennies, pure_profiles, suite_game, two_player
from regretdescent.game import (
    Edge,
    PolymatrixGame,
    as_profile,
    normalize,
    payoff,
    payoff_against,
    payoff_extremes,
    payoff_vector,
    random_profile,
    uniform_profile,
    validate,
)


def three_player_star():
    z = np.zeros((2, 2))
    return PolymatrixGame((2, 2, 2), (
        Edge(0, 1, [[1, 0], [0, 0]], z),
        Edge(0, 2, [[1, 1], [0, 0]], z),
    ))


def test_validate_well_formed():
    assert validate(matching_pennies()) == []


def test_validate_self_loop():
    game = PolymatrixGame((2, 2), (Edge(0, 0, np.eye(2), np.eye(2)),))
    problems = validate(game)
    assert len(problems) == 1
    assert problems[0].rule == "self-loop"


def test_validate_shape_mismatch():
    game = PolymatrixGame((2, 2), (Edge(0, 1, np.ones((3, 2)), np.ones((2, 2))),))
    problems = validate(game)
    assert len(problems) == 1
    assert problems[0].rule.startswith("shape mismatch")
    assert "edge 0" in str(problems[0])


def test_validate_duplicate_and_range():
    e = Edge(0, 1, np.eye(2), np.eye(2))
    assert [v.rule for v in validate(PolymatrixGame((2, 2), (e, Edge(1, 0, np.eye(2), np.eye(2)))))] \
        == ["duplicate edge"]
    assert [v.rule for v in validate(PolymatrixGame((2, 2), (Edge(0, 5, np.eye(2), np.eye(2)),)))] \
        == ["endpoint out of range"]


def test_validate_normalized_flag_checked():
    game = two_player([[2, 4], [0, 2]], np.eye(2), normalized=True)
    problems = validate(game)
    assert [v.where for v in problems] == ["player 0"]


def test_payoff_extremes_examples():
    assert payoff_extremes(two_player([[2, 4], [0, 2]], np.eye(2), False), 0) == (4.0, 0.0)
    assert payoff_extremes(two_player(np.eye(2), np.eye(2), False), 0) == (1.0, 0.0)
    game = three_player_star()
    assert payoff_extremes(game, 0) == (2.0, 0.0)
    # oracle: enumerate every pure profile
    values = [payoff(game, prof, 0) for prof in pure_profiles(game)]
    assert (max(values), min(values)) == (2.0, 0.0)


def test_isolated_player_extremes():
    game = PolymatrixGame((2, 3), ())
    assert payoff_extremes(game, 1) == (0.0, 0.0)


def test_normalize_examples():
    norm, rec = normalize(two_player([[2, 4], [0, 2]], np.eye(2), False))
    np.testing.assert_allclose(norm.edges[0].payoffs_u, [[0.5, 1.0], [0.0, 0.5]])
    assert norm.normalized and rec.pmax[0] == 4.0 and rec.pmin[0] == 0.0

    pennies = matching_pennies()
    norm, _ = normalize(pennies)
    np.testing.assert_array_equal(norm.edges[0].payoffs_u, pennies.edges[0].payoffs_u)
    np.testing.assert_array_equal(norm.edges[0].payoffs_v, pennies.edges[0].payoffs_v)

    norm, rec = normalize(two_player(np.full((2, 2), 3.0), np.eye(2), False))
    np.testing.assert_array_equal(norm.edges[0].payoffs_u, np.zeros((2, 2)))
    assert rec.degenerate == (True, False) and rec.scale[0] == 0.0


def test_normalize_record_back_conversion():
    raw = suite_game(3, raw_spread=True)
    norm, rec = normalize(raw)
    rng = np.random.default_rng(0)
    x = random_profile(raw, rng)
    for i in range(raw.player_count):
        if not rec.degenerate[i]:
            assert rec.to_raw(i, payoff(norm, x, i)) == pytest.approx(payoff(raw, x, i), abs=1e-9)
    assert rec.degrees == tuple(raw.degree(i) for i in range(raw.player_count))


def test_payoff_examples():
    pennies = matching_pennies()
    u = uniform_profile(pennies)
    for i in (0, 1):
        assert payoff(pennies, u, i) == 0.5
        # oracle: pure profiles weighted by their probabilities
        expected = sum(
            np.prod([xj[int(np.argmax(e))] for xj, e in zip(u, prof)]) * payoff(pennies, prof, i)
            for prof in pure_profiles(pennies))
        assert expected == pytest.approx(0.5)
    coord = coordination()
    both0 = [np.array([1.0, 0]), np.array([1.0, 0])]
    assert payoff(coord, both0, 0) == 1.0
    assert payoff(PolymatrixGame((2, 2), (), normalized=True), uniform_profile(coord), 1) == 0.0


def test_payoff_vector_examples():
    coord = coordination()
    np.testing.assert_array_equal(payoff_vector(coord, [np.array([1.0, 0]), np.array([0.0, 1])], 0), [0, 1])
    np.testing.assert_array_equal(payoff_vector(matching_pennies(), uniform_profile(matching_pennies()), 0),
                                  [0.5, 0.5])
    game = three_player_star()
    x = [np.array([1.0, 0])] * 3
    np.testing.assert_array_equal(payoff_vector(game, x, 0), [2, 0])


def test_payoff_against_examples():
    pennies = matching_pennies()
    u = uniform_profile(pennies)
    assert payoff_against(pennies, u[0], u, 0) == payoff(pennies, u, 0)
    assert payoff_against(pennies, np.zeros(2), u, 0) == 0.0
    assert payoff_against(pennies, np.array([1.0, 0]) - np.array([0.0, 1]), u, 0) == 0.0


def test_as_profile_clamps_and_rejects():
    game = matching_pennies()
    prof = as_profile(game, [[1 + 1e-13, -1e-13], [0.5, 0.5]])
    assert prof[0][1] == 0.0 and prof[0].sum() == 1.0
    with pytest.raises(ValueError, match="negative"):
        as_profile(game, [[1.1, -0.1], [0.5, 0.5]])
    with pytest.raises(ValueError, match="sum"):
        as_profile(game, [[0.6, 0.6], [0.5, 0.5]])
    with pytest.raises(ValueError, match="length"):
        as_profile(game, [[1.0], [0.5, 0.5]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_normalized_extremes_are_attained(seed):
    raw = suite_game(seed % 200, raw_spread=True)
    norm, rec = normalize(raw)
    for i in range(norm.player_count):
        nbrs = norm.neighbors(i)
        if rec.degenerate[i]:
            assert all(np.all(a == 0) for _, a in nbrs)
            continue
        # build explicit pure profiles hitting the best and worst payoff
        for pick_row, pick_col, target in ((np.argmax, np.argmax, 1.0), (np.argmin, np.argmin, 0.0)):
            reduce_ = np.max if target == 1.0 else np.min
            rows = sum(reduce_(a, axis=1) for _, a in nbrs)
            p = int(pick_row(rows))
            prof = uniform_profile(norm)
            prof[i] = np.eye(norm.strategy_counts[i])[p]
            for j, a in nbrs:
                prof[j] = np.eye(norm.strategy_counts[j])[int(pick_col(a[p]))]
            assert payoff(norm, prof, i) == pytest.approx(target, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_normalization_is_affine_and_keeps_argmax(seed):
    raw = suite_game(seed % 200, raw_spread=True)
    norm, rec = normalize(raw)
    rng = np.random.default_rng(seed)
    x, y = random_profile(raw, rng), random_profile(raw, rng)
    for i in range(raw.player_count):
        if rec.degenerate[i]:
            continue
        d_norm = payoff(norm, x, i) - payoff(norm, y, i)
        d_raw = payoff(raw, x, i) - payoff(raw, y, i)
        assert d_norm == pytest.approx(rec.scale[i] * d_raw, abs=1e-9)
        pv_raw, pv_norm = payoff_vector(raw, x, i), payoff_vector(norm, x, i)
        assert set(np.flatnonzero(pv_raw >= pv_raw.max() - 1e-9 / rec.scale[i])) \
            == set(np.flatnonzero(pv_norm >= pv_norm.max() - 1e-9))
        assert payoff(norm, x, i) == pytest.approx(float(np.sum(x[i] * pv_norm)), abs=1e-12)
        assert -1e-9 <= payoff(norm, x, i) <= 1 + 1e-9
