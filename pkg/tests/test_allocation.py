import math

from hypothesis import given, strategies as st

from hetnet_sim.allocation import active_prbs, allocate_fair

from oracles import round_robin_counts


def test_seven_users_on_100_prbs():
    blocks, rejected = allocate_fair(range(100), range(7))
    assert [len(blocks[u]) for u in range(7)] == [15, 15, 14, 14, 14, 14, 14]
    assert rejected == []
    assert blocks[0] == list(range(15)) and blocks[6][-1] == 99


def test_single_subscriber_gets_whole_fragment():
    blocks, _ = allocate_fair(range(25, 50), [42])
    assert blocks == {42: list(range(25, 50))}


def test_overload_rejects_excess():
    blocks, rejected = allocate_fair(range(10), range(12))
    assert all(len(b) == 1 for b in blocks.values()) and len(blocks) == 10
    assert rejected == [10, 11]
    assert active_prbs(blocks) == frozenset(range(10))


def test_active_sets():
    assert active_prbs(allocate_fair(range(100), [])[0]) == frozenset()
    assert active_prbs(allocate_fair(range(25, 50), [3, 9])[0]) == frozenset(range(25, 50))


@given(
    st.integers(0, 99).flatmap(lambda lo: st.tuples(st.just(lo), st.integers(lo + 1, 100))),
    st.sets(st.integers(0, 10_000), max_size=150),
)
def test_allocation_invariants(bounds, users):
    prbs = range(*bounds)
    p, u = len(prbs), len(users)
    blocks, rejected = allocate_fair(prbs, users)
    alphas = [len(b) for b in blocks.values()]
    assert len(blocks) == min(p, u)
    assert set(blocks) | set(rejected) == users
    if blocks:
        assert max(alphas) - min(alphas) <= 1
        assert min(alphas) >= 1
    if u:
        assert sum(alphas) == min(p, u * math.ceil(p / u))
    if 1 <= u <= p:
        assert sum(alphas) == p
    seen = set()
    for b in blocks.values():
        assert not seen & set(b)
        assert set(b) <= set(prbs)
        assert b == list(range(b[0], b[0] + len(b)))
        seen |= set(b)
    expected = round_robin_counts(p, users)
    assert {k: len(v) for k, v in blocks.items()} == {k: v for k, v in expected.items() if v}
