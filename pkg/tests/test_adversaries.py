import numpy as np
import pytest

from bandit_ldim.adversaries import (
    AdaptiveBLAdversary,
    BLTreeAdversary,
    FixedStreamAdversary,
    bltree_stream,
    stream_from_file,
    uniform_label_stream,
)
from bandit_ldim.classes import Stream, gen_constants, gen_full
from bandit_ldim.errors import InputError
from bandit_ldim.fileformat import save_stream
from bandit_ldim.harness import run_game
from bandit_ldim.learners import BSOA, FixedSeed, RandomConsistent

from conftest import make_class


def test_uniform_stream_shape():
    cls = gen_constants(4, 1)
    labels = set()
    for seed in range(40):
        s = uniform_label_stream(cls, 10, seed)
        assert len(s) == 10 and s.realizable
        assert len({ex for ex in s}) == 1
        labels.add(s.examples[0].y)
    assert labels == {0, 1, 2, 3}


def test_uniform_stream_short_horizon():
    cls = gen_constants(4, 1)
    assert {uniform_label_stream(cls, 1, seed).examples[0].y for seed in range(20)} == {0}
    assert len(uniform_label_stream(cls, 0, 3)) == 0


def test_uniform_stream_singleton():
    cls = make_class([(1, 0)], 2)
    s = uniform_label_stream(cls, 5, 0)
    assert all(cls.table[0][x] == y for x, y in s)


def test_bltree_stream_avoids_path_labels():
    cls = gen_constants(3, 1)
    adv = BLTreeAdversary(cls)
    for seed in range(30):
        s = adv.stream(5, np.random.default_rng(seed))
        assert len(s) == 2
        assert s.realizable
        # the labelling hypothesis is constant, so both examples share a label
        assert s.examples[0].y == s.examples[1].y


def test_bltree_stream_truncated_horizon():
    cls = gen_constants(5, 1)
    assert len(bltree_stream(cls, 2, 0)) == 2


def test_bltree_needs_positive_bldim():
    with pytest.raises(InputError):
        bltree_stream(make_class([(0,)]), 3, 0)


def test_fixed_stream_truncates(tmp_path):
    cls = gen_constants(2, 1)
    save_stream(Stream([(0, 0), (0, 1), (0, 0)]), cls, tmp_path / "s.json")
    adv = stream_from_file(tmp_path / "s.json", cls)
    assert adv.name.startswith("file:")
    assert adv.stream(10, None).realizable is False
    assert adv.stream(1, None).realizable is True
    assert len(FixedStreamAdversary(cls, Stream([])).stream(5, None)) == 0


@pytest.mark.parametrize("n", range(2, 7))
def test_adaptive_forces_bldim_on_bsoa(n):
    cls = gen_constants(n, 1)
    trace = run_game(BSOA(cls), AdaptiveBLAdversary(cls), "bandit", 12, 0)
    assert sum(trace.losses) == n - 1


def test_adaptive_singleton():
    cls = make_class([(0, 1)])
    trace = run_game(BSOA(cls), AdaptiveBLAdversary(cls), "bandit", 5, 0)
    assert sum(trace.losses) == 0


def test_adaptive_against_fixed_seed_random_consistent():
    cls = gen_full(2, 2)
    for seed in range(10):
        trace = run_game(FixedSeed(RandomConsistent(cls, seed)), AdaptiveBLAdversary(cls), "bandit", 8, seed)
        assert sum(trace.losses) >= 2


def test_adaptive_commits_to_consistent_hypothesis():
    cls = gen_constants(4, 1)
    adv = AdaptiveBLAdversary(cls)
    assert adv.respond(0, 0) is False
    assert adv.respond(0, 0) is False  # label 0 is already excluded: no descent
    assert adv.descents == 1
    h = adv.hypothesis()
    assert cls.table[h][0] != 0
