import pytest

from dihopset.rng import STREAMS, derive


def test_replayable():
    assert derive(3, "paths", 1).random() == derive(3, "paths", 1).random()


def test_streams_and_counters_differ():
    draws = {derive(0, s).random() for s in STREAMS}
    assert len(draws) == len(STREAMS)
    assert derive(0, "backward", 1, 2).random() != derive(0, "backward", 2, 1).random()


def test_rejects_unknown():
    with pytest.raises(ValueError):
        derive(0, "mystery")
    with pytest.raises(ValueError):
        derive(-1, "paths")
