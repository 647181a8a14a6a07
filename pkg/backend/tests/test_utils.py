"""Tests des utilitaires communs"""

import numpy as np
import pytest

from src.utils.aan_utils import format_duration, rng_for


@pytest.mark.parametrize("seconds, expected", [
    (2.54, "2.5s"),
    (90, "1 min 30 s"),
    (187.4, "3 min 07 s"),
    (7500, "2 h 05 min"),
])
def test_format_duration(seconds, expected):
    assert format_duration(seconds) == expected


def test_format_duration_rejects_negative():
    with pytest.raises(ValueError):
        format_duration(-1.0)


def test_rng_for_streams_are_stable_and_distinct():
    first = rng_for(3, "gan", "epoch", 1).random(4)
    assert np.array_equal(first, rng_for(3, "gan", "epoch", 1).random(4))
    assert not np.array_equal(first, rng_for(3, "gan", "epoch", 2).random(4))
    assert not np.array_equal(first, rng_for(4, "gan", "epoch", 1).random(4))
