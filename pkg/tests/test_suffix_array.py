import random

import numpy as np
import pytest

from fmagap.errors import ModelViolationError
from fmagap.suffix_array import doubling_order, encode, naive_order


def _texts(order, codes, ends):
    return [tuple(codes[g:ends[g]]) for g in order]


@pytest.mark.parametrize("seed", range(25))
def test_doubling_sorts_like_naive(seed):
    rng = random.Random(seed)
    strings = ["$" + "".join(rng.choice("ab") for _ in range(rng.randint(0, 30))) + "#"
               for _ in range(rng.randint(1, 5))]
    alphabet = "$#ab"
    codes, ends = encode(strings, alphabet)
    order = doubling_order(codes, ends)
    offsets = [sum(map(len, strings[:k])) for k in range(len(strings))]
    expected = [offsets[j - 1] + p - 1 for j, p in naive_order(strings, alphabet)]
    assert _texts(order, codes, ends) == _texts(expected, codes, ends)


def test_identical_texts_with_different_groups_fail():
    codes, ends = encode(["$ab#", "$ab#"], "$#ab")
    groups = list(range(8))
    with pytest.raises(ModelViolationError):
        doubling_order(codes, ends, np.array(groups))


def test_naive_order_breaks_ties_by_string():
    assert naive_order(["$a#", "$a#"], "$#a")[:2] == [(1, 1), (2, 1)]
