import pytest

from src.parallel import block_map, block_ranges, pairwise_sum


def test_block_ranges_cover_the_rows():
    assert block_ranges(5, 2) == [(0, 2), (2, 4), (4, 5)]
    assert block_ranges(0, 2) == []
    with pytest.raises(ValueError):
        block_ranges(5, 0)


@pytest.mark.parametrize("threads", [1, 2, 5])
def test_block_map_keeps_block_order(threads):
    out = block_map(lambda lo, hi: list(range(lo, hi)), 23, threads=threads, block=4)
    assert [x for chunk in out for x in chunk] == list(range(23))


def test_pairwise_sum_is_a_fixed_tree():
    values = [0.1 * k for k in range(1, 12)]
    assert pairwise_sum(values) == pairwise_sum(list(values))
    assert pairwise_sum(values) == pytest.approx(sum(values))
    assert pairwise_sum([]) == 0.0
    assert pairwise_sum([1j, 2j], zero=0j) == 3j
