import numpy as np
import pytest

from tnlab.groups import SupportSet, cyclic_blocks, make_block_permutation_group, make_cyclic_translation_group


@pytest.fixture
def rng():
    return np.random.default_rng(20170424)


@pytest.fixture
def c8():
    return make_cyclic_translation_group(SupportSet.range(0, 8))


@pytest.fixture
def s4_blocks():
    """All 24 permutations of four 4-dim blocks in R^16."""
    return make_block_permutation_group(cyclic_blocks(4, 4))


@pytest.fixture
def s4_points():
    """S_4 permuting the coordinates of R^4 (blocks of size 1)."""
    return make_block_permutation_group(cyclic_blocks(4, 1))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
