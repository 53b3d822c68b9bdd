import pytest

from hamming_harmonic.group_core import GroupParams


@pytest.fixture
def small():
    """Z_3^3: 27 points, enough to enumerate by hand."""
    return GroupParams(2, 3)
