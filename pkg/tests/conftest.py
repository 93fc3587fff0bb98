import numpy as np
import pytest

from unified_products import (
    ExtendingDatum,
    cyclic,
    klein,
    named_group,
    right_transversal,
    subgroup,
    symmetric,
)
from unified_products.catalog import subgroup_by_labels


def z4_datum(host=None) -> ExtendingDatum:
    """Z2 with s*s = 1_S and f(s, s) = a; its product is cyclic of order 4."""
    H = host or cyclic(2)
    return ExtendingDatum(H, [[0, 1], [1, 0]], [[0, 0], [1, 1]], [[0, 1], [0, 1]],
                          [[0, 0], [0, 1]])


def s3_setup():
    """S3 with H = <(12)> and the transversal {e, (123), (132)}."""
    E = symmetric(3)
    H = subgroup(E, subgroup_by_labels(E, ["e", "(12)"]))
    T = right_transversal(E, H, reps=[E.index("e"), E.index("(123)"), E.index("(132)")])
    return E, H, T


@pytest.fixture
def z2():
    return cyclic(2)


@pytest.fixture
def v4():
    return klein()


@pytest.fixture
def s3():
    return named_group("S3")


@pytest.fixture
def z4d():
    return z4_datum()


def trivial_ract(m, n):
    return np.tile(np.arange(m)[:, None], (1, n))
