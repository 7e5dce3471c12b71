import pytest

from oracles import Coeff, RawGroupoid


def as_dicts(F, idx=None):
    """Family elements as ``{arrow_name: value_index}`` dicts."""
    idx = range(F.k) if idx is None else idx
    return [{F.G.arrows[g]: y for g, y in F.fn(int(i)).items} for i in idx]


def oracle_pair(F):
    return RawGroupoid(F.G.to_raw()), Coeff(F.Y.mul, F.Y.unit)


@pytest.fixture
def helpers():
    class H:
        pass

    H.as_dicts = staticmethod(as_dicts)
    H.oracle_pair = staticmethod(oracle_pair)
    return H
