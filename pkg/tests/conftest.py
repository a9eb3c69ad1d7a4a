import pytest

import ckshift as ck


@pytest.fixture
def golden_mean():
    return ck.FiniteGraph(((1, 1), (1, 0)))


@pytest.fixture
def full2():
    return ck.FiniteGraph(((1, 1), (1, 1)))


@pytest.fixture
def two_cycle():
    return ck.FiniteGraph(((0, 1), (1, 0)))


@pytest.fixture
def ray():
    return ck.BandedTailGraph((), 0, (1,), ())


@pytest.fixture
def all_ones_infinite():
    return ck.BlockPatternGraph((None,), ((1,),))


@pytest.fixture
def golden_model(golden_mean):
    return ck.dense_model(golden_mean)


@pytest.fixture
def full2_model(full2):
    return ck.dense_model(full2)


@pytest.fixture
def toeplitz_model(full2):
    return ck.validate_model(full2, [ck.make_pattern(full2, finite=(1, 2))])
