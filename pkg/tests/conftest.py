import random

import pytest

from webrely.stats import DefectSampleSet, WeibullModel, sample

# fixed-seed synthetic sample reused by fitting, gof and acceptance tests
FIXTURE_SEED = 5
FIXTURE_MODEL = WeibullModel(shape=1.63, scale=2.4)


@pytest.fixture(scope="session")
def fixed_sample() -> DefectSampleSet:
    rng = random.Random(FIXTURE_SEED)
    values = sample(FIXTURE_MODEL, 500, rng)
    return DefectSampleSet(tuple(values), (), "synthetic-fixture")
