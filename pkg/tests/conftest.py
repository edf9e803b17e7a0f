import numpy as np
import pytest

from kaehlersym.geometry import parse_manifold_id

KAEHLER_IDS = ["flat:n=2", "cpn:n=2,c=4", "chn:n=1,c=-4", "chn:n=2,c=-4", "s2xs2",
               "s2xs2:r1=1,r2=2", "cpn-bump"]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def charts():
    return {mid: parse_manifold_id(mid) for mid in KAEHLER_IDS + ["cpn-twisted"]}
