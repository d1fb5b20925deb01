import numpy as np
import pytest

from rwcluster.geometry import ModelParams, ParticleSystem


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_system(points, labels=None, **kwargs):
    kwargs.setdefault("b", min(3, len(points)))
    params = ModelParams(**kwargs)
    system = ParticleSystem.from_points(np.asarray(points, dtype=float), params,
                                        labels=labels)
    return system, params


def random_system(rng, n=12, m=2, spread=3.0, **kwargs):
    points = rng.normal(scale=spread, size=(n, m))
    return make_system(points, **kwargs)
