import datetime

import numpy as np
import pytest

from minregime import Frequency, ReturnSeries


def make_series(n, seed=0, mu=0.0003, sigma=0.01, frequency=Frequency.DAILY,
                label="test"):
    """Gaussian daily series with consecutive calendar dates."""
    rng = np.random.default_rng(seed)
    start = datetime.date(2000, 1, 1)
    return ReturnSeries(
        dates=tuple(start + datetime.timedelta(days=i) for i in range(n)),
        returns=rng.normal(mu, sigma, n),
        frequency=frequency,
        label=label,
    )


def series_from(values, frequency=Frequency.DAILY, label="test"):
    start = datetime.date(2000, 1, 1)
    values = np.asarray(values, dtype=float)
    return ReturnSeries(
        dates=tuple(start + datetime.timedelta(days=i)
                    for i in range(len(values))),
        returns=values,
        frequency=frequency,
        label=label,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
