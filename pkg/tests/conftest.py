import warnings

import pytest

from sideband_cooling.errors import LambDickeWarning


@pytest.fixture(autouse=True)
def _strict_warnings():
    # anything other than the documented Lamb-Dicke warning is a bug
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        warnings.simplefilter("default", LambDickeWarning)
        yield
