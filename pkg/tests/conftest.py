from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

import manin_forge

# exact arithmetic is slow per example; keep runs deterministic and bounded
settings.register_profile(
    "exact",
    deadline=None,
    derandomize=True,
    database=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")

DATA = Path(manin_forge.__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA
