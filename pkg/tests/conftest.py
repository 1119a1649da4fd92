import pytest

from ris_plnc.model import SystemConfig
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def ref_cfg():
    """ps1=2, ps2=1, pr=2, n0=1, eight elements per surface."""
    return SystemConfig(ps1=2.0, ps2=1.0, pr=2.0, n0=1.0, n1=8, n2=8, n3=8)
