import pytest
from hypothesis import HealthCheck, settings

from gtplancherel.experiments import converge, default_specs

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def default_tables():
    """Every default convergence table, computed once: {(regime, name): (spec, table)}."""
    return {(regime, name): (spec, converge(spec))
            for regime, specs in default_specs().items() for name, spec in specs}
