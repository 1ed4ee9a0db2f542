import pytest
from hypothesis import settings, HealthCheck

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

from remitwatch.chainsim import ScenarioConfig, init_scenario


@pytest.fixture(scope="session")
def fixed_config():
    """The fixed-seed scenario used across the suite: >=10k transactions,
    2% non-linear fraud."""
    return ScenarioConfig(seed=7, n_customers=20_000)


@pytest.fixture(scope="session")
def scenario_10k(fixed_config):
    sim = init_scenario(fixed_config)
    sim.advance(2000)
    return sim


@pytest.fixture(scope="session")
def dataset_10k(scenario_10k, tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "scenario10k.jsonl"
    scenario_10k.export_dataset(str(path))
    return path
