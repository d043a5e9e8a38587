import functools

import pytest
from hypothesis import HealthCheck, settings

from ramsey_turan.graph import ConstructionParams, assemble_construction

settings.register_profile(
    "repo", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

# Desk instances (r, s) -> construction parameters.  All have z <= 40,
# t <= 4 and N <= 1500; k = 3 keeps near-antipodal cell pairs around.
DESK = {
    (2, 2): dict(z=40, k=3, epsilon=0.4, t=4, seed=1),
    (3, 2): dict(z=10, k=3, epsilon=0.4, t=4, seed=1),
    (3, 3): dict(z=40, k=3, epsilon=0.25, t=4, seed=1),
    (4, 3): dict(z=40, k=3, epsilon=0.3, t=4, seed=1),
}


@functools.lru_cache(maxsize=None)
def desk_output(r, s):
    return assemble_construction(ConstructionParams(r=r, s=s, **DESK[(r, s)]))


@pytest.fixture(params=sorted(DESK), ids=lambda rs: f"r{rs[0]}s{rs[1]}")
def desk(request):
    r, s = request.param
    return r, s, desk_output(r, s)


# One line per acceptance criterion, filled in by tests/test_acceptance.py
# and repeated at the end of the run.
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
