import math

import pytest

from squeezed_readout import ProbeState, UnitContext, from_experimental

# matched operating point used throughout: kappa = 2 chi_s,
# chi_s = 2 pi x 0.15 MHz, T1 = 3 ms, alpha = 10, t = 0.714 us
T_MATCHED_US = 0.714
R_MATCHED = 0.74
PHI_DEFAULT = 0.5 * math.pi


@pytest.fixture(scope="session")
def units() -> UnitContext:
    return UnitContext(0.15e6)


@pytest.fixture(scope="session")
def params_k2():
    return from_experimental(0.15, 2.0, 3.0)


@pytest.fixture(scope="session")
def params_k1():
    return from_experimental(0.15, 1.0, 3.0)


@pytest.fixture(scope="session")
def t_matched(units) -> float:
    return units.to_internal_time(T_MATCHED_US)


@pytest.fixture(scope="session")
def probe_matched() -> ProbeState:
    return ProbeState(alpha=10.0, theta_alpha=0.0, r=R_MATCHED, theta_xi=math.pi)


@pytest.fixture(scope="session")
def probe_coherent() -> ProbeState:
    return ProbeState(alpha=10.0, theta_alpha=0.0, r=0.0, theta_xi=math.pi)
