import pytest

from nmotto import EngineParams, evaluate_cycle

# Reference operating point used throughout the suite: eta_O = 0.82
# exceeds eta_C = 0.8, the regime where the non-Markovian bookkeeping
# matters most.
REF = EngineParams(
    omega_h=1.0, omega_c=0.18, T_h=5.0, T_c=1.0,
    lam=0.01, cutoff=0.4, t1=5.0, t2=60.0,
)


@pytest.fixture(scope="session")
def ref_engine():
    return REF


@pytest.fixture(scope="session")
def ref_tcl2():
    return evaluate_cycle(REF, "tcl2")


@pytest.fixture(scope="session")
def ref_markov():
    return evaluate_cycle(REF, "markov")
