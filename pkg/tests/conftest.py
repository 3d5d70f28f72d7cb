import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from windowlang import Dfa, regex_to_dfa

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

AB = ("a", "b")
ABC = ("a", "b", "c")


@st.composite
def dfas(draw, max_states=4, alphabet=AB):
    n = draw(st.integers(1, max_states))
    delta = [[draw(st.integers(0, n - 1)) for _ in alphabet] for _ in range(n)]
    finals = draw(st.frozensets(st.integers(0, n - 1)))
    pad = draw(st.sampled_from(alphabet))
    return Dfa(alphabet, 0, finals, delta, pad)


def words_over(alphabet=AB, max_size=8):
    return st.lists(st.sampled_from(alphabet), max_size=max_size).map("".join)


@pytest.fixture(scope="session")
def goldens():
    from windowlang.acceptance import golden_dfas

    return golden_dfas()


@pytest.fixture
def sigma_a():
    return regex_to_dfa("(a|b|c)*a", ABC)
