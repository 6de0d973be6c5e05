from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from vgenera.bordism import BordismElement
from vgenera.multiseq import PONTRYAGIN
from vgenera.partitions import Partition, partitions_of
from vgenera.scalars import QScalar
from vgenera.series import TruncatedSeries

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))
nonzero_rationals = st.builds(Fraction, st.integers(-50, 50).filter(bool), st.integers(1, 12))


@st.composite
def qscalars(draw, q_order=None):
    m = draw(st.integers(0, 4)) if q_order is None else q_order
    return QScalar([draw(rationals) for _ in range(m + 1)])


@st.composite
def series(draw, order=None, q_order=0):
    n = draw(st.integers(0, 10)) if order is None else order
    if q_order:
        return TruncatedSeries([draw(qscalars(q_order)) for _ in range(n + 1)])
    return TruncatedSeries([draw(rationals) for _ in range(n + 1)])


@st.composite
def reversible_series(draw, max_order=20):
    n = draw(st.integers(1, max_order))
    return TruncatedSeries([0, 1] + [draw(rationals) for _ in range(n - 1)])


@st.composite
def odd_e_series(draw, max_order=14):
    n = draw(st.integers(1, max_order))
    return TruncatedSeries([0, 1] + [draw(rationals) if k % 2 else 0 for k in range(2, n + 1)])


partitions = st.integers(0, 7).flatmap(lambda n: st.sampled_from(partitions_of(n)))
positive_partitions = st.integers(1, 7).flatmap(lambda n: st.sampled_from(partitions_of(n)))


@st.composite
def bordism_elements(draw, degree=None, variables=PONTRYAGIN):
    unit = 4 if variables == PONTRYAGIN else 2
    d = draw(st.sampled_from(range(unit, 17, unit))) if degree is None else degree
    if variables == PONTRYAGIN:
        monos = [tuple(2 * p for p in lam) for lam in partitions_of(d // 4)]
    else:
        monos = [tuple(lam) for lam in partitions_of(d // 2)]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=4, unique=True))
    return BordismElement({k: draw(nonzero_rationals) for k in chosen}, d)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
