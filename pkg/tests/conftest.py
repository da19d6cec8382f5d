import pytest
from hypothesis import HealthCheck, settings

from softbounds.core import Domain, ValuationStructure, Variable
from softbounds.costfn import CostFunction, ExtTable, LinPlus
from softbounds.network import Instance

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def inst_linplus_sum() -> Instance:
    """Two variables over [1, 10] with cost v1 + v2 and top 12: bound
    filtering alone is idle, projection lifts the constant term to 2."""
    return Instance(
        name="linplus-sum",
        valuation=ValuationStructure(12),
        variables=[Variable(0, Domain(1, 10)), Variable(1, Domain(1, 10))],
        functions=[CostFunction(scope=(0, 1), kind=LinPlus(1, 1, 0))],
    )


@pytest.fixture
def inst_pair_tables() -> Instance:
    """Three variables, two tables whose cost depends on x0 alone
    (columns 1,0,2,1 and 1,2,0,1), top 2: every value of x0 accumulates 2
    across the two tables, so bound filtering wipes the network while each
    single table still supports every bound."""
    t01 = {(v0, v1): c for v0, c in enumerate([1, 0, 2, 1]) for v1 in range(3) if c}
    t02 = {(v0, v2): c for v0, c in enumerate([1, 2, 0, 1]) for v2 in range(3) if c}
    return Instance(
        name="pair-tables",
        valuation=ValuationStructure(2),
        variables=[
            Variable(0, Domain(0, 3)),
            Variable(1, Domain(0, 2)),
            Variable(2, Domain(0, 2)),
        ],
        functions=[
            CostFunction(scope=(0, 1), kind=ExtTable(default=0, table=t01)),
            CostFunction(scope=(0, 2), kind=ExtTable(default=0, table=t02)),
        ],
    )


@pytest.fixture
def inst_cascade() -> Instance:
    """Two variables over {0, 1} with top 4, built so per-value enforcement
    cascades: the unary top cost kills value 0 of x0, the unary floor of x1
    projects 1, the binary minimum of x0's remaining value projects another
    1, and value 1 of x1 then dies at 2 + 2 = top."""
    return Instance(
        name="cascade",
        valuation=ValuationStructure(4),
        variables=[Variable(0, Domain(0, 1)), Variable(1, Domain(0, 1))],
        functions=[
            CostFunction(scope=(0,), kind=ExtTable(default=0, table={(0,): 4})),
            CostFunction(scope=(1,), kind=ExtTable(default=0, table={(0,): 1, (1,): 2})),
            CostFunction(
                scope=(0, 1), kind=ExtTable(default=0, table={(1, 0): 1, (1, 1): 2})
            ),
        ],
    )
