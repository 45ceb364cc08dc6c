import pytest

from adrsplit import SweepSpec, default_tau_list, run_sweep

# acceptance sweep protocol: n = 500, tau = 0.5/2^k for k = 13..18 (the range
# sits below the advective step-size limit of the explicit reaction substeps;
# coarser steps are provably unstable for the gradient-dependent problems)
ACCEPT_K = (13, 18)
ACCEPT_N = 500

ALL_FOUR = ("classical_lie", "corrected_first_order", "classical_strang", "predictor_corrector")


def _sweep(problem, methods):
    spec = SweepSpec(
        problem=problem,
        methods=methods,
        tau_list=default_tau_list(0.5, *ACCEPT_K),
        grid_points=ACCEPT_N,
    )
    return run_sweep(spec)


@pytest.fixture(scope="session")
def report_ex1():
    return _sweep("ex1", ALL_FOUR)


@pytest.fixture(scope="session")
def report_ex2():
    return _sweep("ex2", ALL_FOUR)


@pytest.fixture(scope="session")
def report_ex4():
    return _sweep("ex4", ("predictor_corrector",))


@pytest.fixture(scope="session")
def report_ex4c():
    return _sweep("ex4c", ("predictor_corrector",))


def method_sweep(report, method):
    for sweep in report.methods:
        if sweep.method == method:
            return sweep
    raise KeyError(method)
