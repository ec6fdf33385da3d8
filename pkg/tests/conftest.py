import numpy as np
import pytest

from liouville import SystemParams, sweep

# taus exercised by the containment/bound acceptance checks (N = 1 throughout)
CONTAINMENT_TAUS = (0.15, 0.3, 0.45, 0.55, 0.6, 0.7, 0.9)


@pytest.fixture(scope="session")
def containment_sweeps():
    """41-point sweeps over alpha in [-20, 20], shared by the acceptance checks."""
    grid = np.linspace(-20.0, 20.0, 41)
    return {
        tau: sweep(SystemParams(tau=tau, bigN=1.0), grid)
        for tau in CONTAINMENT_TAUS
    }


@pytest.fixture()
def run_cli(capsys):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    from liouville.cli import main

    def runner(args):
        code = main(args)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return runner
