import contextlib
import io
import os

import numpy as np
import pytest


def run_cli(argv, env=None):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    from tcaudit import cli

    saved = dict(os.environ)
    if env:
        os.environ.update(env)
    out, err = io.StringIO(), io.StringIO()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = cli.main(list(argv))
    finally:
        os.environ.clear()
        os.environ.update(saved)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2.0


def tridiagonal_dense(diag, offdiag):
    m = np.diag(np.asarray(diag, dtype=float))
    off = np.asarray(offdiag, dtype=float)
    if off.size:
        m += np.diag(off, 1) + np.diag(off, -1)
    return m
