import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import leveled_trees
from suslinbench import _kernels_py, kernels

try:
    from suslinbench import _kernels as compiled
except ImportError:  # pragma: no cover - extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def _noisy(cmp, rng, flips):
    cmp = cmp.copy()
    n = len(cmp)
    for _ in range(flips):
        i, j = rng.integers(0, n, size=2)
        cmp[i, j] = rng.choice([-1, 0, 1])
    return cmp


@needs_compiled
@given(leveled_trees(max_height=5, max_width=6), st.integers(0, 2**32 - 1))
def test_backends_agree(t, seed):
    level, parent, rank, _ = t.arrays
    anc_py = _kernels_py.ancestor_table(level, parent, t.height)
    anc_cy = compiled.ancestor_table(level, parent, t.height)
    assert np.array_equal(anc_py, anc_cy)
    cmp_py = _kernels_py.lex_matrix(level, rank, anc_py)
    assert np.array_equal(cmp_py, compiled.lex_matrix(level, rank, anc_cy))
    # corrupted matrices exercise the reporting paths; order and limit must agree too
    rng = np.random.default_rng(seed)
    for cmp in (cmp_py, _noisy(cmp_py, rng, 3)):
        for limit in (1, 7, 10_000):
            assert [tuple(v) for v in _kernels_py.order_violations(cmp, limit)] == \
                [tuple(v) for v in compiled.order_violations(cmp, limit)]
            assert [tuple(v) for v in _kernels_py.meet_violations(cmp, level, anc_py, limit)] == \
                [tuple(v) for v in compiled.meet_violations(cmp, level, anc_cy, limit)]


def test_limit_caps_the_report():
    cmp = np.ones((4, 4), dtype=np.int8)
    assert len(_kernels_py.order_violations(cmp, 3)) == 3


def test_default_backend_prefers_the_extension():
    expected = "python" if compiled is None or os.environ.get("SUSLINBENCH_PURE", "") not in ("", "0") else "cython"
    assert kernels.BACKEND == expected


@pytest.mark.parametrize("value, backend", [("1", "python"), ("0", None)])
def test_pure_switch(value, backend):
    env = dict(os.environ, SUSLINBENCH_PURE=value)
    proc = subprocess.run([sys.executable, "-c", "from suslinbench import kernels; print(kernels.BACKEND)"],
                          capture_output=True, text=True, env=env, check=True)
    want = backend or ("cython" if compiled is not None else "python")
    assert proc.stdout.strip() == want


def test_benchmark_script_runs(capsys):
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks"))
    try:
        import bench_kernels
    finally:
        sys.path.pop(0)
    assert bench_kernels.main(["--heights", "3", "--repeat", "1"]) == 0
    assert "meet_violations" in capsys.readouterr().out
