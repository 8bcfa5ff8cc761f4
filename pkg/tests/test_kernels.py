import importlib
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import int_matrices
from unitorus import _kernels_py, kernels
from unitorus.hodge import wedge_table

try:
    from unitorus import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.BACKEND == ("cython" if _ckernels is not None else "python")


def test_pure_python_switch():
    out = subprocess.run(
        [sys.executable, "-c", "import unitorus; print(unitorus.BACKEND)"],
        capture_output=True, text=True, env={"UNITORUS_PURE_PYTHON": "1", "PATH": ""}, check=True,
    )
    assert out.stdout.strip() == "python"


@given(st.integers(1, 5).flatmap(lambda r: int_matrices(r, 6, -5, 5)))
def test_python_rref_rank_consistent(rows):
    pivots, red = _kernels_py.rref_int(rows, 6)
    assert len(pivots) == _kernels_py.rank_int(rows, 6) == len(red)


@needs_compiled
@given(st.integers(1, 5).flatmap(lambda r: int_matrices(r, 6, -9, 9)))
def test_rref_backends_agree(rows):
    assert _ckernels.rref_int(rows, 6) == _kernels_py.rref_int(rows, 6)
    assert _ckernels.rank_int(rows, 6) == _kernels_py.rank_int(rows, 6)


@needs_compiled
@given(int_matrices(3, 4, -50, 50), int_matrices(4, 2, -50, 50))
def test_matmul_backends_agree(a, b):
    assert _ckernels.matmul_int(a, b) == _kernels_py.matmul_int(a, b)


@needs_compiled
@given(st.data())
def test_wedge_backends_agree(data):
    n = 3
    table = wedge_table(n, 1, 1, 1, 1)
    vec = st.lists(st.integers(-7, 7), min_size=9, max_size=9)
    args = [data.draw(vec) for _ in range(4)]
    assert _ckernels.wedge_int(table, *args, 9) == _kernels_py.wedge_int(table, *args, 9)


def test_matmul_edge_cases():
    for impl in filter(None, (_kernels_py, _ckernels)):
        assert impl.matmul_int([], [[1]]) == []
        assert impl.matmul_int([[]], []) == [[]]


def test_reload_is_stable():
    mod = importlib.reload(kernels)
    assert mod.BACKEND in ("cython", "python")
