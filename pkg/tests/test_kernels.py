import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genred import _kernels_py as ref
from genred import kernels

try:
    from genred import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

ints = st.integers(-50, 50)
coeffs = st.tuples(ints, ints).filter(lambda c: c != (0, 0))
keys = st.builds(lambda a, b, c: a + (b << 16) + (c << 32), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
bodies = st.dictionaries(keys, coeffs, max_size=8)


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if compiled is not None:
        assert kernels.BACKEND == "cython"


def test_pure_python_override():
    env = dict(os.environ, GENRED_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import genred.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_compiled
@settings(max_examples=300)
@given(bodies, bodies, ints, ints, st.sampled_from([0, 16, 32]))
def test_compiled_matches_reference(a, b, ca, cb, shift):
    assert compiled.mul(a, b) == ref.mul(a, b)
    assert compiled.lincomb(a, ca, b, cb) == ref.lincomb(a, ca, b, cb)
    assert compiled.scale(a, ca, cb) == ref.scale(a, ca, cb)
    assert compiled.diff(a, shift) == ref.diff(a, shift)
    assert compiled.content(a) == ref.content(a)
    g = ref.content(a) or 1
    assert compiled.divide_int(a, g) == ref.divide_int(a, g)


@settings(max_examples=200)
@given(bodies, bodies, bodies)
def test_reference_mul_is_commutative_ring(a, b, c):
    assert ref.mul(a, b) == ref.mul(b, a)
    assert ref.mul(ref.mul(a, b), c) == ref.mul(a, ref.mul(b, c))
    assert ref.mul(a, ref.lincomb(b, 1, c, 1)) == ref.lincomb(ref.mul(a, b), 1, ref.mul(a, c), 1)


def test_no_zero_coefficients_stored():
    a = {1: (1, 0)}
    assert ref.lincomb(a, 1, a, -1) == {}
    assert ref.scale(a, 0, 0) == {}
    assert ref.mul({1: (1, 1)}, {1: (1, -1)}) == {2: (2, 0)}
