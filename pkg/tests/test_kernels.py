import math
import os
import subprocess
import sys

import numpy as np
import pytest

from csckit import _kernels, quatrep
from csckit._kernels import python as py

compiled = _kernels.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def preset_gens(kind, q=None):
    r = quatrep.preset(kind, q=q)
    return [r.assignment[g].as_tuple() for g in r.presentation.generators]


def test_backend_reported():
    assert _kernels.BACKEND == ("cython" if compiled is not None else "python")


@needs_compiled
def test_hj_census_backends_agree():
    assert compiled.hj_chain_counts(120) == py.hj_chain_counts(120)
    assert compiled.hj_chain_counts_box(5, 7) == py.hj_chain_counts_box(5, 7)


@needs_compiled
@pytest.mark.parametrize(
    "kind, q", [("dihedral", 5), ("tetrahedral", None), ("octahedral", None), ("icosahedral", None)]
)
def test_closure_backends_agree(kind, q):
    gens = preset_gens(kind, q)
    a = compiled.quat_closure(gens, 1000, 1e-9)
    b = py.quat_closure(gens, 1000, 1e-9)
    assert len(a) == len(b)
    assert np.allclose(np.array(a), np.array(b), atol=1e-12)


@needs_compiled
def test_closure_cap_backends_agree():
    gens = [(math.cos(0.5), 0.0, 0.0, math.sin(0.5))]
    assert compiled.quat_closure(gens, 40, 1e-9) is None
    assert py.quat_closure(gens, 40, 1e-9) is None


@needs_compiled
def test_laurent_backends_agree():
    rng = np.random.default_rng(11)
    taus = np.linspace(0, 100, 333)
    for _ in range(20):
        coefs = rng.normal(size=4).tolist()
        exps = rng.choice(np.arange(-6, 5), size=4, replace=False).tolist()
        k = float(rng.integers(1, 6))
        a = compiled.laurent_eval(coefs, exps, k, taus)
        b = py.laurent_eval(coefs, exps, k, taus)
        assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


def test_pure_python_switch():
    env = dict(os.environ, CSCKIT_PURE_PYTHON="1")
    code = (
        "import csckit, csckit.quatrep as q;"
        "print(csckit.BACKEND, q.enumerate_image(q.preset('icosahedral')))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "60"]
