"""The pure-Python and compiled product kernels must be interchangeable.

Agreement is checked on seeded random machines (including label sets far
beyond 64 bits, where the compiled kernel must fall back to bignum
arithmetic) and on a full analysis pipeline run under each kernel.
"""

import os
import random
import subprocess
import sys

import pytest

from redup import _kernel
from redup._product_py import product as py_product

c_module = pytest.importorskip(
    "redup._product_c", reason="compiled kernel not built in this checkout"
)
c_product = c_module.product


def canonical(result):
    n, start, finals, arcs, visited = result
    return n, start, sorted(finals), sorted(arcs), visited


def random_machine(rng, n_max=6, arcs_max=12, bits_width=10):
    n = rng.randint(1, n_max)
    arcs = [
        (
            rng.randrange(n),
            rng.randrange(n),
            rng.getrandbits(bits_width) or 1,
            rng.random() < 0.5,
        )
        for _ in range(rng.randint(0, arcs_max))
    ]
    finals = frozenset(q for q in range(n) if rng.random() < 0.4)
    return n, 0, finals, arcs


def test_kernels_agree_on_random_machines():
    rng = random.Random(20_260_821)
    for _ in range(300):
        a = random_machine(rng)
        b = random_machine(rng)
        assert canonical(py_product(*a, *b)) == canonical(c_product(*a, *b))


def test_kernels_agree_on_wide_labels():
    rng = random.Random(7)
    for _ in range(100):
        a = random_machine(rng, bits_width=300)
        b = random_machine(rng, bits_width=300)
        assert canonical(py_product(*a, *b)) == canonical(c_product(*a, *b))


def test_pipelines_agree_across_kernels(monkeypatch):
    from redup.analyses import load_grammar
    from redup.fsa import language_equal, surface_strings

    cg = load_grammar("koasati")
    monkeypatch.setattr(_kernel, "product", py_product)
    via_py = cg.compile("wordform_tahaspin")
    monkeypatch.setattr(_kernel, "product", c_product)
    via_c = cg.compile("wordform_tahaspin")
    assert via_py == via_c  # same traversal order, arc for arc
    assert language_equal(via_py, via_c)
    assert surface_strings(via_c) == {"tahastoopin"}


def _backend_in_subprocess(value):
    env = dict(os.environ)
    if value is None:
        env.pop("REDUP_BACKEND", None)
    else:
        env["REDUP_BACKEND"] = value
    return subprocess.run(
        [sys.executable, "-c", "import redup._kernel as k; print(k.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        timeout=60,
    )


@pytest.mark.parametrize("value", ["py", "c"])
def test_environment_variable_forces_a_backend(value):
    proc = _backend_in_subprocess(value)
    assert proc.returncode == 0
    assert proc.stdout.strip() == value


def test_default_prefers_the_compiled_kernel():
    proc = _backend_in_subprocess(None)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "c"


def test_unknown_backend_name_fails_the_import():
    proc = _backend_in_subprocess("fortran")
    assert proc.returncode != 0
    assert "REDUP_BACKEND" in proc.stderr
