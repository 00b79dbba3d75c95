"""Compare the compiled polynomial kernels with the pure-Python fallback.

Each workload runs in a fresh interpreter per backend (the backend is chosen
at import time through ``GENRED_PURE_PYTHON``)::

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "poly_mul": """
import random
from genred.poly import VarTable
from genred.sampling import random_poly
t = VarTable.complex(3)
rng = random.Random(0)
ps = [random_poly(rng, t, degree=4, terms=12, complex_ok=True).as_polynomial() for _ in range(40)]
def work():
    acc = ps[0]
    for p in ps[1:8]:
        acc = acc * p
    for a, b in zip(ps, ps[1:]):
        (a * b).diff("z0")
""",
    "triangle_pipeline": """
from genred import quotient as qt
def work():
    qt.example_pipeline.cache_clear()
    qt.example_chart.cache_clear()
    qt.example_chart("triangle", 0)
""",
    "courant_axioms": """
import random
from genred.forms import verify_axioms
from genred.poly import VarTable
from genred.sampling import random_closed_3form, random_field
t = VarTable.real(["x1", "x2", "x3", "x4"])
def work():
    rng = random.Random(0)
    for _ in range(40):
        H = random_closed_3form(rng, t, degree=2, terms=2)
        verify_axioms([random_field(rng, t, degree=2, terms=2) for _ in range(3)], H)
""",
}

RUNNER = """
import json, time
from genred.kernels import BACKEND
{setup}
best = float("inf")
for _ in range({repeat}):
    t0 = time.perf_counter()
    work()
    best = min(best, time.perf_counter() - t0)
print(json.dumps({{"backend": BACKEND, "seconds": best}}))
"""


def run_one(name: str, pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["GENRED_PURE_PYTHON"] = "1"
    else:
        env.pop("GENRED_PURE_PYTHON", None)
    code = RUNNER.format(setup=WORKLOADS[name], repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--only", choices=sorted(WORKLOADS), action="append")
    args = p.parse_args(argv)
    print(f"{'workload':<20} {'compiled':>12} {'pure':>12} {'speedup':>8}")
    for name in args.only or WORKLOADS:
        fast = run_one(name, False, args.repeat)
        slow = run_one(name, True, args.repeat)
        label = f"{fast['seconds']:.4f}s" if fast["backend"] == "cython" else "n/a"
        speed = f"{slow['seconds'] / fast['seconds']:.2f}x" if fast["backend"] == "cython" else "-"
        print(f"{name:<20} {label:>12} {slow['seconds']:>11.4f}s {speed:>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
