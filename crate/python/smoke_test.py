#!/usr/bin/env python3
"""Smoke test for the fqmzv_py extension module.

Builds nothing itself: expects `cargo build -p fqmzv-py` (or --release) to
have produced libfqmzv_py.so under target/. Copies the shared object into a
temp dir under the importable name fqmzv_py.so and runs a few checks against
known values.
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_extension():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libfqmzv_py.so", "fqmzv_py.so", "libfqmzv_py.dylib")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit("fqmzv_py extension not found; run `cargo build -p fqmzv-py` first")


def main():
    src = locate_extension()
    tmp = tempfile.mkdtemp(prefix="fqmzv_py_")
    shutil.copy2(src, Path(tmp) / "fqmzv_py.so")
    sys.path.insert(0, tmp)

    import fqmzv_py

    ctx2 = fqmzv_py.Context(2)
    assert ctx2.q() == 2 and ctx2.characteristic() == 2
    assert ctx2.bracket(1) == "t^2 + t"
    assert ctx2.ell(2) == "t^6 + t^5 + t^3 + t^2"

    # zeta(1) over F_2: 1 + 1/t^2 + 1/t^3 + 1/t^4 + 1/t^5 + O(1/t^8)
    z1 = ctx2.zeta([1], prec=8)
    assert z1["valuation"] == 0
    assert z1["coefficients"] == [1, 0, 1, 1, 1, 1, 0, 0]
    assert z1["heuristic"] is False

    rec = ctx2.classify([1, 1])
    assert rec["status"] == "eulerian"
    assert rec["ratio"] == "1/(t^2 + t)"
    assert rec["covered_by_theorem"] is True

    ctx3 = fqmzv_py.Context(3)
    rec = ctx3.classify([1, 2])
    assert rec["status"] == "zeta_like"
    assert rec["ratio"] == "2/(t^3 + 2*t)"

    rec = ctx3.classify([2, 2])
    assert rec["status"] == "not_detected"
    assert rec["ratio"] is None

    assert ctx2.primitive_reduce([2, 6]) == ([1, 3], 1)
    assert ctx2.is_primitive([1, 3]) and not ctx2.is_primitive([2, 6])

    # power sum closed form: S_1(1) = 1/l_1 over F_2 has valuation 2
    s = ctx2.power_sum(1, 1, 10)
    assert s["valuation"] == 2 and s["coefficients"][0] == 1

    records = ctx2.search(depth=2, max_weight=4, prec=48)
    by_tuple = {tuple(r["tuple"]): r for r in records}
    assert by_tuple[(1, 2)]["status"] == "eulerian"
    assert by_tuple[(2, 1)]["status"] == "not_detected"

    reports = ctx3.verify("mainII", max_n=1)
    assert len(reports) == 2 and all(r["pass"] for r in reports)
    assert reports[0]["family"] == "mainII"

    # invalid parameters surface as ValueError
    for bad in (lambda: fqmzv_py.Context(6), lambda: ctx2.classify([1])):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
