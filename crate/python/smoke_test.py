"""Smoke test for the holocap_py extension.

Build and run:
    cargo build --release -p holocap-py --features extension-module
    cp target/release/libholocap_py.so python/holocap_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import holocap_py as hc  # noqa: E402


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    assert hc.entropy((0.0, 0.0, 0.0)) == 1.0
    close(hc.entropy((0.0, 0.0, 0.5)), 0.8112781245, 1e-9)

    ch = hc.Channel.parse("lambda = 0.6 0.601 0.5\nt = 0.021 0 0.495\n")
    assert ch.is_cp()[0]
    assert not hc.Channel((0.6, 0.601, 0.5), (0.06, 0.0, 0.495)).is_cp()[0]
    close(ch.apply((0.0, 0.0, 1.0))[2], 0.995, 1e-15)

    r = hc.capacity(ch, k=20, starts=2)
    close(r.capacity, 0.3214851589, 1e-7)
    assert len(r.probabilities) == 4 and r.certified, r
    close(sum(r.probabilities), 1.0, 1e-12)
    close(hc.holevo_chi(ch, r.probabilities, r.inputs), r.capacity, 1e-12)
    close(r.xi0, 0.9785055621, 1e-6)
    assert '"capacity"' in r.to_json()

    value, maxima = hc.sup_relent(ch, r.average, grid_k=60)
    close(value, r.capacity, 1e-8)
    assert len(maxima) >= 4

    curve = hc.concavity_curve(1 / math.sqrt(2), steps=10)
    assert all(abs(f - 1.6225562489) < 1e-9 for _, f, _ in curve)

    try:
        hc.entropy((1.0, 1.0, 0.0))
    except ValueError:
        pass
    else:
        raise AssertionError("state outside the Bloch ball accepted")

    print("holocap_py smoke test passed")


if __name__ == "__main__":
    main()
