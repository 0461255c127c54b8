"""Smoke test for the pyqtorus extension.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import os

import pyqtorus as q

CONFIGS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "configs")


def cfg(name):
    return q.Config.from_file(os.path.join(CONFIGS, name))


def main():
    assert q.bracket("t0^1 t^(1,0)", "t0^1 t^(-1,0)") == "-1*c1"
    assert q.bracket("c1", "t0^1 t^(1,2)") == "0"
    print("phi_tau(t0^1 t^(0,0)) =", q.phi_tau("t0^1 t^(0,0)"))
    odd = q.Basis((0, 1), (1, 0))
    assert odd.m21_odd and odd.alpha == -1
    print("phi_aff(t0^1 t^(0,0)) =", q.phi_aff("t0^1 t^(0,0)", odd))

    report = q.check_jacobi(box_bound=1, random=50, seed=3)
    assert report["jacobi"] == 0 and report["skew"] == 0, report

    m = q.Module(cfg("remark52.cfg"), depth=3, window=2)
    assert m.dims() == [1, 2, 5, 10], m.dims()
    assert m.audit() == []
    holds, ranks = m.growth()
    assert holds and all(r >= n for n, r in ranks)
    p = q.Module(cfg("remark52.cfg"), depth=3, window=4, backend="prime")
    assert p.dims() == m.dims()
    print("two-root example module dims:", m.dims())

    v = q.quasifinite(cfg("odd_eval.cfg"))
    assert v["verdict"] == "Quasifinite" and v["certificate"]["degree"] == 5, v
    assert q.quasifinite(cfg("factorial.cfg"))["verdict"] == "UnknownWithinWindow"

    grid = q.z2_grid(cfg("remark52_z2_even.cfg"), loop_window=3, backend="exact")
    assert grid == [[0, 1, 0, 1, 0, 1, 0], [1] * 7, [2, 3, 2, 3, 2, 3, 2]], grid

    code, out = q.run_cli(["bracket", "t0^0 t^(1,0)", "t0^0 t^(-1,0)"])
    assert code == 0
    print("cli bracket:", out.strip())

    try:
        q.Config.parse("basis.m1 = 1, 0\nfoo = 3\n")
    except ValueError as e:
        assert "foo" in str(e)
    else:
        raise AssertionError("unknown key accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
