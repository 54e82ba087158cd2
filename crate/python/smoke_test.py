"""Smoke test for the compiled `mstar` module.

Build and install first, e.g. `pip install maturin && maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import mstar


def main():
    s = mstar.Sentence("a0 | !a0")
    assert mstar.Sentence.from_index(s.index) == s
    print(f"{s} has index {s.index} and size {s.size}")

    assert mstar.refutes(["a0", "!a0"])
    assert mstar.con_n(["a0", "a1 -> a0"])
    assert not mstar.con_n(["_|_"])

    stage = mstar.Stage(machines=1, bit_length=14, step_budget=14)
    exact = mstar.mstar_exact(["_|_", "a0", "!a0"], stage)
    mc = mstar.mstar_mc(["_|_", "a0", "!a0"], stage, samples=4000, seed=11)
    for name, e, m in zip(["_|_", "a0", "!a0"], exact, mc):
        print(f"M*({name}): exact {e.value:.5f}, monte carlo {m.value:.5f} +/- {m.ci:.5f}")
        assert abs(e.value - m.value) <= 3 * m.ci + 1e-12

    [(p, undecided)] = mstar.pstar(["a0"], samples=200, seed=3, rounds=256)
    print(f"P*(a0) ~ {p.value:.3f} +/- {p.ci:.3f} ({undecided} undecided)")
    assert 0.0 <= p.value <= 1.0

    print([str(mstar.sequence("mutex_family", n)) for n in range(3)])
    print("ok")


if __name__ == "__main__":
    main()
