#!/usr/bin/env python3
"""Smoke test for the shuffle_coha_py extension module.

Builds the cdylib with cargo (if needed), stages it under an importable
name, and exercises the bound API end to end. Run from anywhere:

    python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import sysconfig
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    subprocess.run(
        ["cargo", "build", "-q", "--release", "-p", "shuffle-coha-py"],
        cwd=REPO,
        check=True,
    )
    built = REPO / "target" / "release" / "libshuffle_coha_py.so"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    staged = Path(__file__).resolve().parent / f"shuffle_coha_py{suffix}"
    if not staged.exists() or built.stat().st_mtime > staged.stat().st_mtime:
        shutil.copy2(built, staged)
    return staged


def main() -> int:
    build_extension()
    sys.path.insert(0, str(Path(__file__).resolve().parent))
    import shuffle_coha_py as coha

    # Quiver construction and round trip.
    q0 = coha.Quiver.loop_quiver(0)
    q1 = coha.Quiver.loop_quiver(1)
    assert coha.Quiver.from_json(q1.to_json()) == q1

    # The 1 * 1 = 2 computation.
    one = coha.ShuffleElement.generator(q0, "1", 0, "coh")
    two = one * one
    terms = json.loads(two.to_json())["poly"]["terms"]
    assert len(terms) == 1 and set(terms[0][0]) == {0} and terms[0][1] == "2"
    assert two.dim() == [("1", 2)]

    # Element JSON round trip.
    k = coha.ShuffleElement.kappa(q1, "1", 2, 1)
    assert coha.ShuffleElement.from_json(k.to_json()) == k

    # Wheel conditions hold on kappa.
    assert coha.ShuffleElement.kappa(q1, "1", 3, 1).wheel_check()

    # Solver round trip through the JSON preimage.
    f = json.loads(k.express_in_generators())
    assert "num" in f and "den" in f

    # K-theory side and degeneration.
    kt = coha.ShuffleElement.kappa_tilde(q1, "1", 2, 1)
    assert kt.wheel_check()
    assert kt.degenerate() == k

    # Theorem pipeline report.
    report = json.loads(coha.verify_theorem(1, 2, 1, "direct"))
    assert report["verified"] is True

    # Census agrees on the n = 1 column.
    assert coha.census(q1, "1", 1, 3) == (1, 1)

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
