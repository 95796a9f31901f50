#!/usr/bin/env python3
"""Smoke test for the sparseprep Python bindings.

Finds the built extension (building it if needed), imports it under the
name `sparseprep`, and exercises one path through every binding. Exits
nonzero on the first failure.
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_extension() -> Path:
    candidates = [
        ROOT / "target" / profile / "libsparseprep_py.so"
        for profile in ("release", "debug")
    ]
    existing = [p for p in candidates if p.exists()]
    if not existing:
        subprocess.run(
            ["cargo", "build", "-p", "sparseprep-py"], cwd=ROOT, check=True
        )
        existing = [p for p in candidates if p.exists()]
    return max(existing, key=lambda p: p.stat().st_mtime)


def main() -> None:
    staging = Path(tempfile.mkdtemp(prefix="sparseprep_py_"))
    shutil.copy(find_extension(), staging / "sparseprep.so")
    sys.path.insert(0, str(staging))
    import sparseprep

    inv = 1 / math.sqrt(2)
    ghz = sparseprep.StateSpec(4, [(inv, 0b0000), (inv, 0b1111)])
    assert ghz.n == 4 and len(ghz) == 2
    assert sparseprep.StateSpec.from_json(ghz.to_json()).entries() == ghz.entries()

    circuit = sparseprep.synth_no_ancilla(ghz)
    assert circuit.width == 4 and circuit.ancillas == 0
    fidelity, leak = sparseprep.verify(circuit, ghz)
    assert fidelity >= 1 - 1e-9 and leak < 1e-10
    amps = circuit.statevector()
    assert abs(amps[0b0000] - inv) < 1e-9 and abs(amps[0b1111] - inv) < 1e-9
    print(f"no-ancilla GHZ: fidelity {fidelity:.12f}")

    wide = sparseprep.StateSpec.uniform(6, [3, 12, 33, 48])
    staged = sparseprep.synth_with_ancilla(wide, 64)
    assert staged.width - staged.data_qubits <= 64
    fidelity, leak = sparseprep.verify(staged, wide)
    assert fidelity >= 1 - 1e-9 and leak < 1e-10
    print(f"ancilla route: width {staged.width}, fidelity {fidelity:.12f}")

    auto = sparseprep.synth_auto(wide, 64)
    assert sparseprep.verify(auto, wide)[0] >= 1 - 1e-9
    counted = auto.counts(from_zero=True)
    assert counted["elementary"] >= counted["raw_total"] > 0

    lowered = staged.expand(from_zero=True)
    words = {
        line.split()[0] for line in lowered.to_text().splitlines()[1:]
    }
    assert words <= {"x", "cx", "ccx", "ry", "rz"}, words
    reread = sparseprep.Circuit.from_text(lowered.to_text())
    assert reread.to_text() == lowered.to_text()
    print(f"expanded gate set: {sorted(words)}")

    pairs = [(0, 1), (1, 5), (2, 4), (4, 2), (5, 7), (7, 0)]
    sigma = sparseprep.synth_permutation(pairs, 3)
    assert sparseprep.permutation_action(sigma) == sorted(pairs)

    u2b = sparseprep.onehot_to_binary(3)
    assert len(u2b) == 4 * 3 + 8
    onehots = [1 << (3 + i) for i in range(8)]
    assert sparseprep.track_points(u2b, onehots) == list(range(8))

    assert sparseprep.choose_r(4, 64) == 4
    assert sparseprep.choose_r(8, 8) is None
    assert sparseprep.onehot_display(8, 2, 216) == "0001 0100 0010 1000"

    try:
        sparseprep.StateSpec(2, [(0.5, 0)])
    except ValueError as e:
        print(f"validation surfaces as ValueError: {e}")
    else:
        raise AssertionError("unnormalized spec must be rejected")

    print("smoke: all checks passed")


if __name__ == "__main__":
    main()
