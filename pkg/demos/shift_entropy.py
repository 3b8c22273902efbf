"""Shift maps: the scale is 1 but the topological entropy is ln |F|.

The contraction group of the one-sided shift is not closed, so the entropy
formula h = ln s does not apply; the CLI refuses with exit code 4.

    python3 demos/shift_entropy.py
"""
import subprocess
import sys
from pathlib import Path

from tidyscale import shift as sh

HERE = Path(__file__).parent


def main():
    for F in ("C2", "C3"):
        for I in ("N", "Z"):
            inst = sh.shift_instance(F, I)
            d = dict(inst.decompose().items())
            print(f"{F}^{I}: s = {inst.scale_result().value}, h_top = ln {sh.topological_entropy_exponent(inst)}, "
                  f"con = {d['con'].payload} (closed: {d['con'].closed})")
    one = sh.shift_instance("C2", "N")
    print("bik dense in window projections:", sh.bik_density_evidence(one, 4))
    proc = subprocess.run(
        [sys.executable, "-m", "tidyscale", "entropy", str(HERE / "instances" / "shift_c2_one_sided.json")],
        capture_output=True, text=True, check=False,
    )
    print(f"tidyscale entropy exit code: {proc.returncode}")
    print(proc.stdout.strip() or proc.stderr.strip())


if __name__ == "__main__":
    main()
