"""Byte-exact golden files for emitted formulas and witness reports.

Regenerate after an intentional output change with:

    python3 tests/test_goldens.py --regen

Every golden is plain text with a trailing newline, compared byte-for-byte.
"""

import contextlib
import io
import pathlib
import sys

import pytest

from prime_scope.cli import main as cli_main
from prime_scope.squares import level_finite_field

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"

CLI_GOLDENS = [
    ("chi_p5_tau11.txt",
     ["--output", "text", "formula", "emit-chi", "--p", "5", "--taue", "1", "--tauf", "1"]),
    ("chi_p2_tau11.txt",
     ["--output", "text", "formula", "emit-chi", "--p", "2", "--taue", "1", "--tauf", "1"]),
    ("chi_p2_tau21.txt",
     ["--output", "text", "formula", "emit-chi", "--p", "2", "--taue", "2", "--tauf", "1"]),
    ("chi_inf.txt",
     ["--output", "text", "formula", "emit-chi", "--p", "inf"]),
    ("nu_p5_tau11_n1.txt",
     ["--output", "text", "formula", "emit-nu", "--p", "5", "--taue", "1", "--tauf", "1", "--n", "1"]),
    ("nu_p3_tau11_n2.txt",
     ["--output", "text", "formula", "emit-nu", "--p", "3", "--taue", "1", "--tauf", "1", "--n", "2"]),
    ("nu_p2_tau21_n2.txt",
     ["--output", "text", "formula", "emit-nu", "--p", "2", "--taue", "2", "--tauf", "1", "--n", "2"]),
    ("phi_p5_f1_n2.txt",
     ["--output", "text", "formula", "emit-phi", "--p", "5", "--f-abs", "1", "--n", "2"]),
    ("phi_p2_f1_n3.txt",
     ["--output", "text", "formula", "emit-phi", "--p", "2", "--f-abs", "1", "--n", "3"]),
    ("dwitness_q5.txt",
     ["dense", "d-witness", "--field", "X", "--p", "5", "--poly", "X^2+1", "--a", "125"]),
    ("udwitness_gauss13.txt",
     ["dense", "ud-witness", "--field", "X^2+1", "--poly", "X^2-3", "--a", "169", "--at", "13"]),
]


def _render(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(argv)
    assert code == 0, f"golden command failed: {argv}"
    return buf.getvalue()


def _levels_table():
    ps = [p for p in range(3, 100, 2) if all(p % d for d in range(3, p, 2))]
    return "".join(f"{p} {level_finite_field(p, 1)}\n" for p in ps)


ALL_GOLDENS = [(name, lambda argv=argv: _render(argv)) for name, argv in CLI_GOLDENS]
ALL_GOLDENS.append(("levels_f1.txt", _levels_table))


@pytest.mark.parametrize("name,produce", ALL_GOLDENS, ids=[n for n, _ in ALL_GOLDENS])
def test_golden_byte_exact(name, produce):
    want = (GOLDEN_DIR / name).read_bytes()
    got = produce().encode()
    assert got == want, f"{name} drifted; regenerate deliberately if intended"
    assert got.endswith(b"\n")


def test_every_golden_file_is_covered():
    on_disk = {p.name for p in GOLDEN_DIR.glob("*.txt")}
    assert on_disk == {n for n, _ in ALL_GOLDENS}


if __name__ == "__main__":
    if "--regen" not in sys.argv:
        sys.exit("run me with --regen (or through pytest)")
    GOLDEN_DIR.mkdir(exist_ok=True)
    for name, produce in ALL_GOLDENS:
        (GOLDEN_DIR / name).write_bytes(produce().encode())
        print("wrote", name)
