"""End-to-end checks of the bushy command line: exit codes, witness files,
kurtz traces and byte-identical reruns. Usage: cli_smoke.py PATH_TO_BUSHY"""

import json
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

BUSHY = str(Path(sys.argv[1]).resolve())
failures = []


def run(*args, cwd, expect=0):
    p = subprocess.run([BUSHY, *args], cwd=cwd, capture_output=True, text=True)
    if p.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {p.returncode}, wanted {expect}: {p.stderr.strip()}")
    return p


def check(cond, what):
    if not cond:
        failures.append(what)


def tree_nodes(text):
    nodes = []
    for line in text.splitlines():
        if line and ":" not in line:
            nodes.append(line)
    return nodes


def is_prefix(a, b):
    if a == "e":
        return True
    return b == a or b.startswith(a + ".")


with tempfile.TemporaryDirectory() as d:
    w = Path(d)

    (w / "s.set").write_text("mode: explicit\n0\n1.2\n1.0\n2.2\n")
    p = run("--space", "3/2", "big", "--set", "s.set", "--n", "2", "--witness", "w.tree", cwd=w)
    check(p.stdout.startswith("big"), "big: expected a big verdict")
    nodes = tree_nodes((w / "w.tree").read_text())
    leaves = [n for n in nodes if not any(m != n and is_prefix(n, m) for m in nodes)]
    check(set(leaves) <= {"0", "1.2", "1.0", "2.2"}, "big: witness leaf outside the set")
    (w / "leaves.set").write_text("mode: explicit\n" + "".join(l + "\n" for l in leaves))
    p = run("--space", "3/2", "--json", "big", "--set", "leaves.set", "--n", "2", cwd=w)
    rec = json.loads(p.stdout)
    check(rec["big"] and sorted(rec["witness"]["nodes"]) == sorted(nodes), "big: witness does not round-trip")
    p = run("--space", "3/2", "big", "--set", "s.set", "--n", "3", cwd=w)
    check(p.stdout.startswith("small"), "big: width 3 should be small")

    p = run("big", "--set", "missing.set", "--n", "2", cwd=w, expect=2)
    check(json.loads(p.stderr)["error"] == "parse", "missing file should report a parse error")
    run("big", "--set", "s.set", cwd=w, expect=2)
    run("--space", "3/2", "big", "--set", "s.set", "--n", "0", cwd=w, expect=1)

    gen = ["--space", "3/6", "--seed", "11", "gen-functional", "--step-min", "3", "--step-max", "5"]
    a = run(*gen, "--out", "f1.txt", cwd=w)
    b = run(*gen, "--out", "f2.txt", cwd=w)
    check((w / "f1.txt").read_bytes() == (w / "f2.txt").read_bytes(), "gen-functional not deterministic")
    run("kurtz-run", "--functional", "f1.txt", "--rounds", "2", "--trace", "t1.txt", cwd=w)
    run("kurtz-run", "--functional", "f2.txt", "--rounds", "2", "--trace", "t2.txt", cwd=w)
    t1 = (w / "t1.txt").read_text()
    check(t1 == (w / "t2.txt").read_text(), "kurtz-run trace not deterministic")
    rows = [line.split() for line in t1.splitlines() if line.strip()]
    check(len(rows) == 3, "kurtz-run: expected three trace rows")
    mu0 = Fraction(rows[0][3])
    for r, rs, ss, mu in rows[1:]:
        check(Fraction(mu) <= Fraction(3, 4) ** int(r) * mu0, f"kurtz-run: round {r} measure too large")
        check(int(rs) < int(ss), f"kurtz-run: round {r} has r >= s")

    a1 = run("--seed", "5", "gen-allowance", "--levels", "4", cwd=w).stdout
    a2 = run("--seed", "5", "gen-allowance", "--levels", "4", cwd=w).stdout
    check(a1 == a2, "gen-allowance not deterministic")
    (w / "a.txt").write_text(a1)
    check(run("allow-check", "--allowance", "a.txt", cwd=w).stdout.startswith("valid"), "allowance rejected")

    run("--emit-dot", "t.dot", "--space", "3/2", "big", "--set", "s.set", "--n", "2", cwd=w)
    check((w / "t.dot").read_text().startswith("digraph"), "emit-dot did not write a graph")

for f in failures:
    print("FAIL", f)
print("cli smoke:", "ok" if not failures else f"{len(failures)} failures")
sys.exit(1 if failures else 0)
