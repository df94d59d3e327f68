"""Independent re-derivation of tests/golden/oracle_small.csv.

Enumerates every radius assignment literally (radii capped at the distance
that already reaches the target, which is exact) with mpmath arithmetic, and
compares with the golden table. Exit status 1 on any mismatch."""

import csv
import itertools
import sys

from mpmath import mp, mpf, log, zeta

mp.dps = 30


def finite(pmf):
    pmf = {k: mpf(v) for k, v in pmf.items()}
    return lambda k: sum((p for r, p in pmf.items() if r >= k), mpf(0))


def power_law(alpha):
    z = 1 / zeta(alpha)
    return lambda k: mpf(1) if k == 0 else z * zeta(alpha, k + 1)


def geometric(q):
    return lambda k: mpf(q) ** k


def log_harmonic(n):
    return 1 / ((n + 2) * log(n + 2))


def inverse_square(n):
    return mpf("0.5") / (n + 1) ** 2


# schedule: index -> tail function
def homogeneous(tail):
    return lambda i: tail


def ex41(b):
    return lambda i: (lambda k: mpf(1) if k == 0 else b(i + k - 1))


def ex42(b):
    return lambda i: (lambda k: mpf(1) if k == 0 else (1 - b(i) if k == 1 else mpf(0)))


def ex43(b):
    def law(i):
        if i == 0:
            return lambda k: mpf(1) if k == 0 else mpf(0)
        return lambda k: mpf(1) if k == 0 else (b(i) if k <= i else mpf(0))

    return law


def atoms(tail, cap):
    """(radius, probability) with every radius >= cap merged into cap."""
    out = []
    for k in range(cap):
        p = tail(k) - tail(k + 1)
        if p > 0:
            out.append((k, p))
    rest = tail(cap)
    if rest > 0:
        out.append((cap, rest))
    return out


def firework(schedule, n, step=1):
    pos = [step * i for i in range(n + 1)]
    supports = [atoms(schedule(i), pos[n] - pos[i]) for i in range(n)]
    total = mpf(0)
    for combo in itertools.product(*supports):
        r = [c[0] for c in combo]
        p = mpf(1)
        for c in combo:
            p *= c[1]
        active = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for j in frontier:
                if j == n:
                    continue
                for i in range(j + 1, n + 1):
                    if i not in active and pos[i] - pos[j] <= r[j]:
                        active.add(i)
                        nxt.append(i)
            frontier = nxt
        if n in active:
            total += p
    return total


def reverse(schedule, n):
    supports = [atoms(schedule(k), k) for k in range(1, n + 1)]
    total = mpf(0)
    for combo in itertools.product(*supports):
        r = [0] + [c[0] for c in combo]
        p = mpf(1)
        for c in combo:
            p *= c[1]
        active = [True] + [False] * n
        for k in range(1, n + 1):  # left-to-right suffices: windows look left
            active[k] = any(active[v] for v in range(k - r[k], k)) if r[k] > 0 else False
        if active[n]:
            total += p
    return total


HALF = homogeneous(finite({0: "0.5", 1: "0.5"}))
INSTANCES = {
    "half_half": (HALF, 1),
    "point_mass_1": (homogeneous(finite({1: 1})), 1),
    "point_mass_0": (homogeneous(finite({0: 1})), 1),
    "zero_or_two": (homogeneous(finite({0: "0.5", 2: "0.5"})), 1),
    "quarters_m2": (homogeneous(finite({0: "0.25", 1: "0.25", 2: "0.25", 3: "0.25"})), 2),
    "power_law_2": (homogeneous(power_law(2)), 1),
    "power_law_1.5": (homogeneous(power_law(mpf("1.5"))), 1),
    "geometric_0.5": (homogeneous(geometric(mpf("0.5"))), 1),
    "ex41_log_harmonic": (ex41(log_harmonic), 1),
    "ex42_inverse_square": (ex42(inverse_square), 1),
    "ex43_log_harmonic": (ex43(log_harmonic), 1),
}


def main(path):
    bad = 0
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            schedule, step = INSTANCES[row["instance_id"]]
            n = int(row["n"])
            if row["process"] == "firework":
                exact = firework(schedule, n, step)
            else:
                exact = reverse(schedule, n)
            lo, hi = mpf(row["lo"]), mpf(row["hi"])
            ok = lo - mpf("1e-10") <= exact <= hi + mpf("1e-10") and hi - lo <= mpf(row["truncated_mass"]) + mpf("1e-15")
            print(f"{'ok ' if ok else 'BAD'} {row['instance_id']:<22}{row['process']:<9}n={n:<3}"
                  f"golden={float(lo):.15g} independent={float(exact):.15g}")
            bad += not ok
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "tests/golden/oracle_small.csv"))
