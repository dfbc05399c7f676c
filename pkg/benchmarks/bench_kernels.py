"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 200 800 2000] [--repeat 5]
"""
import argparse
import random
import timeit

from ordlab import _kernels_py

try:
    from ordlab import _kernels
except ImportError:
    _kernels = None


def order_preserving(n, rng):
    dom = list(range(n))
    cod = sorted(rng.sample(range(4 * n), n))
    return dom, cod


def band_matrix(n, rng):
    # every row may use a window of columns; a monotone choice exists
    m = 3 * n
    rows = []
    for i in range(n):
        lo = max(0, 2 * i - rng.randint(0, 4))
        rows.append([lo <= c <= lo + 6 for c in range(m)])
    return rows


def bench(label, fn, repeat):
    t = min(timeit.repeat(fn, number=1, repeat=repeat))
    return label, t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 800, 2000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<16}{'n':>6}" + "".join(f"{name:>12}" for name, _ in backends)
          + ("    speedup" if len(backends) == 2 else ""))
    for n in args.sizes:
        dom, cod = order_preserving(n, rng)
        matrix = band_matrix(n, rng)
        for kernel, call in (("first_violation", lambda m: m.first_violation(dom, cod)),
                             ("monotone_assign", lambda m: m.monotone_assign(matrix))):
            results = [call(mod) for _, mod in backends]
            assert all(r == results[0] for r in results), "backends disagree"
            times = [bench(name, lambda mod=mod: call(mod), args.repeat)[1]
                     for name, mod in backends]
            row = f"{kernel:<16}{n:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>10.1f}x"
            print(row)


if __name__ == "__main__":
    main()
