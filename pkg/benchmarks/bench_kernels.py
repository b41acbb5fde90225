"""Compare the compiled inference kernels against the pure-Python path.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 10000,50000,200000] [--repeats 3]

Both paths run the same source function; the compiled one is the numba
build selected at import time.  Run with KAMAS_NO_NUMBA unset so both
variants are importable.
"""

import argparse
import time

import numpy as np

from kamas._kernels import HAVE_NUMBA, sequitur_jit, sequitur_py, walk_jit, walk_py


def make_stream(rng, n):
    """Motif soup, the shape real traces take."""
    motifs = [rng.integers(0, 50, int(rng.integers(2, 9))) for _ in range(40)]
    out = []
    while len(out) < n:
        if rng.integers(0, 100) < 70:
            out.extend(list(motifs[int(rng.integers(0, len(motifs)))]))
        else:
            out.append(int(rng.integers(0, 50)))
    return np.array(out[:n], np.int64)


def to_slot_encoding(ids, tok):
    """Walk kernels address rules by dense slot, not creation id."""
    slot = {int(r): k for k, r in enumerate(ids)}
    return np.array([v if v >= 0 else -(slot[-int(v) - 1] + 1) for v in tok], np.int64)


def best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - started)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="10000,50000,200000")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(7)
    warm = make_stream(rng, 512)
    ids, off, tok, _ = sequitur_jit(warm, 8)  # trigger compilation
    walk_jit(to_slot_encoding(ids, tok), off, 10**9, 1)

    print("%-12s %12s %12s %9s" % ("kernel", "python", "compiled", "speedup"))
    for n in sizes:
        stream = make_stream(rng, n)
        t_py, (ids, off, tok, ovf) = best_of(sequitur_py, (stream, 8), args.repeats)
        t_jit, (ids2, off2, tok2, ovf2) = best_of(sequitur_jit, (stream, 8), args.repeats)
        assert ovf == ovf2 == 0
        assert np.array_equal(tok, tok2) and np.array_equal(off, off2)
        print("%-12s %11.3fs %11.3fs %8.1fx" % ("infer %dk" % (n // 1000), t_py, t_jit, t_py / t_jit))

        walk_tok = to_slot_encoding(ids, tok)
        w_py, (occ, per, err) = best_of(walk_py, (walk_tok, off, 10**9, 1), args.repeats)
        w_jit, (occ2, per2, err2) = best_of(walk_jit, (walk_tok, off, 10**9, 1), args.repeats)
        assert err == err2 == 0
        assert np.array_equal(occ, occ2) and np.array_equal(per, per2)
        print("%-12s %11.3fs %11.3fs %8.1fx" % ("walk %dk" % (n // 1000), w_py, w_jit, w_py / w_jit))


if __name__ == "__main__":
    main()
