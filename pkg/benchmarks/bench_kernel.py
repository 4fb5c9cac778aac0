"""Compare the compiled and pure-Python normal-form kernels (and the traced engine).

    python3 benchmarks/bench_kernel.py [--terms 2000] [--depth 8] [--seed 0]
"""

import argparse
import random
import time

from compaths.gen import MIXED_OPS, random_term
from compaths.kernel import load_backend
from compaths.trs import normalize


def run_kernel(module, terms):
    norm = module.Normalizer()
    start = time.perf_counter()
    out = [norm.normal_form(t) for t in terms]
    return time.perf_counter() - start, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, default=2000)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--traced", type=int, default=200, help="terms for the traced engine")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    terms = [random_term(rng, args.depth, ops=MIXED_OPS) for _ in range(args.terms)]

    compiled = load_backend(pure=False)
    pure = load_backend(pure=True)
    t_pure, nf_pure = run_kernel(pure, terms)
    if compiled.compiled():
        t_comp, nf_comp = run_kernel(compiled, terms)
        assert nf_comp == nf_pure, "backends disagree"
    else:
        t_comp = None

    sample = terms[:args.traced]
    start = time.perf_counter()
    for t in sample:
        normalize(t, "innermost")
    t_traced = (time.perf_counter() - start) * len(terms) / max(len(sample), 1)

    print(f"{len(terms)} terms, depth <= {args.depth}")
    print(f"pure kernel     {t_pure:8.3f} s")
    if t_comp is None:
        print("compiled kernel  not built")
    else:
        print(f"compiled kernel {t_comp:8.3f} s  ({t_pure / t_comp:.1f}x)")
    print(f"traced engine   {t_traced:8.3f} s  (extrapolated from {len(sample)})")


if __name__ == "__main__":
    main()
