"""Sweep of |F - (1 - eps_J - theta_J^2)| / ||L||_F^3 over the random corpus.

Run directly to print the table used to pin the acceptance bound:

    python3 tests/fidelity_sweep.py
"""
import numpy as np

from errorgen.channels import make_random_small
from errorgen.metrics import entanglement_fidelity, fidelity_approximation
from errorgen.superop import matrix_log

CORPUS = {1: 100, 2: 50}
SCALES = (1e-3, 1e-2, 1e-1)


def corpus_ratios(n_qubits: int, n_seeds: int, scale: float) -> np.ndarray:
    ratios = []
    for seed in range(n_seeds):
        g = make_random_small(seed, scale, n_qubits)
        gen = matrix_log(g)
        gap = abs(entanglement_fidelity(g, np.eye(len(g))) - fidelity_approximation(gen))
        ratios.append(gap / np.linalg.norm(gen) ** 3)
    return np.array(ratios)


def sweep(scales=SCALES, corpus=CORPUS) -> dict[tuple[int, float], float]:
    return {(n, s): float(corpus_ratios(n, k, s).max()) for n, k in corpus.items() for s in scales}


if __name__ == "__main__":
    print(f"{'N':>2} {'scale':>7} {'max ratio':>10}")
    for (n, s), worst in sweep().items():
        print(f"{n:>2} {s:>7.0e} {worst:>10.3f}")
