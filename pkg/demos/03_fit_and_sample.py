"""Fit GCL weights to the karate degrees and draw random graphs from the model.

Run: python3 demos/03_fit_and_sample.py
"""

import numpy as np

from gcl_divergence import degree_sequence, ecg, fit_weights, sample_graph, synth
from gcl_divergence.gcl import feasibility_check

g, _ = synth.karate()
w = degree_sequence(g)
print("feasible degree sequence:", feasibility_check(w).feasible)
print("a star is not:", feasibility_check([5, 1, 1, 1, 1, 1]))

e = synth.netmf_embedding(g, dim=8, window=10)
p = ecg(g, seed=0).assignment

for alpha in (0.0, 2.0, 5.0, 10.0):
    model, rep = fit_weights(w, e, alpha)
    sizes, cross = [], []
    for seed in range(100):
        h = sample_graph(model, seed)
        ends = h.edges()
        sizes.append(h.edge_count)
        cross.append(np.mean(p[ends[:, 0]] != p[ends[:, 1]]))
    print(f"alpha {alpha:4.1f}: {rep.iterations:5d} iterations, residual {model.residual:.1e}, "
          f"mean edges {np.mean(sizes):5.1f}, cross-cluster share {np.mean(cross):.3f}")

# with stronger decay, sampled edges stay inside the embedding's neighbourhoods
