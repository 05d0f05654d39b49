"""Score a few karate-club embeddings and look at the divergence curve.

Run: python3 demos/01_score_karate.py
"""

import numpy as np

from gcl_divergence import divergence_score, ecg, modularity, synth

g, clubs = synth.karate()
print(f"karate: {g.n} vertices, {g.edge_count} edges")

# step 1: one stable partition, reused for every embedding
p = ecg(g, seed=0)
print(f"ECG found {p.cluster_count} clusters, modularity {modularity(g, p):.3f}")

embeddings = [
    synth.netmf_embedding(g, dim=8, window=10),
    synth.spectral_embedding(g, 2),
    synth.random_embedding(g.n, 2, seed=0),
]

for e in embeddings:
    rep = divergence_score(g, p, e)
    print(f"\n{e.name}: best alpha {rep.best_alpha:g}, divergence {rep.best_divergence:.5f}")
    # a coarse text plot of the curve, every fourth grid point
    top = max(pt.delta for pt in rep.curve)
    for pt in rep.curve[::4]:
        bar = "#" * int(round(40 * pt.delta / top))
        print(f"  alpha {pt.alpha:5.2f}  {pt.delta:.5f}  {bar}")

# alpha = 0 ignores geometry, so every embedding scores the same there
at_zero = [divergence_score(g, p, e, grid=[0.0]).best_divergence for e in embeddings]
print("\nscores at alpha=0:", np.round(at_zero, 10))
