"""Rank ten embeddings under two clusterings and compare the rankings.

Run: python3 demos/04_ranking_robustness.py
"""

from gcl_divergence import ecg, kendall_tau, louvain, rank_embeddings, synth

g, truth = synth.planted_partition(synth.PlantedSpec(120, 4, 0.25, 0.04, 10))
es = [synth.structured_embedding(truth, spread=s, seed=i, name=f"spread-{s:g}")
      for i, s in enumerate((0.5, 1, 1.5, 2, 3, 4, 6, 8))]
es += [synth.random_embedding(g.n, 2, seed=s, name=f"random-{s}") for s in (1, 2)]

rankings = {}
for label, p in (("ecg", ecg(g, seed=0)), ("louvain", louvain(g, seed=0))):
    ranked = rank_embeddings(g, p, es, workers=4)
    rankings[label] = [name for name, _ in ranked]
    print(f"\n{label} ({p.cluster_count} clusters)")
    for k, (name, rep) in enumerate(ranked, 1):
        print(f"  {k:2d}. {name:12s} divergence {rep.best_divergence:.5f}  alpha {rep.best_alpha:g}")

print(f"\nkendall tau: {kendall_tau(rankings['ecg'], rankings['louvain']):.3f}")
