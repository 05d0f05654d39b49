"""The command-line tool end to end, in a scratch directory.

Run: python3 demos/05_cli_walkthrough.py
The same commands work from a shell as `gcl-divergence <subcommand> ...`.
"""

import tempfile
from pathlib import Path

from gcl_divergence.cli import main

work = Path(tempfile.mkdtemp(prefix="gcl-demo-"))
print("working in", work)


def run(*argv):
    argv = [str(a) for a in argv]
    print("\n$ gcl-divergence", " ".join(argv))
    code = main(argv)
    print(f"(exit {code})")


# a planted instance with its ground truth and a structured embedding
run("synth", "--n", 90, "--l", 3, "--seed", 1, "--out-dir", work / "good")
run("synth", "--n", 90, "--l", 3, "--seed", 1, "--random-embedding", "--out-dir", work / "bad")

graph, truth = work / "good" / "graph.edges", work / "good" / "partition.txt"
run("rank", "--graph", graph, "--embedding", work / "good" / "embedding.emb",
    "--embedding", work / "bad" / "embedding.emb", "--clustering", "file",
    "--partition", truth, "--compare", "ecg", "--out-dir", work / "rank")

run("cluster", "--graph", graph, "--clustering", "louvain", "--out-dir", work)
run("fit", "--graph", graph, "--embedding", work / "good" / "embedding.emb",
    "--alpha", 3, "--out-dir", work)
run("generate", "--graph", graph, "--embedding", work / "good" / "embedding.emb",
    "--alpha", "best", "--clustering", "file", "--partition", truth, "--seed", 7,
    "--out-dir", work / "samples")

# a star cannot be fitted; the tool says so with exit code 3
(work / "star.edges").write_text("0 1\n0 2\n0 3\n0 4\n")
(work / "star.emb").write_text("".join(f"{i} {i} 0\n" for i in range(5)))
run("score", "--graph", work / "star.edges", "--embedding", work / "star.emb",
    "--clustering", "louvain", "--out-dir", work)

print("\nfiles:", sorted(str(p.relative_to(work)) for p in work.rglob("*") if p.is_file()))
