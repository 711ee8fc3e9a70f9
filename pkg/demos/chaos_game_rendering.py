"""Render the graph of the interpolation function with the chaos game.

The graph is the attractor of 9^N affine-in-the-last-coordinate maps, so
random iteration of those maps scatters points over it.  The script
writes the samples to CSV and cross-checks a handful of them against the
truncated evaluator.
"""

import os

import gasketfif as gf
from gasketfif.evaluator import chaos_game, eval_approx, samples_to_csv


def main():
    model = gf.reference_model(alpha=0.5, height=0.5)
    samples = chaos_game(model, count=20000, seed=42)
    out = os.path.join(os.path.dirname(__file__), "graph_samples.csv")
    samples_to_csv(samples, out)
    print(f"wrote {len(samples)} graph samples to {out}")

    values = [sm.value for sm in samples]
    print(f"sampled value range: [{min(values):.4f}, {max(values):.4f}]"
          f"  (analytic bound {model.f_sup_bound:.4f})")

    print("\ncross-check of the first few samples against eval_approx:")
    for sm in samples[:5]:
        approx, bound = eval_approx(model, sm.t, sm.s, 12)
        print(f"  chaos {sm.value:+.10f}  approx {approx:+.10f}"
              f"  diff {abs(sm.value - approx):.2e} (<= {bound:.2e})")


if __name__ == "__main__":
    main()
