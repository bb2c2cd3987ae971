"""Where does labeling one more point help most?

This script reproduces the observation that motivates learned query
selection.  On two overlapping Gaussian clouds we train a logistic
classifier on a single labeled pair, then try every unlabeled point in
turn: add its label, retrain, and record how much the 0/1 test loss drops.
Averaged over many repetitions and binned by the classifier's predicted
class-0 probability p0, the picture depends on the class balance:

* balanced classes: the biggest average improvement comes from points the
  classifier is most unsure about (p0 near 0.5) - exactly what
  uncertainty sampling selects;
* class 0 twice as common as class 1: the sweet spot moves away from 0.5,
  so the uncertainty heuristic is no longer aiming at the right target.

Run time is a couple of minutes; pass a smaller --repetitions to go faster.
"""

import argparse
from pathlib import Path

from lalearn.artifacts import motivation_to_csv
from lalearn.harness import motivation_experiment
from lalearn.svg import line_plot

OUT = Path(__file__).parent / "output"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repetitions", type=int, default=5000)
    parser.add_argument("--workers", type=int, default=2)
    args = parser.parse_args()
    OUT.mkdir(exist_ok=True)

    series = []
    for balanced in (True, False):
        label = "balanced" if balanced else "class0_twice_class1"
        curve = motivation_experiment(balanced=balanced,
                                      repetitions=args.repetitions,
                                      seed=7, workers=args.workers)
        motivation_to_csv(curve, OUT / f"error_reduction_{label}.csv")
        series.append((label, curve.bin_centers, curve.mean_delta))
        print(f"{label}: the most valuable labels sit at p0 = "
              f"{curve.argmax_center():.2f} "
              f"(peak bin estimates wobble below ~5000 repetitions)")
    line_plot(OUT / "error_reduction.svg", series,
              title="mean 0/1-loss reduction by predicted probability",
              x_label="predicted class-0 probability of the candidate",
              y_label="mean loss reduction")
    print(f"wrote {OUT}/error_reduction_*.csv and error_reduction.svg")
    print("compare the two curves: the imbalanced profile shifts and loses "
          "its symmetry around 0.5, which is what a learned, per-problem "
          "selection rule can exploit")


if __name__ == "__main__":
    main()
