"""Box-counting dimension of the graph against the analytic bounds.

When the scaling sup stays below the cell diameter ratio 2^-N, the graph
dimension is squeezed between the dimension of the product domain,
2 log3/log2, and that value plus 1 - s.  For tensor-type data s = 1, so
both bounds collapse to 3.1699... and the empirical slope should land
right there.
"""

import gasketfif as gf
from gasketfif.analysis import (
    box_count,
    dimension_bounds,
    estimate_box_dimension,
    oscillation,
)


def main():
    model = gf.reference_model(alpha=0.3, height=0.5)
    lower, upper = dimension_bounds(model)
    print(f"analytic bounds: {lower:.6f} <= dim graph <= {upper:.6f}\n")

    print("level  delta      boxes")
    records = []
    for n in range(2, 7):
        rec = box_count(model, n, oscillation(model, n))
        records.append(rec)
        print(f"{rec.level:>5}  {rec.delta:<9.6g}  {rec.count}")

    report = estimate_box_dimension(records)
    print(f"\nregression slope: {report.slope:.6f} +- {report.std_error:.6f}")
    inside = lower - 0.15 <= report.slope <= upper + 0.2
    print("slope sits inside the sandwich" if inside
          else "slope escaped the sandwich")


if __name__ == "__main__":
    main()
