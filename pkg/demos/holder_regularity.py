"""Predicted versus measured Holder regularity.

The regularity of the interpolation function splits into three cases on
the ratio delta = alpha_sup / 2^-N: below one the function is as smooth
as the data allows, at one a logarithm shaves an arbitrarily small mu
off the exponent, and above one the exponent degrades to
s - 1 + ln(alpha_sup)/ln(2^-N).  The empirical fit regresses the decay
of the worst cell oscillation and is checked one-sidedly, since sampled
oscillations under-estimate the truth.
"""

import gasketfif as gf
from gasketfif.analysis import holder_fit, holder_predict


def main():
    for alpha in (0.3, 0.5, 0.7):
        model = gf.reference_model(alpha=alpha, height=0.5)
        rep = holder_predict(model)
        fit = holder_fit(model, 3, 7)
        print(f"alpha = {alpha}: case {rep.case_id}, delta = {rep.delta:.3f}")
        print(f"  predicted exponent {rep.exponent:.10f}")
        print(f"  empirical fit      {fit.exponent:.6f} +- {fit.std_error:.6f}"
              f"  over levels {fit.levels[0]}..{fit.levels[-1]}")
        ok = fit.exponent >= rep.exponent - 0.2
        print(f"  one-sided check: {'ok' if ok else 'below prediction'}\n")


if __name__ == "__main__":
    main()
