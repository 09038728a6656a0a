#!/usr/bin/env python3
"""Solve an LP/MIP file with HiGHS and write `name value` lines.

Usage: highs_lp_solve.py MODEL.lp SOLUTION.txt [--time-limit SECONDS]
Exit codes: 0 solved to optimality, 3 not proven optimal (an incumbent, if
any, is still written), 4 highspy missing.
"""
import argparse
import sys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("model")
    ap.add_argument("solution")
    ap.add_argument("--time-limit", type=float, default=300.0)
    args = ap.parse_args()
    try:
        import highspy
    except ImportError:
        print("highspy not installed", file=sys.stderr)
        return 4
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", args.time_limit)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.readModel(args.model)
    h.run()
    optimal = h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    if not optimal:
        print("status: " + h.modelStatusToString(h.getModelStatus()), file=sys.stderr)
        if h.getInfo().primal_solution_status != 2:
            return 3
    lp = h.getLp()
    values = h.getSolution().col_value
    with open(args.solution, "w") as f:
        f.write("# objective %.17g\n" % h.getInfo().objective_function_value)
        for name, value in zip(lp.col_names_, values):
            f.write("%s %.17g\n" % (name, value))
    return 0 if optimal else 3


if __name__ == "__main__":
    sys.exit(main())
