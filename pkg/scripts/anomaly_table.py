"""Anomaly-cancellation relations: stated constants against computed a0.

For each 2d - l case and each checked instance, prints whether the stated
relation holds, whether a0 vanishes identically, and the decomposition of
a0 at the scaling weight d - l + 4k.

    python3 scripts/anomaly_table.py --gauge e8
"""
import argparse

from e8genus import genus as G


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gauge", choices=("e8", "e8xe8"), default="e8")
    args = ap.parse_args(argv)
    gauge = G.Gauge.parse(args.gauge)
    print(f"{'2d-l':>5} {'(d,l)':>8} {'stated':>18} {'status':>6} {'a0=0':>5} {'wt':>3}  decomposition")
    for target, case in sorted(G.anomaly_cases(gauge).items()):
        for d, l in G.case_instances(gauge, target):
            inst = G.GenusInstance(d, l, gauge)
            rep = G.verify_anomaly_case(inst, case)
            vac = "yes" if "a0 vanishes identically: True" in rep.notes else "no"
            dec = G.decompose_a0(inst, inst.scaling_weight)
            parts = "" if dec.got is None else "; ".join(f"{k}: {v}" for k, v in dec.got.items())
            print(f"{target:>5} {str((d, l)):>8} {str(case.expected):>18} {rep.status:>6} "
                  f"{vac:>5} {inst.scaling_weight:>3}  {parts}")


if __name__ == "__main__":
    main()
