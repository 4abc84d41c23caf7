"""Mean SHD of plain PC at each alpha against the AutoPC mean, one cell.

Prints the curve and writes it as CSV. If matplotlib is importable a PNG is
written as well; it is not a package dependency.

    python3 scripts/alpha_curve.py --d 10 --n 1000 --reps 200
"""

import argparse
from pathlib import Path

from autopc.bench import ExperimentConfig, alpha_curve_csv, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=10)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--metric", default="SHD", choices=["SHD", "F1", "MCC"])
    ap.add_argument("--out", default="results/alpha_curve")
    args = ap.parse_args()

    cfg = ExperimentConfig(dims=[args.d], sample_sizes=[args.n], reps=args.reps, seed=args.seed)
    cell = run_experiment(cfg, jobs=args.jobs)[0]
    alphas = [float(a) for a in cell.alpha_curve]
    pc = [cell.alpha_curve[a][args.metric] for a in cell.alpha_curve]
    auto = cell.mean["AutoPC"][args.metric]

    print(f"{'alpha':>8}  PC {args.metric}")
    for a, v in zip(alphas, pc):
        print(f"{a:>8g}  {v:.3f}")
    print(f"AutoPC    {auto:.3f}")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".csv").write_text(alpha_curve_csv([cell]))
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(alphas, pc, "o-", label="PC")
    ax.axhline(auto, color="k", ls="--", label="AutoPC")
    ax.set_xscale("log")
    ax.set_xlabel("alpha")
    ax.set_ylabel(f"mean {args.metric}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out.with_suffix(".png"), dpi=150)


if __name__ == "__main__":
    main()
