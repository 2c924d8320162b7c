"""Run every preset, write CSVs under results/ and print the check summary."""
import argparse
import os

from penaldg import experiments as ex


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="results")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("presets", nargs="*", default=list(ex.PRESETS))
    args = p.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name in args.presets:
        res = ex.run_preset(name, jobs=args.jobs, out_dir=os.path.join(args.out, name))
        with open(os.path.join(args.out, f"{name}.csv"), "w") as fh:
            ex.rows_csv(res.rows, fh)
        print(f"== {name}: {'PASS' if res.passed else 'FAIL'}")
        for ok, msg in res.checks:
            print(f"  [{'PASS' if ok else 'FAIL'}] {msg}")


if __name__ == "__main__":
    main()
