"""Truncation-error order of every named family and the trivial-solution check."""
import argparse

from penaldg import mea


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=0.001)
    p.add_argument("--dx", type=float, default=0.05)
    args = p.parse_args()
    print(f"{'family':<18} {'continuous':<11} orders (j = 0, 1, 2)")
    for name in mea.FAMILIES:
        inp, cont = mea.family_input(name, c=args.c, nu=args.nu, dx=args.dx)
        print(f"{name:<18} {str(cont):<11} {mea.classify_te_order(inp, continuous=cont)}")
    chk = mea.verify_trivial_solution(args.c, args.nu, args.dx)
    print(f"trivial solution check: {'pass' if chk.passed else 'fail'}")
    bad = mea.verify_trivial_solution(args.c, args.nu, args.dx, eta3=None)
    print(f"without eta3: {'pass' if bad.passed else 'fail'}, first offenders {bad.offenders[:3]}")


if __name__ == "__main__":
    main()
