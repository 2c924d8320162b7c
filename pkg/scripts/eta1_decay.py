"""Fluid error versus eta1 for the 1D advection case without eta2, and its log-log slope."""
from penaldg import experiments as ex
from penaldg.diagnostics import eta1_decay_sweep

LADDER = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5)


def main():
    base = ex.fig4_base(case_id="eta1_decay")
    fit = eta1_decay_sweep(lambda e: ex.run(base.replace(eta1=e)).report, LADDER)
    print("eta1,error_fluid,status")
    for eta1, err, status in fit.table:
        print(f"{eta1:g},{'' if err is None else f'{err:.4e}'},{status}")
    print(f"slope,{fit.slope:.3f},")


if __name__ == "__main__":
    main()
