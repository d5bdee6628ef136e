from hlestim.probe import GRID_FAMILIES, ProbeFamily, make_probe, probe_variance
from hlestim.qpe import max_failure

if __name__ == '__main__':

    for family in GRID_FAMILIES:
        state = make_probe(family, 3, 0.98 if family is ProbeFamily.KAISER else None)
        summary = max_failure(state, 20_000)
        print(f"{state.label:>14}  variance={probe_variance(state):.4f}  "
              f"max failure={summary.max:.5f} at theta={summary.argmax:.4f}")
