#!/usr/bin/env python3
"""Sweep the z offset of a single qutrit and record the dynamical Chern number.

Produces the transition data for a fast and a slow ramp: the slow ramp
resolves the topological step at h0 = hr, the fast one smears it.
"""

import argparse
from pathlib import Path

import numpy as np

from spin1topo.berry import RampProtocol, simulate_ramp
from spin1topo.hamiltonians import MHZ_TO_RAD_PER_US, FieldVector, SingleSpinParams


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hr", type=float, default=10.0, help="field magnitude, MHz")
    parser.add_argument("--h0-max", type=float, default=20.0, help="sweep end, MHz")
    parser.add_argument("--steps", type=int, default=21)
    parser.add_argument("--t-fast", type=float, default=0.5, help="fast ramp, us")
    parser.add_argument("--t-slow", type=float, default=10.0, help="slow ramp, us")
    parser.add_argument("--out", default="results/single_spin_transition.csv")
    args = parser.parse_args()

    hr = args.hr * MHZ_TO_RAD_PER_US
    rows = ["h0_mhz,chern_fast,chern_slow"]
    for h0 in np.linspace(0.0, args.h0_max * MHZ_TO_RAD_PER_US, args.steps):
        params = SingleSpinParams(field=FieldVector(hr), h0=h0)
        fast = simulate_ramp(params, RampProtocol(args.t_fast)).chern
        slow = simulate_ramp(params, RampProtocol(args.t_slow)).chern
        rows.append(f"{h0 / MHZ_TO_RAD_PER_US:.12g},{fast:.12g},{slow:.12g}")
        print(rows[-1])
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(rows) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
