#!/usr/bin/env python3
"""Compute the (h0, g) topological phase diagram of the coupled qutrit pair.

The analytic method counts enclosed Weyl charges from the on-axis scan; the
dynamical method (slower) integrates the ramp response at every grid point.
"""

import argparse
from pathlib import Path

import numpy as np

from spin1topo.berry import RampProtocol
from spin1topo.hamiltonians import MHZ_TO_RAD_PER_US, CoupledParams, FieldVector
from spin1topo.phases import count_regions, phase_diagram
from spin1topo.svgplot import write_heatmap_svg


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hr", type=float, default=10.0, help="field magnitude, MHz")
    parser.add_argument("--max", type=float, default=20.0, help="axis range, MHz")
    parser.add_argument("--steps", type=int, default=21)
    parser.add_argument("--method", choices=("analytic", "dynamical"), default="analytic")
    parser.add_argument("--t-ramp", type=float, default=10.0, help="ramp duration, us")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default="results/h0_g_diagram.csv")
    args = parser.parse_args()

    hr = args.hr * MHZ_TO_RAD_PER_US
    grid = np.linspace(0.0, args.max * MHZ_TO_RAD_PER_US, args.steps)
    protocol = RampProtocol(args.t_ramp) if args.method == "dynamical" else None
    diagram = phase_diagram(
        "h0", "g", grid, grid, CoupledParams(field=FieldVector(hr)),
        method=args.method, protocol=protocol, jobs=args.jobs,
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(diagram.to_csv())
    write_heatmap_svg(diagram, hr, out.with_suffix(".svg"))
    values = sorted({int(v) for v in diagram.chern_grid.ravel()})
    print(f"values={values} regions={count_regions(diagram.chern_grid)}")
    print(f"wrote {out} and {out.with_suffix('.svg')}")


if __name__ == "__main__":
    main()
