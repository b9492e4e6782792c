#!/usr/bin/env python3
"""Phase diagrams for the circuit couplings: four two-parameter slices.

Covers (h0, j_z), (h0, j_02), (g, j_z) and (g, j_02) with all other
couplings absent, reproducing the transition lines h0 + j_z = hr, j_z = hr,
j_02 = 2*hr and the Chern-2 ridge along j_02 ~ g.
"""

import argparse
from pathlib import Path

import numpy as np

from spin1topo.hamiltonians import MHZ_TO_RAD_PER_US, CoupledParams, FieldVector
from spin1topo.phases import phase_diagram
from spin1topo.svgplot import write_heatmap_svg

SLICES = (("h0", "j_z"), ("h0", "j_02"), ("g", "j_z"), ("g", "j_02"))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hr", type=float, default=10.0, help="field magnitude, MHz")
    parser.add_argument("--max", type=float, default=30.0, help="axis range, MHz")
    parser.add_argument("--steps", type=int, default=21)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out-dir", default="results")
    args = parser.parse_args()

    hr = args.hr * MHZ_TO_RAD_PER_US
    grid = np.linspace(0.0, args.max * MHZ_TO_RAD_PER_US, args.steps)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for x_param, y_param in SLICES:
        diagram = phase_diagram(
            x_param, y_param, grid, grid, CoupledParams(field=FieldVector(hr)), jobs=args.jobs
        )
        stem = out_dir / f"{x_param}_{y_param}_diagram"
        stem.with_suffix(".csv").write_text(diagram.to_csv())
        write_heatmap_svg(diagram, hr, stem.with_suffix(".svg"))
        values = sorted({int(v) for v in diagram.chern_grid.ravel()})
        print(f"{x_param} x {y_param}: values={values} -> {stem}.csv/.svg")


if __name__ == "__main__":
    main()
