#!/usr/bin/env python3
"""Required orthogonal inter-satellite spacing over the pass.

Writes one CSV per receive-array size with columns theta_deg, ds_orth_km,
covering elevations 30..150 degrees at 600 km altitude.
"""

import argparse
import csv
import math
from pathlib import Path

from swarmlink.errors import NoRoot
from swarmlink.geometry import OrbitConfig
from swarmlink.spacing import SpacingQuery, optimal_spacing


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--d0-km", type=float, default=600.0)
    parser.add_argument("--nr", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--k", type=int, default=1)
    args = parser.parse_args()

    orbit = OrbitConfig(altitude_m=args.d0_km * 1e3)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for nr in args.nr:
        path = out_dir / f"spacing_nr{nr}_d0{args.d0_km:g}km.csv"
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["theta_deg", "ds_orth_km"])
            for theta_deg in range(30, 151):
                query = SpacingQuery(
                    elevation_rad=math.radians(theta_deg),
                    num_rx=nr,
                    orbit=orbit,
                    harmonic=args.k,
                )
                try:
                    result = optimal_spacing(query)
                except NoRoot:
                    continue
                writer.writerow([theta_deg, result.spacing_m / 1e3])
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
