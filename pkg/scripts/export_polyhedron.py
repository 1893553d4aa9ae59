"""Write the walls e0..e13, their types and the Coxeter scheme to a JSON file."""

import argparse
import json

from quartic_lattice.k3model import export_figure1

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=3, help="box for the s4 witness search")
    ap.add_argument("--out", default="polyhedron.json")
    args = ap.parse_args()
    data = export_figure1(bound=args.bound)
    with open(args.out, "w") as fh:
        json.dump(data, fh, indent=1, default=str)
    kinds = [v["type"]["kind"] for v in data["vectors"]]
    print(f"{args.out}: {len(kinds)} walls, {len(data['edges'])} edges, "
          + ", ".join(f"{k}={kinds.count(k)}" for k in sorted(set(kinds))))
