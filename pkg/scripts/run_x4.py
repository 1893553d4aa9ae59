"""Four real intersections on lines through the spectrahedron, over many random pencils.

    python3 scripts/run_x4.py --pencils 20 --samples 100
"""

import argparse
import time
from dataclasses import asdict, dataclass

from quartic_lattice.spectra import random_pencil, verify_x4


@dataclass
class Config:
    pencils: int = 20
    samples: int = 100
    entries: int = 5
    seed: int = 0


def main(cfg: Config) -> bool:
    ok = True
    t0 = time.perf_counter()
    for k in range(cfg.pencils):
        seed = cfg.seed + k
        t = time.perf_counter()
        r = verify_x4(random_pencil(seed, cfg.entries), cfg.samples, seed)
        ok &= r["pass"]
        print(f"pencil {seed:3d}  point={','.join(r['point'])}  histogram={r['histogram']}  "
              f"inside={r['lines_inside_quartic']}  jumps_ok={r['jumps_ok']}  "
              f"{time.perf_counter() - t:.2f}s")
    print(f"{'all pass' if ok else 'FAILURES'} in {time.perf_counter() - t0:.1f}s")
    return ok


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(Config()).items():
        ap.add_argument(f"--{name}", type=int, default=default)
    raise SystemExit(0 if main(Config(**vars(ap.parse_args()))) else 1)
