"""Recount the stair k=11 coarse patterns (slow: a few minutes).

Counts tilings of scale(stair, 11) by S20 rectangles plus one S30, then by
S20 plus exactly one S30 and exactly one S21.  Expected: 36 and 42.
"""

import argparse
import time

from reptile.exact_cover import make_matrix
from reptile.grid import SHAPES, scale
from reptile.placements import multi_piece_instance
from reptile.structural import coarse_tilings, library_meta_piece


class _ExactlyOne:
    """Cover rows with one marker column per listed piece index."""

    def __init__(self, instance, marked):
        n = instance.n_cells
        self.n_cells = n + len(marked)
        slot = {p: n + i for i, p in enumerate(marked)}
        self._rows = [p.covered + ((slot[p.piece],) if p.piece in slot else ())
                      for p in instance.placements]
        self.trivially_unsat = bool(instance.uncoverable)

    def rows(self):
        return self._rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-seconds", type=float, default=3600.0)
    args = ap.parse_args(argv)
    region = scale(SHAPES["stair"], 11)
    s20, s30, s21 = (library_meta_piece(n) for n in ("S20", "S30", "S21"))

    t0 = time.monotonic()
    n_a = coarse_tilings(region, [s20, s30], method="cached")
    print(f"S20 + S30: {n_a} coarse tilings ({time.monotonic() - t0:.1f} s)")

    t0 = time.monotonic()
    inst = multi_piece_instance([s20.shape, s30.shape, s21.shape], region)
    status, n_bc, nodes = make_matrix(_ExactlyOne(inst, [1, 2])).search(max_seconds=args.max_seconds)
    done = "exact" if status == 0 else f"incomplete (status {status})"
    print(f"S20 + one S30 + one S21: {n_bc} coarse tilings, {done}, {nodes} nodes "
          f"({time.monotonic() - t0:.1f} s)")


if __name__ == "__main__":
    main()
