"""Weight-4 relation search on the octagon.

Generators are the cyclic orbits of I_{3,1} over pairs of quadrilateral cells and
of Li_4 over single quadrilaterals.  Prints the kernel dimension and writes the
identities found.  Not part of the test suite; expect minutes, not seconds.

    python3 scripts/weight4_search.py -o weight4.json
"""

import argparse
import sys
import time

from polygonal_mpl import io
from polygonal_mpl.errors import ScaleExceeded
from polygonal_mpl.lab import SearchProblem, search, verify
from polygonal_mpl.polygon import generate_ansatz


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--max-unknowns", type=int, default=2000)
    p.add_argument("--limit", type=int, help="use only the first N generators (for a quick run)")
    p.add_argument("-o", "--output")
    a = p.parse_args(argv)

    t0 = time.perf_counter()
    gens = generate_ansatz(a.size, 4, [(3, 1)], kind="I", cell_sizes=(4,))
    gens += generate_ansatz(a.size, 4, [(4,)], kind="Li", cell_sizes=(4,))
    if a.limit:
        gens = gens[: a.limit]
    names = [f"t{i + 1}" for i in range(len(gens))]
    print(f"{len(gens)} orbit generators ({time.perf_counter() - t0:.1f}s)", flush=True)
    try:
        ids = search(SearchProblem(gens, names, max_unknowns=a.max_unknowns))
    except ScaleExceeded as exc:
        print(f"scale exceeded: {exc}")
        return 3
    print(f"kernel dimension {len(ids)} ({time.perf_counter() - t0:.1f}s)", flush=True)
    bad = [i for i, idn in enumerate(ids) if not verify(idn.expr).verified]
    print(f"re-verified {len(ids) - len(bad)}/{len(ids)}")
    for idn in ids[:5]:
        print("  " + " + ".join(f"{c}*{n}" for n, c in idn.coefficients.items()))
    if a.output:
        d = {"schema": io.SCHEMA, "type": "identities", "identities": [io.identity_to_json(i) for i in ids]}
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(d))
    return 0 if ids and not bad else 1


if __name__ == "__main__":
    sys.exit(main())
