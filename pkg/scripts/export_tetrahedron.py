#!/usr/bin/env python3
"""Export Bloch-sphere coordinates of the POVM a QID program realizes.

By default uses the tetrahedron program; pass amplitudes to inspect other
programs.  The CSV (label,x,y,z) is ready for any 3-D scatter plotter.
"""

import argparse

import numpy as np

from mapproc.qid import QidProgram, qid_povm, sic_program


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--alpha",
        type=float,
        nargs=8,
        metavar="RE/IM",
        help="program amplitudes as re0 im0 re1 im1 ... (default: tetrahedron)",
    )
    parser.add_argument("--output", default="-")
    args = parser.parse_args()

    if args.alpha is None:
        program = sic_program()
    else:
        vals = np.array(args.alpha).reshape(4, 2)
        program = QidProgram(amplitudes=vals[:, 0] + 1j * vals[:, 1])

    report = qid_povm(program)
    lines = ["label,x,y,z"]
    for label, x, y, z in report.bloch_points():
        lines.append(f"{label},{x!r},{y!r},{z!r}")
    text = "\n".join(lines) + "\n"
    if args.output == "-":
        print(text, end="")
        print(f"# informationally complete: {report.informationally_complete}")
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
