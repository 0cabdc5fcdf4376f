"""Solves an LP written by `flexplan solve --dump-lp` with HiGHS and compares
the optimum with the objective in solve.json.

    pip install highspy
    python3 scripts/crosscheck_highs.py OUT_DIR
"""

import json
import sys
from pathlib import Path

import highspy


def main(out_dir):
    out = Path(out_dir)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(out / "model.lp"))
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    highs_obj = h.getInfo().objective_function_value
    ours = json.loads((out / "solve.json").read_text())["report"]["primal_objective"]
    rel = abs(highs_obj - ours) / max(1.0, abs(ours))
    print(f"highs: {status} {highs_obj!r}\nflexplan: {ours!r}\nrelative difference: {rel:.3e}")
    return 0 if status == "Optimal" and rel <= 1e-9 else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
