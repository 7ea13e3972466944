#!/usr/bin/env python3
"""Produce the desk-scale figure CSVs into ./figures_data.

Runs the default grids of the CLI for both models plus the Renyi-2
crossing scans and the wavepacket snapshots used in the figures:

  nn_coeffs.csv, ir_coeffs.csv          Lanczos coefficients (insets)
  nn_evolve.csv, ir_evolve.csv          K/(L-1) resp. K/L vs tau
  nn_renyi2.csv, ir_renyi2.csv          chi(tau) crossing diagnostics
  nn_wavepacket.csv, ir_wavepacket.csv  psi_n snapshots

Everything is deterministic; rerunning overwrites identical bytes.
"""

import pathlib
import sys

from dekrylov import cli

SNAPSHOT_TAUS = "0,0.1,0.25,0.5,1,2"


def run(out_dir, name, argv):
    path = out_dir / name
    code = cli.main(argv + ["--out", str(path)])
    if code != 0:
        raise SystemExit(f"{name}: exit code {code}")
    print(f"wrote {path}")


def main():
    out_dir = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("figures_data")
    out_dir.mkdir(parents=True, exist_ok=True)
    for model in ("nn", "ir"):
        run(out_dir, f"{model}_coeffs.csv", ["coeffs", "--model", model])
        run(out_dir, f"{model}_evolve.csv", ["evolve", "--model", model])
        run(out_dir, f"{model}_renyi2.csv", ["renyi2", "--model", model])
        run(
            out_dir,
            f"{model}_wavepacket.csv",
            [
                "wavepacket",
                "--model",
                model,
                "--lengths",
                "100",
                "--tau-list",
                SNAPSHOT_TAUS,
            ],
        )


if __name__ == "__main__":
    main()
