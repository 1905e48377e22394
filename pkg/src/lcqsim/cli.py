"""Command-line interface.

Subcommands: `gate` (simulate one analog gate, emit trajectory and
report), `synth` (state to phase-gate list and hypergraph), `plan`
(compile and execute an inner product), `recognize` (similarity tables
for pattern sets), `corpus` (write the bundled digit records).

Every run builds a manifest (command, parameter values, input file
digests, seed) and stamps its SHA-256 into a header comment of every
text output, so identical invocations produce byte-identical files.
Figures are rendered alongside the delimited output as PNG.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import gates as g
from . import ideal, patterns, planner, synthesis
from .network import (
    DegenerateAmplitudeError,
    IntegrationError,
    StrandedBridgeCurrentError,
    wrap_angle,
)

__all__ = ["main"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, complex):
        return f"{x.real:.12g}{x.imag:+.12g}j"
    return str(x)


# =====================================================================
# Manifest and writers
# =====================================================================


class RunManifest:
    def __init__(self, command: str, params: dict, seed: int, inputs: list[Path] | None = None):
        digests = {}
        for p in inputs or []:
            digests[p.name] = hashlib.sha256(p.read_bytes()).hexdigest()
        self.payload = {
            "command": command,
            "params": {k: _fmt(v) if isinstance(v, (float, complex)) else v for k, v in sorted(params.items())},
            "seed": seed,
            "inputs": digests,
        }
        blob = json.dumps(self.payload, sort_keys=True).encode()
        self.digest = hashlib.sha256(blob).hexdigest()


def _write_csv(path: Path, rows, manifest: RunManifest) -> None:
    with open(path, "w") as f:
        f.write(f"# manifest {manifest.digest}\n")
        for row in rows:
            f.write(",".join(_fmt(c) for c in row) + "\n")
    print(f"wrote {path}")


def _write_json(path: Path, obj: dict, manifest: RunManifest) -> None:
    obj = dict(obj)
    obj["manifest"] = manifest.digest
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote {path}")


def _write_text(path: Path, text: str, manifest: RunManifest) -> None:
    with open(path, "w") as f:
        f.write(f"# manifest {manifest.digest}\n")
        f.write(text)
    print(f"wrote {path}")


def _save_figure(fig, path: Path) -> None:
    try:
        fig.savefig(path, dpi=110, metadata={"Software": None})
    except TypeError:
        fig.savefig(path, dpi=110)
    print(f"wrote {path}")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


# =====================================================================
# gate
# =====================================================================

GATE_KINDS = ("phase-shift", "mixing", "not", "hadamard", "cnot", "cz", "ccz", "czphi")


def _build_schedule(kind: str, phi: float | None):
    if kind == "phase-shift":
        return g.design_phase_shift(np.pi / 2 if phi is None else phi)
    if kind == "mixing":
        return g.design_mixing()
    if kind == "not":
        return g.design_not()
    if kind == "hadamard":
        return g.compose_hadamard()
    if kind == "cnot":
        return g.cnot_schedule()
    if kind == "cz":
        return g.controlled_phase_schedule(np.pi)
    if kind == "czphi":
        if phi is None:
            raise ValueError("czphi needs --phi")
        return g.controlled_phase_schedule(phi)
    if kind == "ccz":
        return g.multi_controlled_phase_schedule(3, (1, 2, 3), np.pi)
    raise ValueError(f"unknown gate kind {kind!r}")


def _phase_series_rows(traj, network, basis, reference):
    header = ["t"]
    for j in basis:
        header += [f"amp{j}", f"phase{j}"]
    header.append("phase_ref")
    yield header
    n, m = network.n_resonators, network.n_bridges
    for i, t in enumerate(traj.times):
        row = [float(t)]
        vec = traj.data[i]
        for j in list(basis) + [reference]:
            r = network.resonators[j]
            red_i = r.orientation * np.sqrt(r.L / r.C) * vec[j]
            v = vec[n + m + j]
            amp = float(np.hypot(v, red_i))
            ph = wrap_angle(float(np.arctan2(red_i, v)) - r.omega0 * t) if amp > 1e-9 else 0.0
            if j == reference:
                row.append(ph)
            else:
                row += [amp, ph]
        yield row


def cmd_gate(args) -> int:
    phi = ideal.parse_angle(args.phi) if args.phi is not None else None
    schedule = _build_schedule(args.kind, phi)
    if args.end_time is not None:
        schedule = g.GateSchedule(
            schedule.network, schedule.basis, schedule.reference,
            schedule.nominal, float(args.end_time), schedule.label,
        )
    manifest = RunManifest(
        "gate",
        {"kind": args.kind, "phi": "" if phi is None else phi,
         "step": "" if args.step is None else args.step,
         "end_time": "" if args.end_time is None else args.end_time},
        args.seed,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    report = g.run_gate(schedule, step_size=args.step, keep_trajectories=True)
    traj = report.trajectories[0]
    net = schedule.network
    from .network import trajectory_csv_rows

    _write_csv(out / "gate-trajectory.csv", trajectory_csv_rows(traj), manifest)
    _write_csv(
        out / "gate-phases.csv",
        _phase_series_rows(traj, net, schedule.basis, schedule.reference),
        manifest,
    )

    rep = g.report_to_json_dict(report)
    if args.kind in ("phase-shift", "cz", "czphi", "ccz"):
        shifts = [
            float(np.mod(-np.angle(report.reconstructed[j, j]), 2.0 * np.pi))
            for j in range(len(schedule.basis))
        ]
        rep["phase_shifts"] = shifts
    _write_json(out / "gate-report.json", rep, manifest)

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4))
    n, m = net.n_resonators, net.n_bridges
    for j in schedule.basis:
        ax.plot(traj.times, traj.data[:, n + m + j], lw=0.6, label=f"V{j}")
    ax.plot(traj.times, traj.data[:, n + m + schedule.reference], lw=0.4, ls="--",
            color="gray", label="reference")
    ax.set_xlabel("t")
    ax.set_ylabel("voltage")
    ax.legend(loc="upper right", fontsize=7)
    fig.tight_layout()
    _save_figure(fig, out / "gate-voltage.png")
    plt.close(fig)

    print(f"gate {args.kind}: fidelity {report.fidelity:.12g}")
    return 0


# =====================================================================
# synth
# =====================================================================


def _load_state_file(path: Path):
    """Sign pattern, phase pattern, or pixel-pattern record."""
    text = path.read_text()
    stripped = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not stripped:
        raise ValueError(f"{path}: empty state file")
    head = stripped[0].split()
    if len(head) == 3 and "x" in head[1]:
        pat = patterns.pattern_from_text(text)
        reg = patterns.encode_pattern(pat)
        if pat.is_bipolar:
            signs = [1 if a.real > 0 else -1 for a in reg.amplitudes * np.sqrt(2 ** reg.n_qubits)]
            return synthesis.SignPattern(reg.n_qubits, tuple(signs))
        phases = np.angle(reg.amplitudes * np.sqrt(2 ** reg.n_qubits))
        return synthesis.PhasePattern.from_phases(phases)
    flat = "".join("".join(ln.split()) for ln in stripped)
    if set(flat) <= {"+", "-"}:
        return synthesis.sign_pattern_from_text(text)
    return synthesis.phase_pattern_from_text(" ".join(stripped))


def cmd_synth(args) -> int:
    path = Path(args.pattern)
    state = _load_state_file(path)
    manifest = RunManifest("synth", {"pattern": path.name}, args.seed, [path])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if isinstance(state, synthesis.SignPattern):
        global_sign, gate_list = synthesis.synthesize_rew(state)
    else:
        global_sign, gate_list = 1, synthesis.synthesize_cew(state)

    text = ideal.gates_to_text(gate_list)
    if global_sign < 0:
        text = "# global-sign -1\n" + text
    _write_text(out / "synth-gates.txt", text, manifest)

    hg = synthesis.to_hypergraph(state.n_qubits, gate_list)
    _write_text(out / "synth-hypergraph.txt", synthesis.hypergraph_to_text(hg), manifest)

    counts = synthesis.state_counts(state.n_qubits)
    _write_json(
        out / "synth-report.json",
        {
            "n_qubits": state.n_qubits,
            "gate_count": len(gate_list),
            "global_sign": global_sign,
            "counts": {
                "graph_states": str(counts.graph_states),
                "sign_patterns": str(counts.sign_patterns),
                "distinct_up_to_sign": str(counts.distinct_up_to_sign),
            },
        },
        manifest,
    )
    print(f"synth: {len(gate_list)} gates on {state.n_qubits} qubits")
    return 0


# =====================================================================
# plan
# =====================================================================


def cmd_plan(args) -> int:
    xpath, wpath = Path(args.x), Path(args.w)
    x = _load_state_file(xpath)
    w = _load_state_file(wpath)
    manifest = RunManifest(
        "plan",
        {"x": xpath.name, "w": wpath.name, "backend": args.backend,
         "prune": not args.no_prune, "variant": args.variant,
         "step": "" if args.step is None else args.step},
        args.seed,
        [xpath, wpath],
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    plan = planner.plan_inner_product(x, w)
    run_plan = plan if args.no_prune else planner.prune(plan, args.variant)
    y = planner.execute(run_plan, backend=args.backend, step_size=args.step)

    _write_text(out / "plan-steps.txt", planner.plan_to_text(run_plan), manifest)

    st = run_plan.stats
    _write_json(
        out / "plan-report.json",
        {
            "backend": args.backend,
            "n_qubits": run_plan.n_qubits,
            "pruned": not args.no_prune,
            "variant": args.variant,
            "bridge_count_full": st.bridge_count_full,
            "bridge_count_pruned": st.bridge_count_pruned,
            "phase_shift_count": st.phase_shift_count,
            "y0": {"re": float(y[0].real), "im": float(y[0].imag)},
        },
        manifest,
    )

    rows = [["index", "bits", "re", "im"]]
    for j, v in enumerate(y):
        rows.append([j, format(j, f"0{run_plan.n_qubits}b"), float(v.real), float(v.imag)])
    _write_csv(out / "plan-y.csv", rows, manifest)

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(np.arange(y.size), y.real, color="#3b6ea5")
    ax.set_xlabel("resonator index")
    ax.set_ylabel("Re y")
    ax.axhline(0.0, color="black", lw=0.5)
    fig.tight_layout()
    _save_figure(fig, out / "plan-y.png")
    plt.close(fig)

    print(f"plan ({args.backend}): y0 = {_fmt(complex(y[0]))}")
    return 0


# =====================================================================
# recognize
# =====================================================================


def _load_pattern_dir(d: Path) -> patterns.PatternSet:
    files = sorted(d.glob("*.pat"))
    if not files:
        raise ValueError(f"no .pat files in {d}")
    pats: list[patterns.Pattern] = []
    for f in files:
        pats.extend(patterns.patterns_from_text(f.read_text()))
    return patterns.PatternSet(tuple(pats))


def cmd_recognize(args) -> int:
    refdir, inpdir = Path(args.refs), Path(args.inputs)
    refs = _load_pattern_dir(refdir)
    inputs = _load_pattern_dir(inpdir)
    manifest = RunManifest(
        "recognize",
        {"refs": refdir.name, "inputs": inpdir.name},
        args.seed,
        sorted(refdir.glob("*.pat")) + sorted(inpdir.glob("*.pat")),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    sim = patterns.similarity_matrix(refs, inputs)
    _write_csv(out / "recognize-similarity.csv", sim.csv_rows(), manifest)

    rows = [["input", "recognized", "similarity"]]
    for x in inputs:
        labels = patterns.recognize(x, refs)
        best = max(patterns.pixel_inner(wp, x).real for wp in refs)
        rows.append([x.label, "|".join(labels), best])
        print(f"input {x.label} -> {'|'.join(labels)} ({best:.12g})")
    _write_csv(out / "recognize-argmax.csv", rows, manifest)

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 5))
    im = ax.imshow(sim.values.real, cmap="viridis", vmin=-1.0, vmax=1.0)
    ax.set_xticks(range(len(sim.input_labels)), sim.input_labels)
    ax.set_yticks(range(len(sim.ref_labels)), sim.ref_labels)
    ax.set_xlabel("input")
    ax.set_ylabel("reference")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    _save_figure(fig, out / "recognize-similarity.png")
    plt.close(fig)
    return 0


# =====================================================================
# corpus
# =====================================================================


def cmd_corpus(args) -> int:
    if args.name != "digits":
        raise ValueError(f"unknown corpus {args.name!r} (have: digits)")
    manifest = RunManifest("corpus", {"name": args.name}, args.seed)
    out = Path(args.out)
    refs, inputs = patterns.digit_corpus()
    for sub, pset in (("refs", refs), ("inputs", inputs)):
        d = out / sub
        d.mkdir(parents=True, exist_ok=True)
        for p in pset:
            _write_text(d / f"{p.label}.pat", patterns.pattern_to_text(p), manifest)
    return 0


# =====================================================================
# entry point
# =====================================================================


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lcqsim",
        description="Quantum gate simulation on LC resonator networks",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--step", type=float, default=None, help="integrator step size")
        p.add_argument("--end-time", type=float, default=None, help="override readout time")
        p.add_argument("--seed", type=int, default=0, help="random seed recorded in outputs")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("gate", help="simulate one analog gate")
    p.add_argument("kind", choices=GATE_KINDS)
    p.add_argument("--phi", default=None, help="angle (decimal or pi/k)")
    common(p)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("synth", help="synthesize a state into phase gates")
    p.add_argument("pattern", help="sign/phase/pixel pattern file")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("plan", help="compile and run an inner product")
    p.add_argument("x", help="input state file")
    p.add_argument("w", help="weight state file")
    p.add_argument("--backend", choices=("ideal", "analog"), default="ideal")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--variant", choices=("output", "complete-final"), default="output")
    common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("recognize", help="similarity tables for pattern sets")
    p.add_argument("refs", help="directory of reference .pat files")
    p.add_argument("inputs", help="directory of input .pat files")
    common(p)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("corpus", help="write a bundled corpus")
    p.add_argument("name", help="corpus name (digits)")
    common(p)
    p.set_defaults(func=cmd_corpus)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IntegrationError, StrandedBridgeCurrentError, DegenerateAmplitudeError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
