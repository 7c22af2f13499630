"""Command-line front end.

Every subcommand builds one instance, runs one experiment and writes a JSON
report (``schema: 1``).  Exit status is 0 when every experiment passes, 1 when
one fails and 2 for a configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import verify
from .code import build_2d_code, build_3d_code, build_bilayer_cs_code
from .complex import build_tetrahedron, build_torus, build_triangle_lattice
from .diagop import build_V, build_W, compile_to_gates, gate_summary, gates_json

SCHEMA = 1
INSTANCES = ("2d", "3d", "bilayer", "torus2d", "torus3d")
COMMANDS = ("build", "check-stabilizers", "check-symmetry", "logical-action", "anyons", "gsd", "dw",
            "code-switch", "dump-circuit", "suite")

log = logging.getLogger("cliffstab")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    instance: str = "2d"
    size: int = 1
    refinement: int = 1
    lattice: str | None = None
    dims: list | None = None
    seed: int = 0
    count: int = 1
    op: str = "W"
    out: str | None = None
    jobs: int = 1
    untwisted: bool = False
    timings: bool = False
    experiments: list = field(default_factory=list)

    def validate(self) -> "RunConfig":
        if self.instance not in INSTANCES:
            raise ConfigError(f"unknown instance {self.instance!r}; choose from {', '.join(INSTANCES)}")
        if self.size < 1 or self.refinement < 1 or self.count < 1 or self.jobs < 1:
            raise ConfigError("size, refinement, count and jobs must be positive")
        if self.lattice not in (None, "simplicial", "cubical"):
            raise ConfigError(f"unknown lattice {self.lattice!r}")
        if self.op not in ("W", "V"):
            raise ConfigError("--op must be W or V")
        unknown = [e for e in self.experiments if e not in COMMANDS and e not in CRITERIA]
        if unknown:
            raise ConfigError(f"unknown experiment ids: {unknown}")
        return self


def build_instance(cfg: RunConfig):
    """Return the Code (or, for torus3d, the bare complex) described by ``cfg``."""
    inst = cfg.instance
    if inst in ("2d", "bilayer"):
        kind = cfg.lattice or ("simplicial" if cfg.size == 1 else "cubical")
        cx = build_triangle_lattice(cfg.size, kind)
        return build_2d_code(cx, twisted=not cfg.untwisted) if inst == "2d" else build_bilayer_cs_code(cx)
    if inst == "3d":
        return build_3d_code(build_tetrahedron(cfg.refinement))
    if inst == "torus2d":
        dims = cfg.dims or [cfg.size, cfg.size]
        if len(dims) != 2:
            raise ConfigError("torus2d needs two dimensions")
        return build_2d_code(build_torus(dims, cfg.lattice or "cubical"), twisted=not cfg.untwisted)
    dims = cfg.dims or [cfg.size] * 3
    if len(dims) != 3:
        raise ConfigError("torus3d needs three dimensions")
    return build_torus(dims, cfg.lattice or "cubical")


def _need_code(obj, what: str):
    if not hasattr(obj, "generators"):
        raise ConfigError(f"{what} needs a code instance, not a bare torus3d complex")
    return obj


# ----------------------------------------------------------------------
# experiments: each returns (list of Report, summary lines, extra payload)


def run_build(cfg):
    obj = build_instance(cfg)
    payload = obj.to_json()
    if hasattr(obj, "generators"):
        counts = {"qubits": obj.n_qubits, "x_generators": len(obj.x_generators),
                  "z_generators": len(obj.z_generators), "flat_dim": len(obj.flat_basis),
                  "logical_classes_dim": len(obj.logical_classes())}
    else:
        counts = {"cells": list(obj.counts)}
    rep = verify.Report("build", _name(obj), True, counts)
    return [rep], [json.dumps(counts, sort_keys=True)], {"instance": payload}


def run_check_stabilizers(cfg):
    code = _need_code(build_instance(cfg), "check-stabilizers")
    rep = verify.check_stabilizers(code)
    return [rep], [f"{rep.details['n_x']} X and {rep.details['n_z']} Z generators"], {}


def run_check_symmetry(cfg):
    code = _need_code(build_instance(cfg), "check-symmetry")
    reps = [verify.check_emergent_symmetry(code), verify.check_emergent_symmetry(code, inverse=True)]
    if not code.complex.closed:
        reps.append(verify.check_boundary_preservation(code))
        reps.append(verify.trivialization_chain(code))
    lines = [f"{k} -> {', '.join(v)}" for k, v in reps[0].details["x_table"].items()]
    lines += [f"{k} -> {', '.join(v)}" for k, v in reps[0].details["z_table"].items()]
    lines.append(f"mismatches: {reps[0].details['mismatches']}")
    return reps, lines, {}


def run_logical_action(cfg):
    code = _need_code(build_instance(cfg), "logical-action")
    rep = verify.logical_action(code)
    phases = rep.details["phases"]
    return [rep], [f"diag({', '.join(phases)})" if phases else "not diagonal"], {}


def run_anyons(cfg):
    code = _need_code(build_instance(cfg), "anyons")
    rep = verify.anyon_permutation_report(code)
    return [rep], [f"{k} -> {v}" for k, v in rep.details["table"].items()], {}


def run_gsd(cfg):
    code = _need_code(build_instance(cfg), "gsd")
    if not code.complex.closed:
        raise ConfigError("gsd needs a closed instance (torus2d)")
    expected = 64 if cfg.untwisted else 22
    rep = verify.gsd_report(code, expected if code.family == "2d" else None)
    return [rep], [str(rep.details["dimension"])], {}


def run_dw(cfg):
    cx = build_instance(cfg)
    if hasattr(cx, "generators"):
        cx = cx.complex
    if not cx.closed:
        raise ConfigError("dw needs a closed instance (torus2d or torus3d)")
    rep = verify.dw_invariance(cx, N=cx.dim, target=1, seed=cfg.seed, twisted=not cfg.untwisted)
    return [rep], [f"Z before {rep.details['Z_before']}, after {rep.details['Z_after']}"], {}


def run_code_switch(cfg):
    code = _need_code(build_instance(cfg), "code-switch")
    reps = [verify.run_code_switch(code, seed=cfg.seed + k) for k in range(cfg.count)]
    good = sum(r.passed for r in reps)
    return reps, [f"fidelity 1 on {good}/{len(reps)} seeds"], {}


def run_dump_circuit(cfg):
    code = _need_code(build_instance(cfg), "dump-circuit")
    if cfg.op == "V":
        circuit = [{"gate": "CNOT", "colors": list(p)} for p in build_V(code).pairs]
        rep = verify.Report("dump_circuit", code.complex.name, True, {"op": "V", "layer": circuit})
        return [rep], [json.dumps(circuit, ensure_ascii=False)], {"circuit": circuit}
    W = build_W(code)
    gates = compile_to_gates(W, code)
    circuit = json.loads(gates_json(gates, code))
    rep = verify.Report("dump_circuit", code.complex.name, True, {"op": "W", "summary": gate_summary(gates, code)})
    return [rep], [json.dumps(circuit, ensure_ascii=False)], {"circuit": circuit}


# ----------------------------------------------------------------------
# the acceptance battery


def _c1(seed):
    out = []
    for size in (1, 2):
        out += run_logical_action(RunConfig("2d", size=size))[0]
    return out


def _c2(seed):
    return run_logical_action(RunConfig("3d", refinement=1))[0]


def _c3(seed):
    return run_logical_action(RunConfig("bilayer", size=1))[0]


def _c4(seed):
    out = []
    for cfg in (RunConfig("torus2d", size=2), RunConfig("2d", size=1), RunConfig("2d", size=2)):
        code = build_instance(cfg)
        rep = verify.check_emergent_symmetry(code)
        rep.passed = rep.passed and verify.table_matches(
            rep, {k: v for k, v in verify.EXPECTED_X_TABLE_2D.items() if k in rep.details["x_table"]},
            verify.EXPECTED_Z_TABLE_2D)
        out.append(rep)
    return out


def _c5(seed):
    return run_anyons(RunConfig("torus2d", size=2))[0]


def _c6(seed):
    return run_gsd(RunConfig("torus2d", size=2))[0] + run_gsd(RunConfig("torus2d", size=2, untwisted=True))[0]


def _c7(seed):
    return [verify.cochain_identities(1000, seed=seed)]


def _c8(seed):
    out = []
    for dims in ([1, 1, 1], [2, 1, 1]):
        out += run_dw(RunConfig("torus3d", dims=dims, seed=seed))[0]
    return out


def _c9(seed):
    out = []
    for cfg in (RunConfig("2d", size=1), RunConfig("2d", size=2), RunConfig("3d", refinement=1),
                RunConfig("3d", refinement=2), RunConfig("bilayer", size=1), RunConfig("torus2d", size=2)):
        out.append(verify.check_gate_compilation(build_instance(cfg), samples=10_000, seed=seed))
    return out


def _c10(seed):
    return run_code_switch(RunConfig("2d", size=1, seed=seed, count=100))[0]


CRITERIA = {
    "c1": ("logical T† on both triangles", _c1),
    "c2": ("logical √T on the tetrahedron", _c2),
    "c3": ("logical CS† on the bilayer", _c3),
    "c4": ("stabilizer conjugation table", _c4),
    "c5": ("anyon permutation", _c5),
    "c6": ("torus ground-state degeneracy", _c6),
    "c7": ("cochain identities", _c7),
    "c8": ("path-integral invariance", _c8),
    "c9": ("gate-compilation fidelity", _c9),
    "c10": ("code-switching magic state", _c10),
}


def _run_criterion(cid: str, seed: int) -> dict:
    name, fn = CRITERIA[cid]
    reps = fn(seed)
    return {"id": cid, "name": name, "passed": all(r.passed for r in reps),
            "reports": [r.to_json() for r in reps]}


def run_suite(cfg):
    ids = [e for e in cfg.experiments if e in CRITERIA] or list(CRITERIA)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_criterion, ids, [cfg.seed] * len(ids)))
    else:
        results = [_run_criterion(c, cfg.seed) for c in ids]
    reps = []
    for res in results:
        for r in res["reports"]:
            rep = verify.Report(r["experiment"], r["instance"], r["passed"], r["details"], r["witnesses"],
                                r["seconds"])
            reps.append(rep)
    manifest = [{"id": r["id"], "name": r["name"], "passed": r["passed"]} for r in results]
    lines = [f"{'PASS' if r['passed'] else 'FAIL'} {r['id']} {r['name']}" for r in results]
    return reps, lines, {"manifest": manifest}


RUNNERS = {
    "build": run_build,
    "check-stabilizers": run_check_stabilizers,
    "check-symmetry": run_check_symmetry,
    "logical-action": run_logical_action,
    "anyons": run_anyons,
    "gsd": run_gsd,
    "dw": run_dw,
    "code-switch": run_code_switch,
    "dump-circuit": run_dump_circuit,
    "suite": run_suite,
}


# ----------------------------------------------------------------------
# plumbing


def _name(obj) -> str:
    return obj.complex.name if hasattr(obj, "complex") else obj.name


def _report_json(cmd: str, cfg: RunConfig, reps, extra: dict) -> dict:
    items = []
    for r in reps:
        d = r.to_json()
        if not cfg.timings:
            d.pop("seconds", None)
        items.append(d)
    cfg_json = {k: v for k, v in asdict(cfg).items() if k not in ("out", "jobs", "timings")}
    return {"schema": SCHEMA, "command": cmd, "config": cfg_json, "passed": all(r.passed for r in reps),
            "reports": items, **extra}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cliffstab", description="Build twisted-gauge-theory codes and check "
                                "their transversal non-Clifford automorphisms exactly.")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        s = sub.add_parser(cmd)
        s.add_argument("--instance", choices=INSTANCES)
        s.add_argument("--size", type=int, help="triangle patch size or torus side length")
        s.add_argument("--refinement", type=int, help="tetrahedron refinement level")
        s.add_argument("--lattice", choices=("simplicial", "cubical"))
        s.add_argument("--dims", help="comma-separated torus periods, e.g. 2,1,1")
        s.add_argument("--seed", type=int)
        s.add_argument("--count", type=int, help="number of consecutive seeds (code-switch)")
        s.add_argument("--op", choices=("W", "V"))
        s.add_argument("--out", help="write the JSON report here")
        s.add_argument("--jobs", type=int, help="worker processes for suite")
        s.add_argument("--untwisted", action="store_true", default=None, help="drop the cup-product twist")
        s.add_argument("--timings", action="store_true", default=None, help="include wall-clock seconds")
        s.add_argument("--experiments", help="comma-separated criterion ids for suite (c1..c10)")
        s.add_argument("--config", help="RunConfig JSON file; its keys supersede flags")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    names = {f.name for f in fields(RunConfig)}
    for k in names:
        v = getattr(args, k, None)
        if v is None:
            continue
        if k == "dims":
            try:
                v = [int(x) for x in v.split(",")]
            except ValueError as exc:
                raise ConfigError(f"bad --dims {v!r}") from exc
        if k == "experiments":
            v = [x for x in v.split(",") if x]
        setattr(cfg, k, v)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        bad = set(data) - names
        if bad:
            raise ConfigError(f"unknown config keys: {sorted(bad)}")
        for k, v in data.items():
            setattr(cfg, k, v)
    return cfg.validate()


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
        reps, lines, extra = RUNNERS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report = _report_json(args.command, cfg, reps, extra)
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    for line in lines:
        print(line)
    passed = report["passed"]
    print("PASS" if passed else "FAIL")
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
        if not passed:
            wit = {"schema": SCHEMA, "witnesses": [w for r in report["reports"] for w in r["witnesses"]]}
            Path(cfg.out + ".witness.json").write_text(json.dumps(wit, sort_keys=True, indent=2) + "\n")
    elif not passed:
        for r in report["reports"]:
            for w in r["witnesses"]:
                print(json.dumps(w, sort_keys=True), file=sys.stderr)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
