"""Batch front-end: build catalog structures from JSON configs, run the
verification suite, emit machine-readable reports and golden files.

Exit codes: 0 all checks passed; 1 at least one check failed; 2 malformed
config; 3 builder precondition violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from typing import Dict, List, Optional, Sequence

from .bilie import (BiLieStructure, BuildError, CheckResult, Operator,
                    modified_bracket, times)
from .class1 import (catalog, compact_restriction_sl, gl_torsion_equality,
                     matrix_crosscheck_so, verify_class1, wno_class1)
from .class2 import (AutomorphismType, e7_example, make_split,
                     parabolic_wno, verify_class2, zm_wno)
from .diagrams import extract_admissible_pair
from .liealg import chevalley_algebra
from .rootsys import from_tag
from .scalars import Q

SCHEMA = "job-v1"
BUILDERS = (
    "ex12.12", "ex12.13", "ex12.14", "ex12.15", "ex12.16", "ex12.17",
    "ex12.18", "class2.parabolic", "class2.zm", "class2.e7",
    "so.crosscheck", "su.compact", "gl.torsion",
)
_ALLOWED_KEYS = {"schema", "name", "algebra", "builder", "times", "params",
                 "checks", "fault", "output"}
_FAULT_KINDS = {"flip_structure_constant", "flip_eigenvalue"}


class ConfigError(ValueError):
    pass


def _scalar(x, what: str) -> Q:
    if isinstance(x, float):
        raise ConfigError(f"{what} must be integers or exact strings "
                          f"like '3/4' or '1/2+1/3*i', not floats")
    try:
        return Q.of(x)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad scalar {x!r} in {what}: {exc}")


def _parse_times(raw) -> List[Q]:
    if not isinstance(raw, list):
        raise ConfigError("'times' must be a list")
    return [_scalar(x, "times") for x in raw]


def validate_config(cfg: dict) -> dict:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - _ALLOWED_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    if cfg.get("schema", SCHEMA) != SCHEMA:
        raise ConfigError(f"unsupported schema {cfg.get('schema')!r}")
    builder = cfg.get("builder")
    if builder not in BUILDERS:
        raise ConfigError(f"unknown builder {builder!r}; "
                          f"expected one of {BUILDERS}")
    if builder.startswith("ex") or builder in ("class2.parabolic",
                                               "class2.zm"):
        if not isinstance(cfg.get("algebra"), str):
            raise ConfigError("'algebra' tag is required for this builder")
    fault = cfg.get("fault")
    if fault is not None:
        if (not isinstance(fault, dict)
                or fault.get("kind") not in _FAULT_KINDS
                or not isinstance(fault.get("index"), int)):
            raise ConfigError("fault must be {'kind': ..., 'index': int}")
    params = cfg.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("'params' must be an object")
    return cfg


def _inject_fault(s: BiLieStructure, fault: dict,
                  checks_fn) -> List[CheckResult]:
    """Re-run the verification on a deliberately perturbed copy."""
    kind = fault["kind"]
    idx = fault["index"]
    if kind == "flip_structure_constant":
        entries = sorted(
            (i, j, k) for i, j, v in s.second_bracket.entries() for k in v
        )
        if not entries:
            raise BuildError("no nonzero structure constants to flip")
        i, j, k = entries[idx % len(entries)]
        table = s.second_bracket.copy()
        table.rows[i][j] = dict(table.rows[i][j])
        table.rows[i][j][k] = -table.rows[i][j][k]
        s2 = BiLieStructure(s.algebra, table, s.wno, s.primitive)
        return checks_fn(s2)
    # flip_eigenvalue: negate one nonzero diagonal root-space eigenvalue
    alg = s.algebra
    diag = [b for b in range(alg.dim)
            if alg.basis_root(b) is not None and s.wno.mat[b][b]]
    if not diag:
        raise BuildError("no nonzero eigenvalues to flip")
    b = diag[idx % len(diag)]
    mat = [row[:] for row in s.wno.mat]
    mat[b][b] = -mat[b][b]
    w2 = Operator(alg, mat)
    s2 = BiLieStructure(alg, modified_bracket(w2), w2, s.primitive)
    return checks_fn(s2)


def _times_report_json(s: BiLieStructure) -> Optional[dict]:
    try:
        return times(s).to_json()
    except Exception as exc:                     # report, never crash a job
        return {"error": str(exc)}


def _diagram_json(s: BiLieStructure) -> Optional[dict]:
    try:
        _, d = extract_admissible_pair(s)
        return d.to_json()
    except Exception as exc:
        return {"error": str(exc)}


def _arithmetic_stats(s: BiLieStructure) -> dict:
    bits = max(s.wno.max_bit_size(), s.primitive.max_bit_size())
    for i, j, v in s.second_bracket.entries():
        for c in v.values():
            bits = max(bits, c.bit_size())
    return {"max_numerator_bits": bits}


def run(cfg: dict) -> dict:
    """Execute one job config; returns the report dict."""
    cfg = validate_config(cfg)
    builder = cfg["builder"]
    params = dict(cfg.get("params", {}))
    ts = _parse_times(cfg.get("times", []))
    t_start = time.time()
    checks: List[CheckResult] = []
    structure: Optional[BiLieStructure] = None
    extra: Dict[str, object] = {}

    if builder.startswith("ex12."):
        algebra = chevalley_algebra(from_tag(cfg["algebra"]))
        kwargs = {}
        if "a" in params:
            kwargs["a"] = _scalar(params["a"], "params.a")
        if "s" in params:
            kwargs["s"] = [int(x) for x in params["s"]]
        if "s_vector" in params:
            kwargs["s_vector"] = {int(k): _scalar(v, "params.s_vector")
                                  for k, v in enumerate(params["s_vector"])}
        q = catalog(builder[2:], algebra, ts, **kwargs)
        structure = wno_class1(q, verify=False)

        def checks_fn(s):
            return verify_class1(s, q)

    elif builder == "class2.parabolic":
        algebra = chevalley_algebra(from_tag(cfg["algebra"]))
        b0 = [int(x) for x in params.get("b0", [])]
        side1 = tuple(int(x) for x in params.get("side1", (0,)))
        r0 = algebra.root_system.levi_subset(b0)
        if not r0.members:
            side1 = ()
        split = make_split(algebra, r0, side1,
                           params.get("centre_sides"))
        if len(ts) != 2:
            raise BuildError("parabolic builder needs exactly 2 times")
        structure, pre = parabolic_wno(ts[0], ts[1], split, b0,
                                       verify=False)
        checks.extend(pre)

        def checks_fn(s):
            return verify_class2(s, split, ts[0], ts[1])

    elif builder == "class2.zm":
        algebra = chevalley_algebra(from_tag(cfg["algebra"]))
        if "s" not in params:
            raise ConfigError("class2.zm needs params.s (the type vector)")
        svec = tuple(int(x) for x in params["s"])
        atype = AutomorphismType(algebra.root_system, svec)
        r0 = algebra.root_system.subset(atype.fixed_roots())
        side1 = tuple(int(x) for x in params.get("side1", ()))
        split = make_split(algebra, r0, side1, params.get("centre_sides"))
        if len(ts) != 2:
            raise BuildError("zm builder needs exactly 2 times")
        structure, pre = zm_wno(ts[0], ts[1], atype, split, verify=False)
        checks.extend(pre)

        def checks_fn(s):
            return verify_class2(s, split, ts[0], ts[1])

    elif builder == "class2.e7":
        if len(ts) != 2:
            raise BuildError("e7 builder needs exactly 2 times")
        x = _scalar(params.get("x", 0), "params.x")
        side1 = tuple(int(v) for v in params.get("side1", (0,)))
        out = e7_example(x, ts[0], ts[1], side1, verify=False)
        structure = out["structure"]
        checks.extend(out["checks"])
        split = out["split"]

        def checks_fn(s):
            return verify_class2(s, split, ts[0], ts[1])

    elif builder in ("so.crosscheck", "su.compact", "gl.torsion"):
        if cfg.get("fault"):
            raise ConfigError("fault injection applies to the bi-Lie "
                              "builders, not the matrix cross-checks")
        if "diag" not in params:
            raise ConfigError(f"{builder} needs params.diag")
        diag = [_scalar(v, "params.diag") for v in params["diag"]]
        if builder == "so.crosscheck":
            out = matrix_crosscheck_so(diag, len(diag))
            extra["time_hits"] = out["time_hits"]
            extra["regular"] = out["regular"]
        elif builder == "su.compact":
            out = compact_restriction_sl(diag, len(diag) - 1)
        else:
            out = gl_torsion_equality(diag, len(diag) - 1)
        checks.extend(out["checks"])
        structure = out.get("structure")
        checks_fn = None
    else:                                          # pragma: no cover
        raise ConfigError(f"unhandled builder {builder}")

    if structure is not None and checks_fn is not None:
        def guarded(s):
            # verification of a broken structure may abort mid-way (e.g.
            # irrational times); that is a failing check, not a crash
            try:
                return checks_fn(s)
            except (BuildError, ValueError) as exc:
                return [CheckResult("verification", False, str(exc))]

        fault = cfg.get("fault")
        if fault:
            checks.extend(_inject_fault(structure, fault, guarded))
        else:
            checks.extend(guarded(structure))

    wanted = cfg.get("checks")
    if wanted and wanted != ["all"]:
        missing = set(wanted) - {c.name for c in checks}
        if missing:
            raise ConfigError(f"unknown checks requested: {sorted(missing)}")
        checks = [c for c in checks if c.name in wanted]

    report = {
        "schema": "report-v1",
        "config": {k: cfg[k] for k in sorted(cfg) if k != "output"},
        "checks": [
            {"name": c.name, "pass": c.passed,
             **({"witness": c.witness} if c.witness else {})}
            for c in checks
        ],
        "all_passed": all(c.passed for c in checks),
    }
    if structure is not None and structure.algebra.root_system is not None:
        report["times_report"] = _times_report_json(structure)
        report["diagram"] = _diagram_json(structure)
        report["arithmetic"] = _arithmetic_stats(structure)
    report.update(extra)
    report["timing"] = {"seconds": round(time.time() - t_start, 3)}
    return report


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def report_json(report: dict, with_timing: bool = True) -> str:
    data = report if with_timing else strip_timing(report)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _golden_name(cfg: dict) -> str:
    if cfg.get("name"):
        return str(cfg["name"])
    alg = cfg.get("algebra", "na")
    return f"{cfg['builder'].replace('.', '_')}_{alg}"


def run_job_with_golden(cfg: dict, golden_dir: Optional[str],
                        emit_structure: bool) -> dict:
    report = run(cfg)
    if golden_dir:
        path = os.path.join(golden_dir, _golden_name(cfg) + ".json")
        body = report_json(report, with_timing=False)
        if os.path.exists(path):
            with open(path) as f:
                if f.read() != body:
                    report["checks"].append(
                        {"name": "golden_match", "pass": False,
                         "witness": path})
                    report["all_passed"] = False
                else:
                    report["checks"].append({"name": "golden_match",
                                             "pass": True})
        else:
            os.makedirs(golden_dir, exist_ok=True)
            write_atomic(path, body)
            report["checks"].append({"name": "golden_written", "pass": True})
    if emit_structure and cfg.get("algebra"):
        alg = chevalley_algebra(from_tag(cfg["algebra"]))
        report["structure_constants"] = alg.structure_dump()
    out = cfg.get("output")
    if out:
        write_atomic(out, report_json(report))
    return report


def verify_all(manifest: Sequence[dict], golden_dir: Optional[str] = None,
               jobs: int = 1) -> dict:
    """Run a list of job configs and aggregate the outcome."""
    reports = []
    if jobs > 1 and len(manifest) > 1:
        import concurrent.futures as cf
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(run_job_with_golden, cfg, golden_dir, False)
                    for cfg in manifest]
            reports = [f.result() for f in futs]
    else:
        for cfg in manifest:
            reports.append(run_job_with_golden(cfg, golden_dir, False))
    failures = []
    for cfg, rep in zip(manifest, reports):
        if not rep["all_passed"]:
            bad = [c for c in rep["checks"] if not c["pass"]]
            failures.append({"name": _golden_name(cfg), "failed": bad})
    return {
        "schema": "summary-v1",
        "total": len(manifest),
        "passed": len(manifest) - len(failures),
        "failures": failures,
        "reports": reports,
    }


def _print_report(report: dict) -> None:
    for c in report["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        extra = f"  [{c['witness']}]" if c.get("witness") else ""
        print(f"  {mark}  {c['name']}{extra}")
    print("all passed" if report["all_passed"] else "FAILURES PRESENT")


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="liepair",
        description="build and verify compatible Lie-bracket pairs")
    sub = ap.add_subparsers(dest="cmd", required=True)

    runp = sub.add_parser("run", help="run one job config")
    runp.add_argument("--config", required=True)
    runp.add_argument("--golden", default=None)
    runp.add_argument("--check", default=None,
                      help="comma-separated check names")
    runp.add_argument("--emit-structure", action="store_true")
    runp.add_argument("--output", default=None)

    va = sub.add_parser("verify-all", help="run a manifest of jobs")
    va.add_argument("--manifest", required=True)
    va.add_argument("--golden", default=None)
    va.add_argument("--jobs", type=int, default=1)
    va.add_argument("--output", default=None)

    c1 = sub.add_parser("class1", help="run a catalog entry")
    c1.add_argument("entry", help="e.g. ex12.13")
    c1.add_argument("--algebra", default=None)
    c1.add_argument("--rank", type=int, default=None,
                    help="rank shortcut; the family is implied by the entry")
    c1.add_argument("--times", required=True)
    c1.add_argument("--a", default=None)
    c1.add_argument("--output", default=None)

    c2 = sub.add_parser("class2", help="run a Class II builder")
    c2.add_argument("which", choices=["parabolic", "zm", "e7"])
    c2.add_argument("--type", dest="algebra", default="E7")
    c2.add_argument("--b0", default="")
    c2.add_argument("--s", default=None)
    c2.add_argument("--side1", default="0")
    c2.add_argument("--x", default="0")
    c2.add_argument("--times", required=True)
    c2.add_argument("--output", default=None)

    cc = sub.add_parser("crosscheck", help="matrix-model cross-checks")
    cc.add_argument("which", choices=["so", "su", "gl"])
    cc.add_argument("--diag", required=True)
    cc.add_argument("--output", default=None)

    args = ap.parse_args(argv)

    try:
        if args.cmd == "run":
            with open(args.config) as f:
                cfg = json.load(f)
            if args.check:
                cfg["checks"] = args.check.split(",")
            if args.output:
                cfg["output"] = args.output
            report = run_job_with_golden(cfg, args.golden,
                                         args.emit_structure)
            _print_report(report)
            return 0 if report["all_passed"] else 1
        if args.cmd == "verify-all":
            with open(args.manifest) as f:
                data = json.load(f)
            manifest = data["jobs"] if isinstance(data, dict) else data
            for cfg in manifest:
                validate_config(cfg)
            summary = verify_all(manifest, args.golden, args.jobs)
            if args.output:
                write_atomic(args.output,
                             json.dumps(summary, indent=2, sort_keys=True))
            print(f"{summary['passed']}/{summary['total']} jobs passed")
            for f_ in summary["failures"]:
                print(f"  FAIL {f_['name']}: "
                      f"{[c['name'] for c in f_['failed']]}")
            return 0 if not summary["failures"] else 1
        if args.cmd == "class1":
            entry = args.entry[2:] if args.entry.startswith("ex") else args.entry
            algebra_tag = args.algebra
            if algebra_tag is None:
                fam = {"12.13": "B", "12.14": "D", "12.15": "C",
                       "12.16": "A", "12.17": "A", "12.18": "B"}.get(entry)
                if fam is None or args.rank is None:
                    raise ConfigError("give --algebra (or --rank for the "
                                      "single-family entries)")
                algebra_tag = f"{fam}{args.rank}"
            cfg = {"schema": SCHEMA, "builder": f"ex{entry}",
                   "algebra": algebra_tag,
                   "times": args.times.split(","), "params": {}}
            if args.a is not None:
                cfg["params"]["a"] = args.a
            if args.output:
                cfg["output"] = args.output
            report = run_job_with_golden(cfg, None, False)
            _print_report(report)
            return 0 if report["all_passed"] else 1
        if args.cmd == "class2":
            params: Dict[str, object] = {}
            if args.which == "parabolic":
                params["b0"] = [int(x) - 1 for x in args.b0.split(",") if x]
            if args.which == "zm":
                params["s"] = [int(x) for x in args.s.split(",")]
            if args.which == "e7":
                params["x"] = args.x
            params["side1"] = [int(x) for x in args.side1.split(",") if x]
            cfg = {"schema": SCHEMA, "builder": f"class2.{args.which}",
                   "algebra": args.algebra, "times": args.times.split(","),
                   "params": params}
            if args.output:
                cfg["output"] = args.output
            report = run_job_with_golden(cfg, None, False)
            _print_report(report)
            return 0 if report["all_passed"] else 1
        if args.cmd == "crosscheck":
            builder = {"so": "so.crosscheck", "su": "su.compact",
                       "gl": "gl.torsion"}[args.which]
            cfg = {"schema": SCHEMA, "builder": builder,
                   "params": {"diag": args.diag.split(",")}}
            if args.output:
                cfg["output"] = args.output
            report = run_job_with_golden(cfg, None, False)
            _print_report(report)
            return 0 if report["all_passed"] else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BuildError as exc:
        print(f"builder precondition failed: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
