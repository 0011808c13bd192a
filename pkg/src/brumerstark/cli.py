"""Command line driver: batch verification, one-off computations and golden files.

Exit codes: 0 success, 1 a case failed or goldens diverged, 2 invalid
configuration (diagnostic JSON on stderr), 3 internal error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import re
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import oracles
from .eisenstein import DirichletCharacter, eisenstein_qexp
from .numtheory import is_fundamental_discriminant, primerange
from .quadratic import ImagQuadField, form_class_group, prime_splitting, ray_class_group
from .serialize import dumps, encode
from .stickelberger import (
    AbelianFieldQ,
    check_drcond,
    check_integrality,
    compositum_field,
    quadratic_field,
    sinnott_kurihara_ideal,
    theta,
)
from .verify import THEOREMS, CaseError, VerificationCase, run_case

ORACLE_ENV = "BSTARK_ORACLE_DIR"
TASK_KEYS = {
    "theorem", "D", "d2", "S", "T", "T_sets", "p", "primes", "disc_max", "disc_min",
    "biquadratic", "split_max", "prime_index", "limit", "prime_bound",
}
CONFIG_KEYS = {"tasks", "output_dir", "oracle_dir", "jobs", "timings"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    tasks: list = field(default_factory=list)
    output_dir: str | None = None
    oracle_dir: str | None = None
    jobs: int = 1
    timings: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(
            tasks=list(data.get("tasks", [])),
            output_dir=data.get("output_dir"),
            oracle_dir=data.get("oracle_dir"),
            jobs=int(data.get("jobs", 1)),
            timings=bool(data.get("timings", False)),
        )
        if cfg.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        return cfg

    def cases(self) -> list[VerificationCase]:
        """Expand and validate every task before anything is computed."""
        out = []
        for i, task in enumerate(self.tasks):
            try:
                out.extend(expand_task(task))
            except (CaseError, ConfigError, TypeError, ValueError) as exc:
                raise ConfigError(f"task {i}: {exc}") from exc
        seen = {}
        for c in out:
            seen.setdefault(c.case_id, c)
        return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# task expansion


def _ints(x) -> list[int]:
    if x is None:
        return []
    if isinstance(x, int):
        return [x]
    if isinstance(x, str):
        return [int(t) for t in x.split(",") if t.strip()]
    return [int(t) for t in x]


def negative_fundamental_discriminants(dmax: int, dmin: int = 3) -> list[int]:
    return [-n for n in range(dmin, dmax + 1) if is_fundamental_discriminant(-n)]


def auto_T(H: AbelianFieldQ, avoid=()) -> tuple:
    """The smallest odd prime unramified in H, outside ``avoid``, satisfying the condition on T."""
    for ell in primerange(3, 10_000):
        if ell in avoid or H.is_ramified(ell):
            continue
        if check_drcond(H, [ell]).holds:
            return (ell,)
    raise ConfigError("no admissible T found")


def expand_task(task: dict) -> list[VerificationCase]:
    if not isinstance(task, dict):
        raise ConfigError("each task must be an object")
    unknown = set(task) - TASK_KEYS
    if unknown:
        raise ConfigError(f"unknown task keys: {sorted(unknown)}")
    thm = task.get("theorem")
    if thm not in THEOREMS:
        raise ConfigError(f"theorem must be one of {list(THEOREMS)}")
    if "D" in task:
        discs = _ints(task["D"])
    elif "disc_max" in task:
        discs = negative_fundamental_discriminants(int(task["disc_max"]), int(task.get("disc_min", 3)))
    else:
        raise ConfigError("a task needs D or disc_max")
    if "d2" in task:
        fields = [(d, int(task["d2"])) for d in discs]
    elif task.get("biquadratic"):
        fields = list(itertools.combinations(discs, 2))
    else:
        fields = [(d,) for d in discs]
    if "limit" in task:
        fields = fields[: int(task["limit"])]
    S = tuple(_ints(task.get("S")))
    ps = _ints(task.get("primes", task.get("p"))) or [None]
    if "T_sets" in task:
        t_sets = [tuple(_ints(t)) if t != "auto" else "auto" for t in task["T_sets"]]
    elif "T" in task:
        t_sets = ["auto"] if task["T"] == "auto" else [tuple(_ints(task["T"]))]
    else:
        raise ConfigError("a task needs T or T_sets")
    opts = {}
    if "prime_index" in task:
        opts["prime_index"] = int(task["prime_index"])
    if "prime_bound" in task:
        opts["prime_bound"] = int(task["prime_bound"])
    cases = []
    for f in fields:
        H = quadratic_field(f[0]) if len(f) == 1 else compositum_field(list(f))
        for p in ps:
            for t in t_sets:
                T = auto_T(H, set(S) | ({p} if p else set())) if t == "auto" else t
                if thm == "bs-unit" and "split_max" in task:
                    cases.extend(_split_cases(f[0], S, T, int(task["split_max"])))
                    continue
                cases.append(VerificationCase(thm, f[0], f[1] if len(f) == 2 else None, S, T, p, tuple(opts.items())))
    for c in cases:
        c.validate()
    return cases


def _split_cases(D: int, S, T, bound: int) -> list[VerificationCase]:
    K = ImagQuadField(D)
    out = []
    for q in primerange(2, bound + 1):
        if q in T or q in S or prime_splitting(K, q).kind != "split":
            continue
        for idx in (0, 1):
            out.append(VerificationCase("bs-unit", D, None, S, T, q, (("prime_index", idx),)))
    return out


# ---------------------------------------------------------------------------
# running


def _run_one(case: VerificationCase):
    rep = run_case(case)
    return rep.to_json(timings=False), rep.elapsed_ms


def _safe_name(case_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=,-]+", "_", case_id)


def run(config: RunConfig, stdout=None) -> int:
    """Run every case; write reports and a summary; return the exit code."""
    stdout = stdout or sys.stdout
    cases = config.cases()
    if config.jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_one, cases, chunksize=max(1, len(cases) // (4 * config.jobs))))
    else:
        results = [_run_one(c) for c in cases]
    summary = summarize([r for r, _ in results])
    if config.output_dir:
        out = Path(config.output_dir)
        (out / "reports").mkdir(parents=True, exist_ok=True)
        for (rep, ms), case in zip(results, cases):
            if config.timings:
                rep = dict(rep, elapsed_ms=str(ms))
            (out / "reports" / f"{_safe_name(case.case_id)}.json").write_text(dumps(rep))
        (out / "summary.json").write_text(dumps(summary))
        if config.timings:
            (out / "timings.json").write_text(dumps({c.case_id: ms for (_, ms), c in zip(results, cases)}))
    stdout.write(dumps(summary))
    return 1 if summary["fail"] != "0" else 0


def summarize(reports: list[dict]) -> dict:
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    by_theorem: dict = {}
    failed = []
    for r in reports:
        counts[r["status"]] += 1
        t = by_theorem.setdefault(r["theorem"], {"pass": 0, "fail": 0, "skipped": 0})
        t[r["status"]] += 1
        if r["status"] == "fail":
            failed.append(r["case_id"])
    return encode({"total": len(reports), **counts, "by_theorem": by_theorem, "failed_cases": sorted(failed)})


# ---------------------------------------------------------------------------
# compute


def _field_from_args(args) -> AbelianFieldQ:
    if args.d:
        ds = _ints(args.d)
        return quadratic_field(ds[0]) if len(ds) == 1 else compositum_field(ds)
    if args.conductor:
        return AbelianFieldQ(args.conductor, _ints(args.subgroup))
    raise ConfigError("give --d or --conductor")


def compute(args) -> dict:
    what = args.what
    T = _ints(args.T)
    if what == "theta":
        H = _field_from_args(args)
        th = theta(H, _ints(args.S), T)
        return {"field": H.to_json(), "theta": th.to_json(), "integral": check_integrality(th)}
    if what == "ks":
        H = _field_from_args(args)
        return {"field": H.to_json(), "ks": sinnott_kurihara_ideal(H, T, args.variant, args.p).to_json()}
    if what == "classgroup":
        return form_class_group(args.D).to_json()
    if what == "rayclass":
        return ray_class_group(ImagQuadField(args.D), T).to_json()
    if what == "qexp":
        psi = DirichletCharacter.kronecker(args.psi) if args.psi else None
        return eisenstein_qexp(args.k, psi, _ints(args.S)).to_json(args.terms)
    raise ConfigError(f"unknown computation {what!r}")


# ---------------------------------------------------------------------------
# oracle


def oracle_dir(explicit: str | None) -> Path:
    return Path(explicit or os.environ.get(ORACLE_ENV) or "oracles")


def oracle(command: str, directory: Path, module: str | None = None, force: bool = False, stdout=None) -> int:
    stdout = stdout or sys.stdout
    mods = [module] if module else oracles.modules()
    for m in mods:
        if m not in oracles.REGISTRY:
            raise ConfigError(f"unknown oracle module {m!r}")
    if command == "check" and not directory.is_dir():
        raise ConfigError(f"oracle directory {directory} does not exist")
    divergent = []
    for m in mods:
        new = oracles.build(m)
        path = directory / f"{m}.json"
        old = json.loads(path.read_text()) if path.exists() else None
        if command == "check":
            if old is None:
                divergent.append(f"{m}:<missing file>")
                continue
            for key in sorted(set(old) | set(new)):
                if old.get(key) != new.get(key):
                    divergent.append(f"{m}:{key}")
        else:
            changed = [k for k in sorted(new) if old is not None and k in old and old[k] != new[k]]
            divergent.extend(f"{m}:{k}" for k in changed)
            if changed and not force:
                continue
            directory.mkdir(parents=True, exist_ok=True)
            path.write_text(dumps(new))
    stdout.write(dumps({"command": command, "directory": str(directory), "modules": mods, "divergent": divergent}))
    return 1 if divergent and not (command == "rebuild" and force) else 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brumerstark", description="Brumer-Stark and Kurihara verification on explicit CM fields")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification cases")
    v.add_argument("theorem", nargs="?", choices=THEOREMS)
    v.add_argument("--config", help="JSON run configuration")
    v.add_argument("--D", "--d1", dest="D", type=int)
    v.add_argument("--d2", type=int)
    v.add_argument("--disc-max", type=int)
    v.add_argument("--disc-min", type=int)
    v.add_argument("--biquadratic", action="store_true")
    v.add_argument("--limit", type=int)
    v.add_argument("--S", help="comma-separated finite primes")
    v.add_argument("--T", action="append", help="comma-separated T set, or 'auto'; repeat for several sets")
    v.add_argument("--p", help="prime or comma-separated primes")
    v.add_argument("--prime-index", type=int)
    v.add_argument("--split-max", type=int)
    v.add_argument("--prime-bound", type=int)
    v.add_argument("--out", dest="output_dir")
    v.add_argument("--jobs", type=int)
    v.add_argument("--timings", action="store_true")

    c = sub.add_parser("compute", help="compute a single object and print it as JSON")
    c.add_argument("what", choices=["theta", "ks", "classgroup", "rayclass", "qexp"])
    c.add_argument("--d", help="comma-separated fundamental discriminants of the quadratic subfields")
    c.add_argument("--conductor", type=int)
    c.add_argument("--subgroup", help="comma-separated residues generating the fixing subgroup")
    c.add_argument("--D", type=int)
    c.add_argument("--S")
    c.add_argument("--T")
    c.add_argument("--variant", default="integral", choices=["integral", "p_modified"])
    c.add_argument("--p", type=int)
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--psi", type=int, help="discriminant of a quadratic nebentypus")
    c.add_argument("--terms", type=int, default=20)

    o = sub.add_parser("oracle", help="rebuild or check golden files")
    o.add_argument("action", choices=["rebuild", "check"])
    o.add_argument("--module")
    o.add_argument("--oracle-dir")
    o.add_argument("--force", action="store_true", help="overwrite golden values that changed")
    return ap


def _config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    cfg = RunConfig.from_dict(data)
    if args.theorem:
        task = {"theorem": args.theorem}
        for key in ("D", "d2", "disc_max", "disc_min", "limit", "prime_index", "split_max", "prime_bound"):
            val = getattr(args, key)
            if val is not None:
                task[key] = val
        if args.biquadratic:
            task["biquadratic"] = True
        if args.S:
            task["S"] = args.S
        if args.p:
            task["primes"] = args.p
        if args.T:
            task["T_sets"] = ["auto" if t == "auto" else t for t in args.T]
        cfg.tasks.append(task)
    if not cfg.tasks:
        raise ConfigError("nothing to verify: give a theorem or a config with tasks")
    if args.output_dir:
        cfg.output_dir = args.output_dir
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if args.timings:
        cfg.timings = True
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "verify":
            return run(_config_from_args(args))
        if args.command == "compute":
            try:
                result = compute(args)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            sys.stdout.write(dumps(result))
            return 0
        return oracle(args.action, oracle_dir(args.oracle_dir), args.module, args.force)
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": "invalid_config", "message": str(exc)}) + "\n")
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort handler maps to exit 3
        sys.stderr.write(json.dumps({"error": "internal", "message": repr(exc), "trace": traceback.format_exc()}) + "\n")
        return 3


__all__ = ["ConfigError", "RunConfig", "auto_T", "build_parser", "compute", "expand_task", "main", "oracle", "run", "summarize"]
