"""Command-line frontend.

Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage or script
parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import DEFAULT_BUDGET
from .errors import BadIndex, BadParams, BudgetExceeded, FormatError, MbrError
from .formats import (
    ReportRecord,
    format_symbols,
    parse_symbols,
    profile_csv,
    read_content,
    write_content,
)
from .graph_code import (
    CAUCHY,
    VANDERMONDE,
    GraphCode,
    NodeContent,
    gc_build,
    gc_helper_unit,
    gc_reconstruct,
    gc_repair,
    graph_from_edges,
    parse_edges,
)
from .pm_code import pm_build, pm_reconstruct, pm_repair, pm_repair_helper
from .security import (
    SecureWrap,
    audit,
    bounds_report,
    degradation_profile,
    encode,
    secure_wrap,
)
from .sim import Adversary, DssState, dump_log, revealed_value

log = logging.getLogger("mbrsec")

REPLACEMENT_DEMO = """\
# Node 4 fails, a newcomer replaces it, Eve reads the newcomer.
code graph n=4 k=2 d=3 q=13 kind=vandermonde points=1,3,5,7,9,11 edges=1-4,2-4,1-2,1-3,3-4,2-3
file 1 2 3 4 5
fail 4
repair 4
eavesdrop 4
report
collect 1 2
"""


class ScriptError(Exception):
    pass


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise BadParams(f"expected comma-separated integers, got {text!r}") from None


@dataclass
class RunConfig:
    family: str = "graph"
    n: int = 4
    k: int = 2
    d: int = 3
    q: int = 13
    kind: str = CAUCHY
    points: list[int] | None = None
    ys: list[int] | None = None
    edges: str | None = None
    lam: int | None = None
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.family not in ("graph", "pm"):
            raise BadParams(f"family must be graph or pm, got {self.family!r}")
        if self.kind not in (CAUCHY, VANDERMONDE):
            raise BadParams(f"kind must be cauchy or vandermonde, got {self.kind!r}")
        if not 1 <= self.k <= self.d <= self.n - 1:
            raise BadParams(f"need 1 <= k <= d <= n-1, got n={self.n} k={self.k} d={self.d}")
        if self.lam is not None and not 0 <= self.lam < self.k:
            raise BadParams(f"need 0 <= lambda < k, got {self.lam}")
        if self.budget < 1:
            raise BadParams("budget must be positive")

    def build(self):
        self.validate()
        if self.family == "graph":
            graph = graph_from_edges(parse_edges(self.edges), self.n) if self.edges else None
            code = gc_build(self.n, self.k, self.d, self.q, self.kind, graph, self.points, self.ys)
        else:
            code = pm_build(self.n, self.k, self.d, self.q, self.kind, self.points, self.ys, seed=self.seed)
        return secure_wrap(code, self.lam) if self.lam is not None else code

    @classmethod
    def from_args(cls, a) -> RunConfig:
        env = os.environ.get("DSS_BUDGET")
        budget = a.budget if a.budget is not None else int(env) if env else DEFAULT_BUDGET
        return cls(
            a.family, a.n, a.k, a.d, a.q, a.kind, _ints(a.points), _ints(a.ys), a.edges, a.lam, a.seed, budget
        )

    def apply(self, tokens: list[str]) -> None:
        """Update from ``key=value`` tokens of a script ``code`` line."""
        if tokens and "=" not in tokens[0]:
            self.family = tokens.pop(0)
        for tok in tokens:
            key, _, val = tok.partition("=")
            if key in ("n", "k", "d", "q", "seed", "budget"):
                setattr(self, key, int(val))
            elif key in ("lambda", "lam"):
                self.lam = int(val)
            elif key == "kind":
                self.kind = val
            elif key in ("points", "ys"):
                setattr(self, key, _ints(val))
            elif key == "edges":
                self.edges = val
            else:
                raise ScriptError(f"unknown code option {key!r}")


def _base(code):
    return code.base if isinstance(code, SecureWrap) else code


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def manifest(code) -> dict:
    base = _base(code)
    d = {
        "family": base.family,
        "n": base.n,
        "k": base.k,
        "d": base.d,
        "q": base.q,
        "kind": base.kind,
        "M": base.M,
        "alpha": base.d,
        "beta": 1,
    }
    if isinstance(base, GraphCode):
        d["edges"] = [list(e) for e in base.graph.edges]
        d["placement"] = {str(v): list(p) for v, p in base.placement.items()}
        d["matrix"] = base.g.tolist()
    else:
        d["psi"] = base.psi.tolist()
        d["index"] = [list(x) for x in base.index.elements]
        d["verified"] = base.verified
    if isinstance(code, SecureWrap):
        d.update({"lambda": code.lam, "R": code.R, "secret_size": code.secret_size})
    return d


def cmd_build(cfg: RunConfig, a) -> int:
    _emit(json.dumps(manifest(cfg.build()), indent=2), a.out)
    return 0


def _node_path(directory: Path, v: int) -> Path:
    return directory / f"node_{v}.dssc"


def cmd_encode(cfg: RunConfig, a) -> int:
    code = cfg.build()
    base = _base(code)
    text = Path(a.input).read_text() if a.input != "-" else sys.stdin.read()
    values, _ = parse_symbols(text, base.q)
    if isinstance(code, SecureWrap):
        contents = code.encode(values, seed=cfg.seed)
    else:
        contents = encode(base, values)
    out = Path(a.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for v, c in enumerate(contents, 1):
        vals = c.values if isinstance(c, NodeContent) else c
        write_content(_node_path(out, v), base.q, vals)
    log.info("wrote %d node files to %s", len(contents), out)
    return 0


def _node_id(path: str) -> int:
    m = re.search(r"node_(\d+)", Path(path).name)
    if not m:
        raise FormatError(f"cannot infer node id from {path!r}; expected node_<id>.dssc")
    return int(m.group(1))


def cmd_reconstruct(cfg: RunConfig, a) -> int:
    code = cfg.build()
    base = _base(code)
    contents = {_node_id(p): read_content(Path(p), base.q)[1] for p in a.nodes}
    if isinstance(base, GraphCode):
        for v in contents:
            if v not in base.placement:
                raise BadIndex(f"node {v} outside [1, {base.n}]")
        file = gc_reconstruct(base, [NodeContent(v, base.placement[v], tuple(c)) for v, c in contents.items()])
    else:
        file = pm_reconstruct(base, contents)
    if isinstance(code, SecureWrap):
        file = code.extract_secret(file)
    _emit(format_symbols(file), a.out)
    return 0


def cmd_repair(cfg: RunConfig, a) -> int:
    code = cfg.build()
    base = _base(code)
    directory = Path(a.dir)
    failed = a.failed
    if isinstance(base, GraphCode):
        if not 1 <= failed <= base.n:
            raise BadIndex(f"node {failed} outside [1, {base.n}]")
        helpers = _ints(a.helpers) or base.neighbors(failed)
        sent = {}
        for h in helpers:
            _, vals = read_content(_node_path(directory, h), base.q)
            sent[h] = gc_helper_unit(base, NodeContent(h, base.placement[h], tuple(vals)), failed)
        repaired = list(gc_repair(base, failed, sent).values)
    else:
        helpers = _ints(a.helpers) or [v for v in range(1, base.n + 1) if v != failed][: base.d]
        sent = {
            h: pm_repair_helper(base, h, failed, read_content(_node_path(directory, h), base.q)[1])
            for h in helpers
        }
        repaired = pm_repair(base, failed, sent)
    target = Path(a.out) if a.out else _node_path(directory, failed)
    write_content(target, base.q, repaired)
    log.info("repaired node %d from helpers %s (1 unit each)", failed, helpers)
    return 0


def _record(code, ell: int, rep, extra: dict | None = None) -> ReportRecord:
    base = _base(code)
    wit = None
    if rep.witness is not None:
        wit = {"coefficients": list(rep.witness.coefficients), "support": list(rep.witness.support)}
    return ReportRecord(
        base.family, base.n, base.k, base.d, base.q, base.kind, ell,
        rep.min_distance, rep.block_level, wit, list(rep.nodes), extra or {},
    )


def cmd_audit(cfg: RunConfig, a) -> int:
    code = cfg.build()
    res = audit(code, a.ell, a.mode, budget=cfg.budget, samples=a.samples, seed=cfg.seed, skip_over_budget=True)
    extra = {
        "mode": res.mode,
        "checked": res.checked,
        "total": res.total,
        "partial": bool(res.skipped),
        "full_reconstruction": res.worst.full_reconstruction,
    }
    if isinstance(code, SecureWrap):
        extra["secret_size"] = code.secret_size
        extra["perfectly_secure"] = all(r.perfectly_secure for r in res.reports)
    if res.skipped:
        extra["skipped"] = [list(s) for s in res.skipped]
    _emit(_record(code, a.ell, res.worst, extra).to_json(), a.out)
    if res.skipped:
        _error(BudgetExceeded(f"{len(res.skipped)} subsets exceeded the enumeration budget"))
        return 1
    return 0


def cmd_bounds(a) -> int:
    alpha = a.alpha if a.alpha is not None else a.d
    rep = bounds_report(a.n, a.k, a.d, alpha, a.beta, a.ell)
    _emit(json.dumps(rep.__dict__, indent=2), a.out)
    return 0


def cmd_profile(cfg: RunConfig, a) -> int:
    code = cfg.build()
    rows = degradation_profile(code, a.ell_max, budget=cfg.budget)
    if a.format == "csv":
        text = profile_csv(rows)
    else:
        base = _base(code)
        doc = {
            "family": base.family, "n": base.n, "k": base.k, "d": base.d, "q": base.q, "kind": base.kind,
            "M": base.M,
            "rows": [r.__dict__ for r in rows],
        }
        if isinstance(code, SecureWrap):
            doc.update({"lambda": code.lam, "secret_size": code.secret_size})
        text = json.dumps(doc, indent=2)
    _emit(text, a.out)
    return 0


def run_script(text: str, cfg: RunConfig) -> tuple[DssState, Adversary, list]:
    """Parse and execute a simulation script; returns state, adversary and reports."""
    lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((n, shlex.split(line)))
    data = secret = None
    body = []
    for n, toks in lines:
        cmd, args = toks[0], toks[1:]
        try:
            if cmd == "code":
                cfg.apply(args)
            elif cmd == "file":
                data = [int(x) for x in args]
            elif cmd == "secret":
                secret = [int(x) for x in args]
            elif cmd in ("fail", "repair", "collect", "eavesdrop", "report"):
                body.append((n, cmd, args))
            else:
                raise ScriptError(f"unknown command {cmd!r}")
        except ValueError as e:
            raise ScriptError(f"line {n}: {e}") from None
    code = cfg.build()
    base = _base(code)
    if isinstance(code, SecureWrap):
        state = DssState.create(code, secret=secret or [0] * code.secret_size, seed=cfg.seed)
    else:
        state = DssState.create(code, file=data or [0] * base.M, seed=cfg.seed)
    adv = Adversary()
    reports = []
    for n, cmd, args in body:
        try:
            nums = [int(x) for x in args if x != "helpers"]
        except ValueError:
            raise ScriptError(f"line {n}: expected node ids") from None
        if cmd in ("fail", "repair", "eavesdrop") and not nums:
            raise ScriptError(f"line {n}: {cmd} needs a node id")
        if cmd == "fail":
            state.fail(nums[0])
        elif cmd == "repair":
            state.repair(nums[0], nums[1:] or None)
        elif cmd == "collect":
            got = state.collect(nums)
            if got != state.file:
                raise MbrError(f"collect at line {n} returned a different file")
        elif cmd == "eavesdrop":
            state.eavesdrop(adv, nums[0])
        elif cmd == "report":
            reports.append(state.report(adv, cfg.budget))
    return state, adv, reports


def cmd_simulate(cfg: RunConfig, a) -> int:
    if a.demo:
        text = REPLACEMENT_DEMO
    elif a.script:
        text = Path(a.script).read_text()
    else:
        raise BadParams("give a script path or --demo")
    try:
        state, adv, reports = run_script(text, cfg)
    except ScriptError as e:
        print(json.dumps({"error": "ScriptError", "message": str(e)}), file=sys.stderr)
        return 2
    final = state.report(adv, cfg.budget)
    ell = len(adv.observed)
    extra = {"revealed_value": revealed_value(final, adv), "events": len(state.log)}
    if state.wrap is not None:
        extra["perfectly_secure"] = final.perfectly_secure
    if a.log:
        Path(a.log).write_text(dump_log(state.log))
    else:
        sys.stderr.write(dump_log(state.log))
    _emit(_record(state.wrap or state.code, ell, final, extra).to_json(), a.out)
    return 0


def _code_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["graph", "pm"], default="graph")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--q", type=int, default=13)
    p.add_argument("--kind", choices=[CAUCHY, VANDERMONDE], default=CAUCHY)
    p.add_argument("--points", help="comma-separated evaluation (Vandermonde) or x (Cauchy) points")
    p.add_argument("--ys", help="comma-separated Cauchy y points")
    p.add_argument("--edges", help="custom graph edge order, e.g. 1-2,1-3,...")
    p.add_argument("--lambda", dest="lam", type=int, help="wrap with this perfect-secrecy threshold")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help="enumeration budget (default: $DSS_BUDGET or 10^7)")
    p.add_argument("--out", help="output path (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mbrsec", description="Block-security toolkit for MBR regenerating codes")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    _code_flags(sub.add_parser("build", help="emit a code manifest"))

    p = sub.add_parser("encode", help="encode a symbol file into node files")
    _code_flags(p)
    p.add_argument("--input", required=True, help="symbols, one integer per line ('-' for stdin)")

    p = sub.add_parser("reconstruct", help="recover the file from k node files")
    _code_flags(p)
    p.add_argument("nodes", nargs="+", help="node_<id>.dssc files")

    p = sub.add_parser("repair", help="regenerate a lost node file")
    _code_flags(p)
    p.add_argument("--failed", type=int, required=True)
    p.add_argument("--dir", default=".", help="directory holding node_<id>.dssc files")
    p.add_argument("--helpers", help="comma-separated helper ids")

    p = sub.add_parser("audit", help="worst-case block security over eavesdrop sets")
    _code_flags(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=32)

    p = sub.add_parser("bounds", help="file-size bounds with and without an eavesdropper")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("profile", help="block level as the eavesdropper grows")
    _code_flags(p)
    p.add_argument("--ell-max", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("simulate", help="replay a fail/repair/eavesdrop script")
    _code_flags(p)
    p.add_argument("script", nargs="?")
    p.add_argument("--demo", action="store_true", help="run the built-in node-replacement scenario")
    p.add_argument("--log", help="write the event log (JSON lines) here instead of stderr")
    return ap


def _error(e: MbrError) -> None:
    print(json.dumps({"error": e.code, "message": str(e)}), file=sys.stderr)


def main(argv=None) -> int:
    a = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if a.cmd == "bounds":
            return cmd_bounds(a)
        cfg = RunConfig.from_args(a)
        handler = {
            "build": cmd_build,
            "encode": cmd_encode,
            "reconstruct": cmd_reconstruct,
            "repair": cmd_repair,
            "audit": cmd_audit,
            "profile": cmd_profile,
            "simulate": cmd_simulate,
        }[a.cmd]
        return handler(cfg, a)
    except ScriptError as e:
        print(json.dumps({"error": "ScriptError", "message": str(e)}), file=sys.stderr)
        return 2
    except MbrError as e:
        _error(e)
        return 1
    except OSError as e:
        print(json.dumps({"error": "IOError", "message": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
