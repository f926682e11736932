"""Deterministic storage-system simulator with a passive eavesdropper.

The state changes only through :class:`DssState` methods, each of which
appends one record to an append-only event log.  Replaying the log on a
freshly built code reproduces the same state.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlreadyFailed,
    BadIndex,
    BadParams,
    InsufficientAlive,
    NotFailed,
    WrongHelpers,
)
from .graph_code import GraphCode, NodeContent, as_vector, gc_helper_unit, gc_reconstruct, gc_repair
from .matrix import MatrixFq
from .pm_code import pm_reconstruct, pm_repair, pm_repair_helper, stack_observation
from .security import (
    SecureWrap,
    SecurityReport,
    block_security_level,
    encode,
    observation_matrix,
    perfect_secrecy_check,
    secure_wrap,
)

ALIVE = "alive"
FAILED = "failed"


@dataclass
class Node:
    status: str
    content: tuple[int, ...] | None


@dataclass
class Adversary:
    observed: list[int] = field(default_factory=list)
    matrix: MatrixFq | None = None
    values: list[int] = field(default_factory=list)


class DssState:
    def __init__(self, code, file: Sequence[int], seed: int = 0, wrap: SecureWrap | None = None):
        self.code = code
        self.wrap = wrap
        self.seed = seed
        self.file = [int(x) for x in file]
        self.nodes: dict[int, Node] = {}
        self.log: list[dict] = []
        self._original: dict[int, tuple[int, ...]] = {}
        self._newcomers = code.n

    @classmethod
    def create(cls, code, file=None, secret=None, seed: int = 0) -> DssState:
        """Encode ``file`` (or, for a SecureWrap, ``secret`` plus seeded randomness) onto all nodes."""
        if isinstance(code, SecureWrap):
            wrap, base = code, code.base
            if secret is None:
                raise BadParams("a wrapped code needs a secret")
            full = wrap.compose(secret, wrap.randomness(seed))
        else:
            wrap, base = None, code
            if file is None:
                raise BadParams("a file is required")
            full = as_vector(base.field, file, base.M).tolist()
        state = cls(base, full, seed, wrap)
        contents = encode(base, full)
        for v in range(1, base.n + 1):
            c = _values(contents[v - 1])
            state.nodes[v] = Node(ALIVE, c)
            state._original[v] = c
        rec = {"event": "encode", "seed": seed, "nodes": base.n}
        if wrap is not None:
            rec["secret"] = [int(x) for x in as_vector(base.field, secret)]
            rec["lambda"] = wrap.lam
        else:
            rec["file"] = full
        state._append(rec)
        return state

    def _append(self, rec: dict) -> None:
        rec["seq"] = len(self.log)
        self.log.append(rec)

    def _check(self, node) -> None:
        if not isinstance(node, (int, np.integer)) or node not in self.nodes:
            raise BadIndex(f"unknown node {node!r}")

    def alive(self) -> list[int]:
        return [v for v, nd in self.nodes.items() if nd.status == ALIVE]

    @property
    def secret(self) -> list[int]:
        return self.wrap.extract_secret(self.file) if self.wrap else list(self.file)

    def fail(self, node: int) -> DssState:
        self._check(node)
        if self.nodes[node].status == FAILED:
            raise AlreadyFailed(f"node {node} has already failed")
        pending = [v for v, nd in self.nodes.items() if nd.status == FAILED]
        if pending:
            raise InsufficientAlive(f"node {pending[0]} must be repaired before another failure")
        self.nodes[node] = Node(FAILED, None)
        self._append({"event": "fail", "node": node})
        return self

    def default_helpers(self, node: int) -> list[int]:
        if isinstance(self.code, GraphCode):
            return self.code.neighbors(node)
        return sorted(v for v in self.alive() if v != node)[: self.code.d]

    def repair(self, node: int, helpers: Iterable[int] | None = None) -> DssState:
        self._check(node)
        if self.nodes[node].status != FAILED:
            raise NotFailed(f"node {node} is alive")
        defaulted = helpers is None
        helpers = self.default_helpers(node) if defaulted else sorted(helpers)
        for h in helpers:
            self._check(h)
        dead = [h for h in helpers if self.nodes[h].status != ALIVE]
        if dead:
            raise InsufficientAlive(f"helpers {dead} are not alive")
        code = self.code
        if isinstance(code, GraphCode):
            if helpers != code.neighbors(node):
                raise WrongHelpers(f"helpers {helpers} != neighbors {code.neighbors(node)}")
            sent = {
                h: gc_helper_unit(code, NodeContent(h, code.placement[h], self.nodes[h].content), node)
                for h in helpers
            }
            content = gc_repair(code, node, sent).values
        else:
            if defaulted and len(helpers) < code.d:
                raise InsufficientAlive(f"only {len(self.alive())} nodes alive, need {code.d}")
            sent = {h: pm_repair_helper(code, h, node, self.nodes[h].content) for h in helpers}
            content = tuple(pm_repair(code, node, sent))
        content = tuple(int(x) for x in content)
        assert content == self._original[node], "exact repair violated"
        self.nodes[node] = Node(ALIVE, content)
        self._newcomers += 1
        self._append(
            {
                "event": "repair",
                "node": node,
                "newcomer": self._newcomers,
                "helpers": helpers,
                "downloads": {str(h): 1 for h in helpers},
            }
        )
        return self

    def collect(self, nodes: Sequence[int]) -> list[int]:
        nodes = list(nodes)
        for v in nodes:
            self._check(v)
        if len(set(nodes)) != len(nodes) or len(nodes) != self.code.k:
            raise BadIndex(f"need {self.code.k} distinct nodes, got {nodes}")
        if any(self.nodes[v].status != ALIVE for v in nodes):
            raise InsufficientAlive(f"some of {nodes} are not alive")
        if isinstance(self.code, GraphCode):
            got = gc_reconstruct(
                self.code, [NodeContent(v, self.code.placement[v], self.nodes[v].content) for v in nodes]
            )
        else:
            got = pm_reconstruct(self.code, {v: self.nodes[v].content for v in nodes})
        self._append({"event": "collect", "nodes": nodes, "ok": got == self.file})
        return got

    def eavesdrop(self, adversary: Adversary, node: int) -> Adversary:
        self._check(node)
        if self.nodes[node].status != ALIVE:
            raise BadIndex(f"node {node} is failed and stores nothing")
        if node not in adversary.observed:
            adversary.observed.append(node)
        ids = sorted(adversary.observed)
        adversary.matrix = observation_matrix(self.code, ids)
        adversary.values = self._observed_values(ids)
        self._append({"event": "eavesdrop", "node": node})
        return adversary

    def _observed_values(self, ids: list[int]) -> list[int]:
        if isinstance(self.code, GraphCode):
            units = {}
            for v in ids:
                units.update(zip(self.code.placement[v], self.nodes[v].content))
            return [units[e] for e in sorted(units)]
        return stack_observation(self.code, {v: self.nodes[v].content for v in ids}, ids)

    def report(self, adversary: Adversary, budget: int | None = None) -> SecurityReport:
        if adversary.matrix is None:
            rep = block_security_level(MatrixFq.zeros(self.code.field, 0, self.code.M), (), budget)
        else:
            rep = block_security_level(adversary.matrix, sorted(adversary.observed), budget)
            if self.wrap is not None:
                rep.perfectly_secure = perfect_secrecy_check(self.wrap, sorted(adversary.observed))
        rec = {"event": "report", "block_level": rep.block_level, "min_distance": rep.min_distance}
        if rep.witness is not None:
            rec["revealed"] = {"support": list(rep.witness.support), "value": revealed_value(rep, adversary)}
        self._append(rec)
        return rep

    def snapshot(self) -> dict:
        return {
            "file": list(self.file),
            "nodes": {v: (nd.status, nd.content) for v, nd in self.nodes.items()},
            "log": [dict(r) for r in self.log],
        }


def revealed_value(report: SecurityReport, adversary: Adversary) -> int | None:
    """Value of the witness combination computed from what the adversary saw.

    For a weight-1 witness this is the exposed data unit itself.
    """
    if report.witness is None or adversary.matrix is None:
        return None
    q = adversary.matrix.field.q
    return int(sum(a * b for a, b in zip(report.witness.coefficients, adversary.values)) % q)


def _values(content) -> tuple[int, ...]:
    if isinstance(content, NodeContent):
        return tuple(int(x) for x in content.values)
    return tuple(int(x) for x in content)


def dump_log(log: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in log)


def load_log(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def replay(code, events: Sequence[dict]) -> tuple[DssState, Adversary]:
    """Rebuild a state from a log produced by the same code configuration."""
    if not events or events[0]["event"] != "encode":
        raise BadParams("log must start with an encode record")
    first = events[0]
    if "secret" in first:
        base = code.base if isinstance(code, SecureWrap) else code
        state = DssState.create(secure_wrap(base, first["lambda"]), secret=first["secret"], seed=first["seed"])
    else:
        state = DssState.create(code, file=first["file"], seed=first["seed"])
    adv = Adversary()
    for ev in events[1:]:
        kind = ev["event"]
        if kind == "fail":
            state.fail(ev["node"])
        elif kind == "repair":
            state.repair(ev["node"], ev["helpers"])
        elif kind == "collect":
            state.collect(ev["nodes"])
        elif kind == "eavesdrop":
            state.eavesdrop(adv, ev["node"])
        elif kind == "report":
            state.report(adv)
        else:
            raise BadParams(f"unknown event {kind!r}")
    return state, adv
