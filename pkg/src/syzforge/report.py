"""Task execution and deterministic JSON reports."""

from __future__ import annotations

import json
import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .complexes import ComplexError, TruncatedResolution, free_resolution, grade_or_inf, module_grade, proj_dim
from .corpus import generate_corpus
from .embeddings import EmbeddingError, ShamashError, embed_module, shamash_resolution, syzygy_split_check
from .order_ideals import FAIL, check_oic, nzd_check, tor_vanishing_sequence
from .session import Session, SessionError, parse_session

SCHEMA = 1

OK = "ok"
FAILED = "fail"
REJECTED = "rejected"
INVARIANT = "invariant"

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3


def _clean(v):
    """Make a value JSON-safe (``inf`` becomes a string, tuples become lists)."""
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def _false_checks(checks):
    return sorted(k for k, v in checks.items() if v is False)


# --- task handlers: each returns (status, result dict) -------------------------------

def _resolve(session, task, seed):
    P = session.bindings[task.target].value
    res = free_resolution(P, task.args.get("max_len"))
    D = task.args.get("D", P.default_bound())
    exact = res.certify(D)
    out = {
        "betti": res.betti().to_json(),
        "betti_text": res.betti().to_text().splitlines(),
        "ranks": res.complex.ranks(),
        "length": res.length,
        "truncated": res.truncated,
        "degree_bound": D,
        "exact_to_D": exact,
    }
    return (OK if exact and not res.truncated else FAILED), out


def _betti(session, task, seed):
    P = session.bindings[task.target].value
    res = free_resolution(P, task.args.get("max_len"))
    if res.truncated:
        raise TruncatedResolution("resolution truncated before reaching zero")
    b = res.betti()
    return OK, {"betti": b.to_json(), "betti_text": b.to_text().splitlines()}


def _grade(session, task, seed):
    b = session.bindings[task.target]
    if b.kind == "ideal":
        return OK, {"grade": grade_or_inf(b.value)}
    P = b.value
    return OK, {"grade": module_grade(P), "pd": proj_dim(P)}


def _embed(session, task, seed):
    P = session.bindings[task.target].value
    res = embed_module(P, task.args["x"], task.args.get("D"))
    out = res.to_json()
    if res.t == 1 and res.pd_M > 1:
        split = syzygy_split_check(P, res)
        out["split_check"] = split.to_json()
    failed = _false_checks(res.checks) + _false_checks(res.homotopy) + _false_checks(res.sequence_certificate)
    out["failed_checks"] = failed
    return (FAILED if failed else OK), out


def _shamash(session, task, seed):
    P = session.bindings[task.target].value
    data = shamash_resolution(free_resolution(P), task.args["x"], task.args.get("length"), task.args.get("D"))
    out = data.to_json()
    failed = _false_checks(data.checks)
    out["failed_checks"] = failed
    return (FAILED if failed else OK), out


def _check_oic(session, task, seed):
    P = session.bindings[task.target].value
    rep = check_oic(P, task.args.get("max_i"), task.args.get("probes", 0), task.args.get("seed", seed),
                    module_id=task.target)
    out = rep.to_json()
    out["table"] = rep.to_text().splitlines()
    out["consistency_failures"] = [list(x) for x in rep.consistency_failures()]
    bad = rep.verdict == FAIL or rep.partial or out["consistency_failures"]
    return (FAILED if bad else OK), out


def _nzd(session, task, seed):
    rep = nzd_check(session.bindings[task.target].value)
    return (FAILED if rep.verdict == FAIL else OK), rep.to_json()


def _tor_seq(session, task, seed):
    P = session.bindings[task.target].value
    cert = tor_vanishing_sequence(P, seed=task.args.get("seed", seed), search=task.args.get("search", 50),
                                  max_j=task.args.get("max_j"))
    return (FAILED if cert.verdict == FAIL else OK), cert.to_json()


def _corpus(session, task, seed):
    a = task.args
    profile = (tuple(a.get("gens", [0, 0])), tuple(a.get("rels", [1, 1, 2])))
    mods = generate_corpus(session.ring, a.get("seed", seed), a.get("count", 5), profile)
    out = {"modules": [m.to_json() for m in mods]}
    status = OK
    if a.get("check", "oic") == "oic":
        verdicts = []
        for m in mods:
            rep = check_oic(m, module_id=m.name)
            verdicts.append({"module": m.name, "verdict": rep.verdict, "pd": rep.pd})
            if rep.verdict == FAIL:
                status = FAILED
        out["oic"] = verdicts
    return status, out


HANDLERS = {
    "resolve": _resolve,
    "betti": _betti,
    "grade": _grade,
    "embed": _embed,
    "shamash": _shamash,
    "check-oic": _check_oic,
    "nzd-check": _nzd,
    "tor-seq": _tor_seq,
    "corpus": _corpus,
}


def run_task(session, index, seed=0):
    task = session.tasks[index]
    entry = {"index": index, "kind": task.kind, "target": task.target, "line": task.line,
             "args": _clean(task.args)}
    try:
        status, result = HANDLERS[task.kind](session, task, seed)
        entry["status"] = status
        entry["result"] = _clean(result)
    except (EmbeddingError, ShamashError) as exc:
        entry["status"] = REJECTED
        entry["error"] = {"code": getattr(exc, "code", "REJECTED"), "message": getattr(exc, "message", str(exc))}
    except TruncatedResolution as exc:
        entry["status"] = FAILED
        entry["error"] = {"code": "TRUNCATED", "message": str(exc)}
    except ComplexError as exc:
        entry["status"] = INVARIANT
        entry["error"] = {"code": "INVARIANT", "message": str(exc)}
    except Exception as exc:  # noqa: BLE001 - every task failure is reported, not raised
        entry["status"] = INVARIANT
        entry["error"] = {"code": type(exc).__name__, "message": str(exc),
                          "trace": traceback.format_exc().splitlines()[-3:]}
    return entry


def _worker(text, index, seed):
    return run_task(parse_session(text), index, seed)


@dataclass
class Report:
    ring: str
    seed: int
    tasks: list = field(default_factory=list)
    input_error: dict = None

    @property
    def exit_code(self):
        if self.input_error:
            return EXIT_INPUT
        statuses = {t["status"] for t in self.tasks}
        if INVARIANT in statuses:
            return EXIT_INVARIANT
        if statuses & {FAILED, REJECTED}:
            return EXIT_CHECK
        return EXIT_OK

    def to_json(self):
        counts = {}
        for t in self.tasks:
            counts[t["status"]] = counts.get(t["status"], 0) + 1
        return {
            "schema": SCHEMA,
            "ring": self.ring,
            "seed": self.seed,
            "tasks": self.tasks,
            "summary": {"counts": counts, "exit_code": self.exit_code},
            "input_error": self.input_error,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def to_text(self):
        if self.input_error:
            e = self.input_error
            return f"input error at line {e['line']}, column {e['column']}: {e['message']}"
        lines = []
        for t in self.tasks:
            head = f"[{t['index']}] {t['kind']} {t['target']}: {t['status'].upper()}"
            if "error" in t:
                head += f" ({t['error']['code']}: {t['error']['message']})"
            lines.append(head)
            res = t.get("result", {})
            for key in ("betti_text", "table"):
                for row in res.get(key, []):
                    lines.append("    " + row)
            for key in ("grade", "pd", "verdict", "elements"):
                if key in res:
                    lines.append(f"    {key}: {res[key]}")
            if res.get("failed_checks"):
                lines.append("    failed checks: " + ", ".join(res["failed_checks"]))
        lines.append(f"exit code {self.exit_code}")
        return "\n".join(lines)


def run_tasks(session, seed=0, parallel=False, fail_fast=False, workers=None):
    """Run every task; results are ordered by task index whatever the execution order."""
    if not isinstance(session, Session):
        raise TypeError("run_tasks expects a parsed Session")
    report = Report(session.ring.describe(), seed)
    n = len(session.tasks)
    if parallel and n > 1:
        text = session.source or session.serialize()
        with ProcessPoolExecutor(workers) as ex:
            entries = list(ex.map(_worker, [text] * n, range(n), [seed] * n))
        for e in entries:
            report.tasks.append(e)
            if fail_fast and e["status"] != OK:
                break
        return report
    for i in range(n):
        e = run_task(session, i, seed)
        report.tasks.append(e)
        if fail_fast and e["status"] != OK:
            break
    return report


def run_text(text, seed=0, parallel=False, fail_fast=False):
    try:
        session = parse_session(text)
    except SessionError as exc:
        r = Report("", seed)
        r.input_error = {"line": exc.line, "column": exc.column, "message": exc.message}
        return r
    return run_tasks(session, seed, parallel, fail_fast)
