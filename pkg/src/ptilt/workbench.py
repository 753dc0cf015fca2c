"""Command line workbench: load algebras, reproduce the EX1 table, run checks.

Every command builds a ``Report``.  Reports are deterministic: rows come in
canonical order, no timestamps are recorded, and each report carries the
option snapshot and a hash of every input file it read.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 resource refusal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import Algebra, AlgebraError, parse_algebra
from .morcat import (
    INCONCLUSIVE,
    MorError,
    PCatalog,
    PObj,
    theorem_a_check,
    theorem_b_check,
)
from .repmod import Catalog, Rep, RepError, ResourceRefusal
from .taucore import duality_check, enumerate_support_tau_tilting

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3

CORPUS = ("k", "A2", "A3", "EX1")
VERIFY_TARGETS = ("A", "B", "C", "D", "E", "final", "cokfac", "duality")
ENUMERATE_TARGETS = ("indecs", "stt", "rigid-p", "ice-p")


class InputError(ValueError):
    """Malformed session file or unknown corpus name."""


@dataclass(frozen=True)
class Options:
    prime: int | None = None
    mult_cap: int = 2
    seed: int = 0
    allow_inconclusive: bool = False
    six_term_form: str = "stated"
    injective_witnesses: bool = False

    def snapshot(self) -> dict:
        return {
            "prime": self.prime,
            "mult_cap": self.mult_cap,
            "seed": self.seed,
            "allow_inconclusive": self.allow_inconclusive,
            "six_term_form": self.six_term_form,
            "injective_witnesses": self.injective_witnesses,
        }


@dataclass
class Session:
    algebra: Algebra
    catalog: Catalog
    modules: dict[str, Rep]
    pobjs: dict[str, PObj]
    options: Options
    sources: dict[str, str]  # input name -> sha256

    @property
    def pcat(self) -> PCatalog:
        return PCatalog.of(self.catalog)


@dataclass
class Report:
    command: str
    algebra: str
    options: dict
    sources: dict
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    refused: str = ""

    @property
    def status(self) -> str:
        if self.refused:
            return "refused"
        if self.failures:
            return "fail"
        if self.inconclusive and not self.options.get("allow_inconclusive"):
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "refused": EXIT_REFUSED}.get(self.status, EXIT_FAIL)

    def text(self) -> str:
        out = [f"# {self.command} on {self.algebra}"]
        out.append("# options " + " ".join(f"{k}={v}" for k, v in sorted(self.options.items())))
        for name, digest in sorted(self.sources.items()):
            out.append(f"# source {name} sha256={digest}")
        for k, v in self.summary.items():
            out.append(f"{k}: {v}")
        for row in self.rows:
            out.append("\t".join(str(c) for c in row))
        for f in self.failures:
            out.append("FAIL " + " | ".join(str(c) for c in f))
        for f in self.inconclusive:
            out.append("INCONCLUSIVE " + " | ".join(str(c) for c in f))
        if self.refused:
            out.append("REFUSED " + self.refused)
        out.append(f"status: {self.status}")
        return "\n".join(out) + "\n"

    def jsonl(self) -> str:
        head = {"record": "report", "command": self.command, "algebra": self.algebra,
                "options": self.options, "sources": self.sources, "summary": self.summary}
        lines = [head]
        lines += [{"record": "row", "command": self.command, "row": list(r)} for r in self.rows]
        lines += [{"record": "failure", "command": self.command, "detail": list(f)} for f in self.failures]
        lines += [{"record": "inconclusive", "command": self.command, "detail": list(f)}
                  for f in self.inconclusive]
        lines.append({"record": "status", "command": self.command, "status": self.status,
                      "refused": self.refused})
        return "".join(json.dumps(x, sort_keys=True, default=_jsonable) + "\n" for x in lines)

    def to_dict(self) -> dict:
        return {"command": self.command, "algebra": self.algebra, "options": self.options,
                "sources": self.sources, "rows": [list(map(str, r)) for r in self.rows],
                "failures": [list(map(str, f)) for f in self.failures],
                "inconclusive": [list(map(str, f)) for f in self.inconclusive],
                "summary": dict(self.summary),
                "refused": self.refused, "status": self.status}


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    return str(x)


# corpus and session files ------------------------------------------------------

def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def corpus_text(name: str) -> str:
    if name not in CORPUS:
        raise InputError(f"unknown corpus algebra {name!r}; known: {', '.join(CORPUS)}")
    return resources.files("ptilt.corpus").joinpath(f"{name}.alg").read_text(encoding="utf-8")


def golden_table_text() -> str:
    return resources.files("ptilt.corpus").joinpath("EX1.table1.tsv").read_text(encoding="utf-8")


_EXTRA = re.compile(r"^\s*(module|pobj)\s+(\w+)\s*=\s*(.*?)\s*$")
_INDECS = re.compile(r"^\s*indecs\s+(uniserial|brute)\s*([\d,\s]*)$")


def is_nakayama(alg: Algebra) -> bool:
    arrows = alg.quiver.arrows
    return all(sum(1 for _, s, _t in arrows if s == v) <= 1 and sum(1 for _, _s, t in arrows if t == v) <= 1
               for v in range(alg.n))


def parse_session(text: str, name: str, options: Options) -> Session:
    """Algebra description plus optional ``module`` and ``pobj`` definitions.

    ``module X = S2 + P3`` names a sum of catalog indecomposables and
    ``pobj Y = dom=(1,0) cod=(0,1) mat=[[alpha]]`` an object of the
    morphism category (counts per vertex, rows indexed by the codomain).
    ``indecs brute 2,2,1`` lists indecomposables by exhausting all
    representations up to that dimension vector; the default
    ``indecs uniserial`` is complete only for Nakayama algebras, so other
    quivers must say ``brute``.
    """
    algebra_lines, extras = [], []
    mode, bound = None, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        m = _EXTRA.match(body)
        k = _INDECS.match(body)
        if m:
            extras.append((lineno, m.group(1), m.group(2), m.group(3)))
            algebra_lines.append("")
        elif k:
            mode = k.group(1)
            try:
                bound = [int(c) for c in k.group(2).split(",") if c.strip()] or None
            except ValueError:
                raise InputError(f"line {lineno}: bad dimension bound") from None
            algebra_lines.append("")
        else:
            algebra_lines.append(raw)
    alg = parse_algebra("\n".join(algebra_lines), name=name, prime=options.prime)
    if mode is None:
        if not is_nakayama(alg):
            raise InputError("not a Nakayama algebra; add a line 'indecs brute <dimension bound>'")
        mode = "uniserial"
    catalog = Catalog.build(alg, mode=mode, bound=bound, seed=options.seed)
    modules, pobjs = {}, {}
    for lineno, kind, label, body in extras:
        try:
            if kind == "module":
                modules[label] = parse_module_literal(body, catalog)
            else:
                pobjs[label] = parse_pobj_literal(body, alg)
        except (AlgebraError, MorError, RepError, InputError) as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    return Session(alg, catalog, modules, pobjs, options, {name: _sha(text)})


def parse_module_literal(body: str, catalog: Catalog) -> Rep:
    names = [t.strip() for t in body.split("+") if t.strip()]
    if names == ["0"]:
        return catalog.sum_of(())
    idx = []
    for nm in names:
        if nm not in catalog.names:
            raise InputError(f"unknown indecomposable {nm!r}")
        idx.append(catalog.names.index(nm))
    return catalog.sum_of(idx)


_POBJ = re.compile(r"^dom=\(([\d,\s]*)\)\s+cod=\(([\d,\s]*)\)\s+mat=\[(.*)\]$")


def parse_pobj_literal(body: str, alg: Algebra) -> PObj:
    """Inverse of ``PObj.format`` (without the leading keyword)."""
    m = _POBJ.match(body.strip())
    if not m:
        raise InputError("expected dom=(..) cod=(..) mat=[[..],..]")
    dom = _verts(m.group(1), alg)
    cod = _verts(m.group(2), alg)
    rows = re.findall(r"\[([^\[\]]*)\]", m.group(3))
    if len(rows) != len(cod) and not (not cod and rows == []):
        raise InputError(f"matrix has {len(rows)} rows, codomain has {len(cod)} summands")
    mat = np.zeros((len(cod), len(dom), alg.dim), dtype=np.int64)
    for i, row in enumerate(rows):
        entries = [e.strip() for e in row.split(",")] if row.strip() else []
        if len(entries) != len(dom):
            raise InputError(f"row {i} has {len(entries)} entries, domain has {len(dom)} summands")
        for j, e in enumerate(entries):
            mat[i, j] = alg.parse_element(e)
    return PObj(alg, dom, cod, mat)


def _verts(text: str, alg: Algebra) -> tuple[int, ...]:
    counts = [int(c) for c in text.split(",") if c.strip()]
    if len(counts) != alg.n:
        raise InputError(f"expected {alg.n} counts, got {len(counts)}")
    return tuple(v for v in range(alg.n) for _ in range(counts[v]))


def open_session(source: str, options: Options) -> Session:
    """A corpus name or a path to a session file."""
    if source in CORPUS:
        return parse_session(corpus_text(source), source, options)
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return parse_session(text, path.stem, options)


def _report(session: Session, command: str) -> Report:
    return Report(command, session.algebra.name, session.options.snapshot(), dict(session.sources))


# commands ----------------------------------------------------------------------

def cmd_load(session: Session) -> Report:
    alg = session.algebra
    rep = _report(session, "load")
    rep.summary = {"dim": alg.dim, "vertices": alg.n, "prime": alg.p}
    rep.rows.append(("basis", " ".join(alg.basis_names())))
    cat = session.catalog
    for name, m in sorted(session.modules.items()):
        rep.rows.append(("module", name, cat.label(cat.decompose(m)) if m.dim else "0"))
    pcat = session.pcat
    for name, x in sorted(session.pobjs.items()):
        rep.rows.append(("pobj", name, pcat.label(pcat.decompose(x))))
    return rep


def _summand_set(label: str) -> frozenset:
    return frozenset(s.strip() for s in label.split("+") if s.strip())


def _member_set(text: str) -> frozenset:
    return frozenset(s.strip() for s in text.strip().strip("{}").split(",") if s.strip())


def golden_rows() -> list[tuple[str, str]]:
    rows = []
    for line in golden_table_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        left, right = line.split("\t")
        rows.append((left.strip(), right.strip()))
    return rows


def is_ex1(alg: Algebra) -> bool:
    ref = parse_algebra(corpus_text("EX1"), name="EX1", prime=alg.p)
    return ref.serialize() == alg.serialize() and ref.quiver == alg.quiver


def cmd_table1(session: Session) -> Report:
    """Tau-rigid modules of EX1 with the Cok subcategories they generate, against the golden file."""
    from .icecat import ModuleWorld, table1_rows

    if not is_ex1(session.algebra):
        raise InputError("table1 needs the EX1 algebra")
    rep = _report(session, "table1")
    rep.sources["EX1.table1.tsv"] = _sha(golden_table_text())
    mworld = ModuleWorld(session.catalog, mult_cap=session.options.mult_cap)
    computed = {_summand_set(m): (m, c) for m, c in table1_rows(mworld)}
    golden = golden_rows()
    seen = set()
    for m, c in golden:
        key = _summand_set(m)
        seen.add(key)
        if key not in computed:
            rep.failures.append(("missing row", m, c))
            continue
        got = computed[key][1]
        rep.rows.append((m, got))
        if _member_set(got) != _member_set(c):
            rep.failures.append(("row differs", m, f"expected {c}", f"computed {got}"))
    for key, (m, c) in sorted(computed.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        if key not in seen:
            rep.rows.append((m, c))
            rep.failures.append(("row not in the golden file", m, c))
    rep.summary = {"golden rows": len(golden), "computed rows": len(computed)}
    return rep


def cmd_verify(session: Session, target: str) -> Report:
    from . import icecat

    if target not in VERIFY_TARGETS:
        raise InputError(f"unknown verify target {target!r}")
    opts = session.options
    cat, pcat = session.catalog, session.pcat
    rep = _report(session, f"verify {target}")
    mworld = icecat.ModuleWorld(cat, mult_cap=opts.mult_cap)
    world = icecat.MorphismWorld(pcat, mult_cap=opts.mult_cap)
    if target == "A":
        res = theorem_a_check(pcat)
        labels = ("support tau-tilting pairs", "tilting objects")
    elif target == "B":
        res = theorem_b_check(pcat, samples=200, seed=opts.seed)
        labels = ("silting complexes", "tilting objects")
    elif target == "C":
        res = icecat.theorem_c_bijection(world)
        labels = ("basic rigid objects", "ICE-closed with enough Ext-projectives")
    elif target == "D":
        res = icecat.theorem_d_check(world, cat)
        labels = ("rigid objects containing the algebra", "tau-rigid pairs")
    elif target == "E":
        res = icecat.theorem_e_check(world, mworld)
        labels = ("tau-rigid pairs", "relative subcategories")
    elif target == "final":
        res = icecat.final_check(cat, mworld, form=opts.six_term_form, seed=opts.seed,
                                 injective_only=opts.injective_witnesses)
        labels = ("support tau-tilting pairs", "pairs passing")
        rep.inconclusive = [f for f in res.failures if "no conflation found" in f]
        res.failures = [f for f in res.failures if "no conflation found" not in f]
    elif target == "cokfac":
        pairs = enumerate_support_tau_tilting(cat)
        for pr in pairs:
            ok = icecat.cok_equals_fac_check(pr, mworld)
            rep.rows.append((pr.label(), "Cok M = Fac M" if ok else "differ"))
            if not ok:
                rep.failures.append(("Cok M != Fac M", pr.label()))
        rep.summary = {"support tau-tilting pairs": len(pairs)}
        return rep
    else:
        op = Catalog.build(session.algebra.opposite(), seed=opts.seed)
        left, right, failures = duality_check(cat, op)
        rep.failures = failures
        rep.summary = {"pairs over the algebra": left, "pairs over the opposite": right}
        if left != right:
            rep.failures.append(("count mismatch", left, right))
        return rep
    rep.rows.extend(res.rows)
    rep.failures.extend(res.failures)
    rep.summary = {labels[0]: res.left, labels[1]: res.right}
    if target != "final" and res.left != res.right:
        rep.failures.append(("count mismatch", res.left, res.right))
    return rep


def cmd_enumerate(session: Session, what: str) -> Report:
    from . import icecat

    if what not in ENUMERATE_TARGETS:
        raise InputError(f"unknown enumerate target {what!r}")
    cat, pcat = session.catalog, session.pcat
    rep = _report(session, f"enumerate {what}")
    if what == "indecs":
        for i, m in enumerate(cat.indecs):
            rep.rows.append((cat.names[i], "dims=" + ",".join(map(str, m.dims))))
    elif what == "stt":
        for pr in enumerate_support_tau_tilting(cat):
            rep.rows.append((pr.label(),))
    else:
        world = icecat.MorphismWorld(pcat, mult_cap=session.options.mult_cap)
        if what == "rigid-p":
            for s in icecat.rigid_sets(world):
                rep.rows.append((pcat.label(s),))
        else:
            for s in icecat.ice_with_enough_projectives(world):
                rep.rows.append((world.subcat(s).text(),))
    rep.summary = {"count": len(rep.rows)}
    return rep


def run(command: str, arg: str | None, source: str, options: Options) -> Report:
    """Run one command; refusals become a refused report, input errors propagate."""
    session = open_session(arg if command == "load" else source, options)
    try:
        if command == "load":
            return cmd_load(session)
        if command == "table1":
            return cmd_table1(session)
        if command == "verify":
            return cmd_verify(session, arg)
        if command == "enumerate":
            return cmd_enumerate(session, arg)
    except ResourceRefusal as exc:
        rep = _report(session, f"{command} {arg or ''}".strip())
        rep.refused = str(exc)
        return rep
    raise InputError(f"unknown command {command!r}")


def remote_run(server: str, command: str, arg: str | None, source: str, options: Options) -> Report:
    """Same as ``run`` but executed by a running service at ``server``."""
    import urllib.error
    import urllib.request

    src = arg if command == "load" else source
    body: dict = {"options": options.snapshot()}
    if src in CORPUS:
        body["corpus"] = src
    else:
        try:
            body["text"] = Path(src).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {src}: {exc.strerror}") from None
        body["name"] = Path(src).stem
    route = {"load": "/load", "table1": "/table1"}.get(command, f"/{command}/{arg}")
    req = urllib.request.Request(server.rstrip("/") + route, data=json.dumps(body).encode(),
                                 headers={"Content-Type": "application/json"}, method="POST")
    try:
        with urllib.request.urlopen(req) as resp:
            data = json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        detail = json.loads(exc.read() or b"{}").get("detail", exc.reason)
        if exc.code == 413:
            raise ResourceRefusal(str(detail)) from None
        raise InputError(str(detail)) from None
    except urllib.error.URLError as exc:
        raise InputError(f"cannot reach {server}: {exc.reason}") from None
    rep = Report(data["command"], data["algebra"], data["options"], data["sources"])
    rep.rows = [tuple(r) for r in data["rows"]]
    rep.failures = [tuple(f) for f in data["failures"]]
    rep.inconclusive = [tuple(f) for f in data["inconclusive"]]
    rep.summary = data["summary"]
    rep.refused = data["refused"]
    return rep


# argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="EX1",
                        help="corpus name (k, A2, A3, EX1) or path to a session file")
    common.add_argument("--prime", type=int, default=None, help="override the field characteristic")
    common.add_argument("--mult-cap", type=int, default=2, help="summand cap for closure engines")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--allow-inconclusive", action="store_true")
    common.add_argument("--json", action="store_true", help="emit JSON lines")
    common.add_argument("--server", default=None, help="send the command to a running service")
    common.add_argument("--six-term-form", choices=("stated", "unpulled"), default="stated",
                        help="variant of the six-term sequence checked by 'verify final'")
    common.add_argument("--injective-witnesses", action="store_true",
                        help="'verify final' completes only from witnesses with injective first map")
    parser = argparse.ArgumentParser(prog="ptilt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("load", parents=[common], help="parse a session file and print the algebra")
    p.add_argument("file")
    sub.add_parser("table1", parents=[common], help="reproduce the EX1 table against the golden file")
    p = sub.add_parser("verify", parents=[common], help="run a bijection or identity check")
    p.add_argument("target", choices=VERIFY_TARGETS)
    p = sub.add_parser("enumerate", parents=[common], help="list objects of a given kind")
    p.add_argument("what", choices=ENUMERATE_TARGETS)
    return parser


def options_from_args(ns: argparse.Namespace) -> Options:
    return Options(prime=ns.prime, mult_cap=ns.mult_cap, seed=ns.seed,
                   allow_inconclusive=ns.allow_inconclusive, six_term_form=ns.six_term_form,
                   injective_witnesses=ns.injective_witnesses)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    arg = getattr(ns, "file", None) or getattr(ns, "target", None) or getattr(ns, "what", None)
    try:
        if ns.server:
            report = remote_run(ns.server, ns.command, arg, ns.algebra, options_from_args(ns))
        else:
            report = run(ns.command, arg, ns.algebra, options_from_args(ns))
    except (InputError, AlgebraError, RepError, MorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    sys.stdout.write(report.jsonl() if ns.json else report.text())
    return report.exit_code


__all__ = [
    "Options",
    "Session",
    "Report",
    "InputError",
    "open_session",
    "parse_session",
    "parse_pobj_literal",
    "parse_module_literal",
    "golden_rows",
    "cmd_load",
    "cmd_table1",
    "cmd_verify",
    "cmd_enumerate",
    "run",
    "main",
    "INCONCLUSIVE",
]
