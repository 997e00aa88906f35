"""Command-line front end.  Every subcommand builds a Report and prints it as
json, tsv or text.

Exit codes: 0 when the checked property holds (or a table was produced),
1 when a property is violated (the report carries the witness), 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import enriched_partitions as ep
from .compositions import arrow_relations, format_comp
from .kernel_lab import (
    ideal_matrix,
    implication_checks,
    is_m_binomial,
    is_op_ideal,
    kernel_component,
    kernel_generators,
    kernel_in_m,
    epk_f_generators,
    epk_m_generators,
    shuffle_algebra_dimension,
)
from .lacunar_sets import enumerate_Ln, fibonacci
from .perm_core import (
    DESCENT_TAGS,
    STAT_TAGS,
    all_statistics,
    as_perm,
    exterior_peaks,
    format_value,
    jsonable_value,
    standard_perms,
)
from .qsym_algebra import (
    F,
    M,
    QSymElement,
    bel,
    check_beldend,
    check_dendriform_axioms,
    check_tvidend,
    check_unit_rules,
    prec,
    product,
    random_element,
    succeq,
    tvi,
)
from .shuffle_engine import (
    NOTIONS,
    Instance,
    certify,
    left_shuffles,
    recheck_witness,
    right_shuffles,
    shuffles,
    stat_multiset,
)

OUTPUT_DIR_ENV = "SHUFFLELAB_OUTPUT_DIR"

# runtime envelopes above which a warning is printed
ENVELOPE = {"max_size": 7, "degree": 7, "enriched_n": 6, "kernel_n": 10, "pairs": 500}


# violated classes listed in certify reports
CLASS_LIMIT = 50


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    parameters: dict
    verdict: Optional[bool] = None
    payload: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    scope: str = ""
    text: list = field(default_factory=list)  # human-readable lines
    tsv: list = field(default_factory=list)  # rows of cells

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "verdict": self.verdict,
            "payload": self.payload,
            "witnesses": self.witnesses,
            "scope": self.scope,
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2) + "\n"
        if fmt == "tsv":
            rows = self.tsv or [[k, json.dumps(v)] for k, v in self.payload.items()]
            return "".join("\t".join(str(c) for c in r) + "\n" for r in rows)
        lines = list(self.text)
        if self.verdict is not None:
            lines.append(f"verdict: {'holds' if self.verdict else 'violated'}")
        for w in self.witnesses:
            lines.append(f"witness: {json.dumps(w)}")
        if self.scope:
            lines.append(f"scope: {self.scope}")
        return "\n".join(lines) + "\n"

    def exit_code(self) -> int:
        return 1 if self.verdict is False else 0


# --- parsing helpers ----------------------------------------------------------------


def parse_perm(s: str) -> tuple:
    body = s.strip().strip("()[]").strip()
    if not body:
        return ()
    try:
        return as_perm(int(x) for x in re.split(r"[,\s]+", body) if x)
    except ValueError as e:
        raise UsageError(f"bad permutation {s!r}: {e}") from None


def parse_set(s: Optional[str]) -> tuple:
    if s is None:
        return ()
    body = s.strip().strip("{}()[]").strip()
    if not body:
        return ()
    try:
        return tuple(sorted({int(x) for x in re.split(r"[,\s]+", body) if x}))
    except ValueError:
        raise UsageError(f"bad integer set {s!r}") from None


def _warn(msg: str):
    print(f"warning: {msg}", file=sys.stderr)


# --- qsym expression language ---------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<basis>[FM])\s*\[(?P<comp>[\d,\s]*)\]|(?P<num>\d+(?:/\d+)?)|(?P<op>>=|bel|tvi|[*<+\-()]))"
)

_BINARY = {"*": product, "<": prec, ">=": succeq, "bel": bel, "tvi": tvi}


def tokenize(expr: str) -> list:
    out, pos = [], 0
    expr = expr.rstrip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse expression at {expr[pos:]!r}")
        if m.group("basis"):
            parts = [x for x in re.split(r"[,\s]+", m.group("comp")) if x]
            comp = tuple(int(x) for x in parts)
            if any(x < 1 for x in comp):
                raise UsageError(f"composition parts must be positive in {m.group(0).strip()!r}")
            out.append(("elem", m.group("basis"), comp))
        elif m.group("num"):
            out.append(("num", Fraction(m.group("num"))))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    """expr := term (('+'|'-') term)* ; term := unary (binop unary)* ;
    unary := '-' unary | atom ; atom := F[..] | M[..] | number | '(' expr ')'.

    The binary operators * < >= bel tvi share one precedence level and
    associate to the left."""

    def __init__(self, tokens, degree):
        self.toks = tokens
        self.i = 0
        self.N = degree

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def lift(self, v):
        if isinstance(v, QSymElement):
            return v
        return QSymElement.one("F", self.N).scale(v)

    def parse(self):
        v = self.expr()
        if self.peek() is not None:
            raise UsageError(f"unexpected token {self.peek()[-1]!r}")
        return self.lift(v)

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            if isinstance(v, Fraction) and isinstance(w, Fraction):
                v = v + w if op == "+" else v - w
            else:
                v = self.lift(v) + self.lift(w) if op == "+" else self.lift(v) - self.lift(w)
        return v

    def term(self):
        v = self.unary()
        while True:
            t = self.peek()
            if not (t and t[0] == "op" and t[1] in _BINARY):
                return v
            op = self.take()[1]
            w = self.unary()
            if op == "*" and (isinstance(v, Fraction) or isinstance(w, Fraction)):
                if isinstance(v, Fraction) and isinstance(w, Fraction):
                    v = v * w
                else:
                    v = w.scale(v) if isinstance(v, Fraction) else v.scale(w)
            else:
                v = _BINARY[op](self.lift(v), self.lift(w))

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            v = self.unary()
            return -v
        return self.atom()

    def atom(self):
        t = self.take()
        if t is None:
            raise UsageError("unexpected end of expression")
        if t[0] == "elem":
            return (F if t[1] == "F" else M)(t[2], self.N)
        if t[0] == "num":
            return t[1]
        if t == ("op", "("):
            v = self.expr()
            if self.take() != ("op", ")"):
                raise UsageError("missing closing parenthesis")
            return v
        raise UsageError(f"unexpected token {t[-1]!r}")


def eval_expression(expr: str, degree: int) -> QSymElement:
    return _Parser(tokenize(expr), degree).parse()


# --- subcommands ----------------------------------------------------------------------


def cmd_stats(a) -> Report:
    p = parse_perm(a.perm)
    stats = all_statistics(p)
    payload = {"permutation": list(p), "statistics": {t: jsonable_value(t, v) for t, v in stats.items()}}
    rep = Report("stats", {"perm": list(p)}, payload=payload, scope=f"one permutation of size {len(p)}")
    rep.text = [f"pi = {p}"] + [f"{t}\t{format_value(t, v)}" for t, v in stats.items()]
    rep.tsv = [["statistic", "value"]] + [[t, format_value(t, v)] for t, v in stats.items()]
    return rep


def cmd_shuffles(a) -> Report:
    p, s = parse_perm(a.pi), parse_perm(a.sigma)
    if a.left:
        kind, out = "left", left_shuffles(p, s)
    elif a.right:
        kind, out = "right", right_shuffles(p, s)
    else:
        kind, out = "all", shuffles(p, s)
    rep = Report(
        "shuffles",
        {"pi": list(p), "sigma": list(s), "kind": kind},
        payload={"count": len(out), "shuffles": [list(t) for t in out]},
        scope="exhaustive",
    )
    rep.text = [f"{kind} shuffles of {p} and {s}: {len(out)}"] + [str(t) for t in out]
    rep.tsv = [[",".join(map(str, t))] for t in out]
    return rep


def cmd_certify(a) -> Report:
    if a.max_size > ENVELOPE["max_size"]:
        _warn(f"max-size {a.max_size} is above the documented envelope of {ENVELOPE['max_size']}")
    r = certify(a.notion, a.stat, a.max_size, jobs=a.jobs)
    d = r.to_dict()
    witnesses = []
    if r.witness:
        witnesses.append(dict(d["witness"], rechecked=recheck_witness(r)))
    payload = {
        "notion": r.notion,
        "statistic": r.statistic,
        "instances_checked": r.checked,
        "violated_classes": len(r.violations),
        "classes": r.classes_as_dicts(CLASS_LIMIT),
    }
    rep = Report(
        "certify",
        {"notion": a.notion, "stat": a.stat, "max_size": a.max_size},
        verdict=r.verdict,
        payload=payload,
        witnesses=witnesses,
        scope=r.scope(),
    )
    rep.text = [f"{a.notion}-compatibility of {a.stat} up to size {a.max_size}: {r.checked} instances"]
    if r.witness:
        x, vx, y, vy = r.witness
        rep.text += [f"  {x.describe()} -> {d['witness']['first_value']}", f"  {y.describe()} -> {d['witness']['second_value']}"]
    rep.tsv = [["notion", "statistic", "max_size", "verdict"], [a.notion, a.stat, a.max_size, str(r.verdict).lower()]]
    return rep


def cmd_lacunar(a) -> Report:
    if a.n < 0:
        raise UsageError("n must be nonnegative")
    sets = enumerate_Ln(a.n)
    expect = fibonacci(a.n + 2) - 1 if a.n >= 1 else 1
    rep = Report(
        "lacunar",
        {"n": a.n},
        verdict=len(sets) == expect,
        payload={"sets": [list(s) for s in sets], "count": len(sets), "fibonacci_count": expect},
        scope=f"all subsets of [{a.n}]",
    )
    rep.text = ["{" + ", ".join("{" + ",".join(map(str, s)) + "}" for s in sets) + "}", f"count {len(sets)}"]
    rep.tsv = [["{" + ",".join(map(str, s)) + "}"] for s in sets]
    return rep


def _elem_payload(e: QSymElement) -> dict:
    return {"F": e.to("F").to_text(), "M": e.to("M").to_text(), "truncated": bool(e.truncated)}


def cmd_qsym_eval(a) -> Report:
    if a.degree > ENVELOPE["degree"] + 2:
        _warn(f"degree {a.degree} is above the documented envelope of {ENVELOPE['degree'] + 2}")
    e = eval_expression(a.expr, a.degree)
    pay = _elem_payload(e)
    rep = Report("qsym eval", {"expr": a.expr, "degree": a.degree}, payload=pay, scope=f"truncated at degree {a.degree}")
    rep.text = [pay[a.basis]]
    rep.tsv = [["basis", "element"], ["F", pay["F"]], ["M", pay["M"]]]
    return rep


def cmd_qsym_check(a) -> Report:
    if a.pairs > ENVELOPE["pairs"]:
        _warn(f"{a.pairs} pairs is above the documented envelope of {ENVELOPE['pairs']}")
    rng = random.Random(a.seed)
    N = 2 * a.max_size
    failures = []
    for i in range(a.pairs):
        x = random_element(rng, a.max_size, N)
        y = random_element(rng, a.max_size, N, basis=rng.choice("FM"))
        z = random_element(rng, max(1, a.max_size // 2), N)
        checks = {
            "beldend": check_beldend(x, y),
            "tvidend": check_tvidend(x, y),
            "dendriform": check_dendriform_axioms(x, y, z),
            "unit": check_unit_rules(x),
        }
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            failures.append({"index": i, "failed": bad, "a": x.to_text(), "b": y.to_text(), "c": z.to_text()})
    rep = Report(
        "qsym check",
        {"pairs": a.pairs, "max_size": a.max_size, "seed": a.seed},
        verdict=not failures,
        payload={"pairs_checked": a.pairs, "failures": len(failures)},
        witnesses=failures[:5],
        scope=f"{a.pairs} seeded random pairs with parts of degree <= {a.max_size}, truncation degree {N}",
    )
    rep.text = [f"checked {a.pairs} random pairs (seed {a.seed}): {len(failures)} failures"]
    return rep


def cmd_kernel(a) -> Report:
    if a.n > ENVELOPE["kernel_n"]:
        _warn(f"n = {a.n} is above the documented envelope of {ENVELOPE['kernel_n']}")
    tag, n = a.stat, a.n
    if tag not in DESCENT_TAGS:
        raise UsageError(f"{tag} is not a descent statistic")
    span = kernel_component(tag, n)
    if a.generators == "f":
        gens = [g.to_text() for g in kernel_generators(tag, n)]
    else:
        km = kernel_in_m(tag, n)
        gens = [QSymElement("M", {km.ambient[k]: x for k, x in row.items()}, n).to_text() for _, row in sorted(km.rows.items())]
    payload = {
        "statistic": tag,
        "n": n,
        "basis": a.generators.upper(),
        "dimension": span.dim,
        "quotient_dimension": shuffle_algebra_dimension(tag, n),
        "generators": gens,
    }
    verdict = None
    if a.generators == "m":
        b = is_m_binomial(tag, n)
        payload["m_binomial"] = b.verdict
        payload["m_binomial_note"] = b.note()
    if tag == "Epk":
        kind = "F" if a.generators == "f" else "M"
        rel = arrow_relations(n, kind)
        rspan = epk_f_generators(n) if kind == "F" else epk_m_generators(n)
        payload["relations"] = [[list(j), list(k)] for j, k in rel]
        payload["relations_span_kernel"] = rspan.same_span(span)
        verdict = payload["relations_span_kernel"]
    rep = Report("kernel", {"stat": tag, "n": n, "generators": a.generators}, verdict=verdict, payload=payload,
                 scope=f"degree {n} component")
    rep.text = [f"kernel of {tag} in degree {n}: dimension {span.dim}"] + gens
    if "relations" in payload:
        rep.text.append("relations: " + ", ".join(f"{format_comp(j)} -> {format_comp(k)}" for j, k in rel))
    rep.tsv = [["generator"]] + [[g] for g in gens]
    return rep


def cmd_ideal_matrix(a) -> Report:
    if a.max_degree > ENVELOPE["degree"]:
        _warn(f"degree {a.max_degree} is above the documented envelope of {ENVELOPE['degree']}")
    tags = tuple(a.stats.split(",")) if a.stats else DESCENT_TAGS
    for t in tags:
        if t not in DESCENT_TAGS:
            raise UsageError(f"{t} is not a descent statistic")
    mat = ideal_matrix(a.max_degree, tags)
    d = mat.to_dict()
    witnesses = [dict(id=k, **v) for k, v in d["witnesses"].items()]
    payload = {"columns": d["columns"], "rows": d["rows"], "composition_criterion_agrees": d["composition_criterion_agrees"]}
    rep = Report(
        "ideal-matrix",
        {"max_degree": a.max_degree, "stats": list(tags)},
        verdict=d["composition_criterion_agrees"],
        payload=payload,
        witnesses=witnesses,
        scope=f"kernel generators times F basis elements, total degree <= {a.max_degree}",
    )
    tsv = mat.to_tsv().splitlines()
    rep.text = tsv
    rep.tsv = [line.split("\t") for line in tsv]
    return rep


def cmd_implications(a) -> Report:
    cert = {}
    for notion in NOTIONS:
        for tag in STAT_TAGS:
            cert[(notion, tag)] = certify(notion, tag, a.max_size, jobs=a.jobs).verdict
    mat = ideal_matrix(a.max_size)
    rows = implication_checks(cert, mat)
    failed = [{"implication": r[0], "statistic": r[1]} for r in rows if not r[2]]
    rep = Report(
        "implications",
        {"max_size": a.max_size},
        verdict=not failed,
        payload={
            "certified": [{"notion": n, "statistic": t, "verdict": v} for (n, t), v in cert.items()],
            "checked": len(rows),
        },
        witnesses=failed,
        scope=f"certifiers up to size {a.max_size}, ideal tests up to degree {a.max_size}",
    )
    rep.text = [f"{r[1]}\t{r[0]}\t{'ok' if r[2] else 'FAILS'}" for r in rows]
    rep.tsv = [[r[1], r[0], str(r[2]).lower()] for r in rows]
    return rep


def _cap(a):
    cap = a.n if a.cap is None else a.cap
    if a.n > ENVELOPE["enriched_n"]:
        _warn(f"n = {a.n} is above the documented envelope of {ENVELOPE['enriched_n']}")
    return cap


def cmd_enriched(a) -> Report:
    cap = _cap(a)
    params = {"what": a.what, "n": a.n, "cap": cap}
    scope = f"values 0..{cap} and infinity; rechecked at cap {cap + 1}"
    if a.what == "gamma":
        spec = ep.AlphabetSpec(a.preset, cap)
        params["preset"] = a.preset
        perms = [parse_perm(a.perm)] if a.perm else list(standard_perms(a.n))
        if a.perm:
            params["perm"] = list(perms[0])
        rows = []
        ok = True
        for p in perms:
            g = ep.gamma_perm(p, spec)
            row = {"perm": list(p), "gamma": g.to_text()}
            if a.preset == "epk":
                same = ep.at_caps(lambda q, c: ep.gamma_perm(q, c) == ep.K_poly(len(q), exterior_peaks(q), c), p, cap=cap)
                row["epk"] = list(exterior_peaks(p))
                row["equals_K"] = same
                ok &= same
            rows.append(row)
        rep = Report("enriched", params, verdict=ok if a.preset == "epk" else None, payload={"rows": rows}, scope=scope)
        rep.text = [f"{r['perm']}\t{r['gamma']}" for r in rows]
        rep.tsv = [[",".join(map(str, r["perm"])), r["gamma"]] for r in rows]
        return rep
    if a.what == "kpoly":
        lams = [parse_set(a.lam)] if a.lam is not None else list(enumerate_Ln(a.n))
        rows = []
        for lam in lams:
            k = ep.K_poly(a.n, lam, cap)
            same = ep.at_caps(lambda nn, lm, c: ep.K_poly(nn, lm, c) == ep.K_poly_concrete(nn, lm, c), a.n, lam, cap=cap)
            rows.append({"lambda": list(lam), "K": k.to_text(), "concrete_form_agrees": same})
        rep = Report("enriched", params, verdict=all(r["concrete_form_agrees"] for r in rows), payload={"rows": rows}, scope=scope)
        rep.text = [f"{{{','.join(map(str, r['lambda']))}}}\t{r['K']}" for r in rows]
        rep.tsv = [[",".join(map(str, r["lambda"])), r["K"]] for r in rows]
        return rep
    if a.what == "prodcheck":
        if a.pi is not None or a.sigma is not None:
            p, s = parse_perm(a.pi or ""), parse_perm(a.sigma or "")
            params.update(pi=list(p), sigma=list(s))
            cap = max(cap, len(p) + len(s))
            params["cap"] = cap
            ok = ep.at_caps(ep.product_rule_check, p, s, cap=cap)
        else:
            cap = max(cap, a.n)
            params["cap"] = cap
            ok = ep.at_caps(ep.product_rule_suite, a.n, cap=cap)
        example = ep.at_caps(ep.k_product_example, cap=max(cap, 3))
        rep = Report("enriched", params, verdict=ok and example,
                     payload={"product_rule": ok, "k_product_example": example}, scope=scope)
        rep.text = [f"product rule: {ok}", f"K_(2,{{2}}) K_(1,{{1}}) = K_(3,{{1,3}}) + K_(3,{{2}}) + K_(3,{{3}}): {example}"]
        return rep
    # lindep
    r = ep.at_caps(lambda n, c: ep.lindep_rank(n, c), a.n, cap=cap)
    size = len(enumerate_Ln(a.n))
    rep = Report("enriched", params, verdict=r == size, payload={"rank": r, "family_size": size}, scope=scope)
    rep.text = [f"rank {r} of {size} polynomials K_({a.n},L), L in L_{a.n}"]
    return rep


# --- displayed reference values ----------------------------------------------------

_STAT_DISPLAY = {
    (4, 1, 3, 9, 6, 8): {"Des": (1, 4), "Pk": (4,), "Lpk": (1, 4), "Rpk": (4, 6), "Epk": (1, 4, 6)},
    (1, 4, 3, 2, 9, 8): {"Des": (2, 3, 5), "Pk": (2, 5), "Lpk": (2, 5), "Rpk": (2, 5), "Epk": (2, 5)},
}
_SHUFFLE_DISPLAY = {
    "all": [(3, 1, 2, 6), (3, 2, 1, 6), (3, 2, 6, 1), (2, 3, 1, 6), (2, 3, 6, 1), (2, 6, 3, 1)],
    "left": [(3, 1, 2, 6), (3, 2, 1, 6), (3, 2, 6, 1)],
    "right": [(2, 3, 1, 6), (2, 3, 6, 1), (2, 6, 3, 1)],
}
_LACUNAR_DISPLAY = {1: [(1,)], 2: [(1,), (2,)], 3: [(1,), (2,), (3,), (1, 3)]}
_RELATION_DISPLAY = {
    ("F", 4): [((1, 3), (1, 1, 2))],
    ("F", 5): [((1, 4), (1, 1, 3)), ((1, 3, 1), (1, 1, 2, 1)), ((1, 1, 3), (1, 1, 1, 2)), ((2, 3), (2, 1, 2))],
    ("M", 4): [((1, 3), (1, 2, 1))],
    ("M", 5): [((1, 4), (1, 2, 2)), ((1, 3, 1), (1, 2, 1, 1)), ((1, 1, 3), (1, 1, 2, 1)), ((2, 3), (2, 2, 1))],
}
_COUNTEREXAMPLES = [
    ("LR", "Pk", 4, Instance("pair", (4, 2, 3), (1,)), Instance("pair", (2, 3, 4), (1,))),
    ("head-graft", "Pk", 4, Instance("graft", (2,), (3, 1)), Instance("graft", (2,), (3, 4))),
    ("head-graft", "maj", 5, Instance("graft", (1,), (5, 4, 2, 3)), Instance("graft", (1,), (3, 4, 5, 2))),
]
RPK_DISPLAY = {(3, 2): 1, (2, 3): 1, (2, 2, 1): 1, (1, 2, 2): -1, (1, 1, 3): -1, (1, 1, 2, 1): -1}
MAJ_DISPLAY = {(1, 1, 1, 2): 1, (1, 3, 1): -1}
# expected ideal verdicts per (statistic, operation): (left, right)
IDEAL_DISPLAY = {
    **{(t, op): (True, True) for t in ("Des", "Comp", "des", "DesMaj", "Epk") for op in ("product", "prec", "succeq", "bel", "tvi")},
    ("maj", "product"): (True, True), ("maj", "prec"): (False, False), ("maj", "succeq"): (False, False),
    ("maj", "bel"): (False, True), ("maj", "tvi"): (False, True),
    ("Lpk", "product"): (True, True), ("Lpk", "prec"): (True, True), ("Lpk", "succeq"): (True, True),
    ("Lpk", "bel"): (True, True), ("Lpk", "tvi"): (True, False),
    ("Rpk", "product"): (True, True), ("Rpk", "prec"): (True, False), ("Rpk", "succeq"): (True, False),
    ("Rpk", "bel"): (False, True), ("Rpk", "tvi"): (True, True),
    ("Pk", "product"): (True, True), ("Pk", "prec"): (True, False), ("Pk", "succeq"): (True, False),
    ("Pk", "bel"): (False, True), ("Pk", "tvi"): (True, False),
}


def _sets(xs):
    return [list(x) for x in xs]


def reference_tables() -> list:
    """Recompute every displayed object; each entry records computed and
    displayed values and whether they match."""
    out = []

    def add(name, computed, displayed, note=""):
        entry = {"table": name, "computed": computed, "displayed": displayed, "matches": computed == displayed}
        if note:
            entry["note"] = note
        out.append(entry)

    for p, want in _STAT_DISPLAY.items():
        st = all_statistics(p)
        add(f"statistics {p}", {t: list(st[t]) for t in want}, {t: list(v) for t, v in want.items()})
    sh = {"all": shuffles((3, 1), (2, 6)), "left": left_shuffles((3, 1), (2, 6)), "right": right_shuffles((3, 1), (2, 6))}
    for k in ("all", "left", "right"):
        add(f"{k} shuffles of (3,1) and (2,6)", _sets(sh[k]), _sets(_SHUFFLE_DISPLAY[k]))
    for n, want in _LACUNAR_DISPLAY.items():
        add(f"L_{n}", sorted(_sets(enumerate_Ln(n))), sorted(_sets(want)))
    for (kind, n), want in _RELATION_DISPLAY.items():
        add(f"relations {kind} size {n}", sorted([list(j), list(k)] for j, k in arrow_relations(n, kind)),
            sorted([list(j), list(k)] for j, k in want))
    pk = [sorted(_sets(stat_multiset("Pk", right_shuffles(p, (1,))).elements())) for p in ((4, 2, 3), (2, 3, 4))]
    add("Pk over right shuffles of (4,2,3),(1) and (2,3,4),(1)", pk, [[[2]], [[]]])
    for notion, tag, size, x, y in _COUNTEREXAMPLES:
        r = certify(notion, tag, size)
        add(f"{notion} {tag} counterexample {x.describe()} vs {y.describe()}",
            [r.verdict, r.has_violating_pair(x, y)], [False, True])
    add("Epk quotient dimensions n<=9", [shuffle_algebra_dimension("Epk", n) for n in range(1, 10)],
        [fibonacci(n + 2) - 1 for n in range(1, 10)])

    N = 5
    m = F((1, 2), N) - F((3,), N)
    val = prec(m, F((1,), N))
    add("(F_(1,2) - F_(3)) < F_(1)", val.to_text(), QSymElement("F", RPK_DISPLAY, N).to_text(),
        note="degrees differ: the left side has degree 4 and the displayed combination degree 5")
    w = is_op_ideal("maj", "prec", "left", 5).witness
    add("maj witness a < m", w.result.to_text() if w else None, QSymElement("F", MAJ_DISPLAY, 5).to_text())

    mat = ideal_matrix(6)
    comp = {f"{t}:{op}": [mat.verdict(t, op, "left"), mat.verdict(t, op, "right")] for (t, op) in IDEAL_DISPLAY}
    add("ideal matrix degree 6", comp, {f"{t}:{op}": list(v) for (t, op), v in IDEAL_DISPLAY.items()})

    neg = {t: [n for n in range(1, 7) if not is_m_binomial(t, n).verdict] for t in ("maj", "DesMaj")}
    pos = all(is_m_binomial(t, n).verdict for t in ("Des", "des", "Epk") for n in range(1, 7))
    add("M-binomial: Des, des, Epk yes; maj, (des,maj) no (n<=6)", [pos, bool(neg["maj"]), bool(neg["DesMaj"])],
        [True, True, True], note=f"first negative n: maj {neg['maj'][:1]}, (des,maj) {neg['DesMaj'][:1]}")
    k_ex = ep.k_product_example(3) and ep.k_product_example(4)
    add("K_(2,{2}) K_(1,{1}) = K_(3,{1,3}) + K_(3,{2}) + K_(3,{3})", k_ex, True)
    add("lindep rank n<=6", [ep.lindep_rank(n) for n in range(7)], [len(enumerate_Ln(n)) for n in range(7)])
    return out


def cmd_tables(a) -> Report:
    tables = reference_tables()
    ok = all(t["matches"] for t in tables)
    mism = [{"table": t["table"], "computed": t["computed"], "displayed": t["displayed"]} for t in tables if not t["matches"]]
    rep = Report("tables", {"which": a.which}, verdict=ok, payload={"tables": tables}, witnesses=mism,
                 scope="every displayed table, recomputed")
    rep.text = [f"{'match' if t['matches'] else 'MISMATCH'}\t{t['table']}" for t in tables]
    rep.tsv = [["table", "matches"]] + [[t["table"], str(t["matches"]).lower()] for t in tables]
    return rep


# --- argument parsing -----------------------------------------------------------------


class _Parser_(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "tsv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--out-dir", default=os.environ.get(OUTPUT_DIR_ENV),
                        help=f"also write the report there (default: ${OUTPUT_DIR_ENV})")

    p = _Parser_(prog="shufflelab", description="Shuffle-compatibility and dendriform checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser_)

    s = sub.add_parser("stats", parents=[common], help="all statistics of a permutation")
    s.add_argument("perm")
    s.set_defaults(fn=cmd_stats)

    s = sub.add_parser("shuffles", parents=[common], help="shuffles of two disjoint permutations")
    s.add_argument("pi")
    s.add_argument("sigma")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--left", action="store_true")
    g.add_argument("--right", action="store_true")
    s.set_defaults(fn=cmd_shuffles)

    s = sub.add_parser("certify", parents=[common], help="brute-force compatibility certificate")
    s.add_argument("--notion", choices=NOTIONS, required=True)
    s.add_argument("--stat", choices=STAT_TAGS, required=True)
    s.add_argument("--max-size", type=int, default=6)
    s.set_defaults(fn=cmd_certify)

    s = sub.add_parser("lacunar", parents=[common], help="the nonempty lacunar subsets of [n]")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=cmd_lacunar)

    s = sub.add_parser("qsym", help="quasisymmetric function computations")
    qs = s.add_subparsers(dest="qsym_command", required=True, parser_class=_Parser_)
    q = qs.add_parser("eval", parents=[common], help="evaluate an expression in F/M elements")
    q.add_argument("expr")
    q.add_argument("--degree", type=int, default=6)
    q.add_argument("--basis", choices=("F", "M"), default="F")
    q.set_defaults(fn=cmd_qsym_eval)
    q = qs.add_parser("check", parents=[common], help="randomized dendriform and runic identities")
    q.add_argument("--pairs", type=int, default=200)
    q.add_argument("--max-size", type=int, default=5)
    q.set_defaults(fn=cmd_qsym_check)

    s = sub.add_parser("kernel", parents=[common], help="kernel of a descent statistic")
    s.add_argument("--stat", choices=DESCENT_TAGS, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--generators", choices=("f", "m"), default="f")
    s.set_defaults(fn=cmd_kernel)

    s = sub.add_parser("ideal-matrix", parents=[common], help="ideal verdicts for all descent statistics")
    s.add_argument("--max-degree", type=int, default=6)
    s.add_argument("--stats", help="comma-separated statistics (default: all descent statistics)")
    s.set_defaults(fn=cmd_ideal_matrix)

    s = sub.add_parser("implications", parents=[common], help="cross-check certifier and ideal verdicts")
    s.add_argument("--max-size", type=int, default=6)
    s.set_defaults(fn=cmd_implications)

    s = sub.add_parser("enriched", parents=[common], help="enriched partitions and K polynomials")
    s.add_argument("what", choices=("gamma", "kpoly", "prodcheck", "lindep"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cap", type=int, help="value cap V (default n)")
    s.add_argument("--perm", help="single permutation for gamma")
    s.add_argument("--preset", choices=ep.PRESETS, default="epk")
    s.add_argument("--lam", help="subset of [n] for kpoly (default: every member of L_n)")
    s.add_argument("--pi", help="first permutation for prodcheck")
    s.add_argument("--sigma", help="second permutation for prodcheck")
    s.set_defaults(fn=cmd_enriched)

    s = sub.add_parser("tables", parents=[common], help="recompute the displayed reference tables")
    s.add_argument("which", choices=("paper",))
    s.set_defaults(fn=cmd_tables)
    return p


def schema_for(command: str) -> dict:
    """The published JSON schema for a report's ``command`` field."""
    from importlib import resources

    name = command.replace(" ", "-") + ".schema.json"
    return json.loads(resources.files("shufflelab").joinpath("schemas", name).read_text())


def _check_sizes(a):
    for name in ("n", "max_size", "max_degree", "degree", "pairs"):
        v = getattr(a, name, None)
        if v is not None and v < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be nonnegative")
    if getattr(a, "jobs", 1) < 1:
        raise UsageError("--jobs must be at least 1")


def _report_name(rep: Report, fmt: str) -> str:
    base = rep.command.replace(" ", "-")
    if rep.command == "enriched":
        base += "-" + rep.parameters["what"]
    ext = {"json": "json", "tsv": "tsv", "text": "txt"}[fmt]
    return f"{base}.{ext}"


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        _check_sizes(a)
        rep = a.fn(a)
    except (UsageError, ValueError) as e:
        print(f"shufflelab: error: {e}", file=sys.stderr)
        return 2
    text = rep.render(a.output)
    out.write(text)
    if a.out_dir:
        os.makedirs(a.out_dir, exist_ok=True)
        with open(os.path.join(a.out_dir, _report_name(rep, a.output)), "w") as fh:
            fh.write(text)
    return rep.exit_code()


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
