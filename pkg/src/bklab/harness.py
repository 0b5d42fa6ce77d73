"""Check suites over field descriptors and their reports."""

from __future__ import annotations

import ast
import json
import re
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import __version__
from .forms import RamificationData, pairing_rank
from .milnor import (SymbolSum, filtration_report, k1_brute_oracle, proposition_check,
                     rho_property_checks)
from .oracle import (AbsoluteExtension, KummerExtension, OracleError, bockstein_exactness_check,
                     cor_res_check, cyclotomic_extension, hilbert_q2_closed, hilbert_symbol,
                     is_norm, k2_trivial, norm_triviality_check, p_brauer_anchor)
from .padic import LocalField, PrecisionError, load_descriptor, shipped_names, zeta_p
from .residue import ResidueField, TruncationWindow

SUITES = ("proposition", "step1_pairing", "oracle_crosscheck", "norm_argument", "bockstein")
PASS, FAIL, UNDECIDED, VACUOUS = "pass", "fail", "undecided", "vacuous"


@dataclass
class SuiteConfig:
    fields: list
    suite: str = "all"
    qs: tuple = (1, 2)
    seed: int = 0
    precision: int | None = None
    window: int = 6
    samples: int = 200
    clause_samples: int = 50
    sweep: int = 100

    def __post_init__(self):
        if not self.fields:
            raise ValueError("no field descriptors given")
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {SUITES + ('all',)}")
        for q in self.qs:
            if q not in (1, 2):
                raise ValueError("q must be 1 or 2")

    def suites(self):
        return SUITES if self.suite == "all" else (self.suite,)

    def to_dict(self) -> dict:
        return {"fields": [str(f) for f in self.fields], "suite": self.suite, "q": list(self.qs),
                "seed": self.seed, "precision": self.precision, "window": self.window,
                "samples": self.samples, "clause_samples": self.clause_samples, "sweep": self.sweep}


@dataclass
class Check:
    field: str
    suite: str
    clause: str
    status: str
    evidence: dict
    timing: float = 0.0

    def to_dict(self) -> dict:
        return {"field": self.field, "suite": self.suite, "clause": self.clause,
                "status": self.status, "evidence": _plain(self.evidence)}


@dataclass
class CheckReport:
    config: SuiteConfig
    checks: list = dc_field(default_factory=list)
    tables: list = dc_field(default_factory=list)

    @property
    def exit_code(self) -> int:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return 1
        if UNDECIDED in statuses:
            return 2
        return 0


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# --- suites -------------------------------------------------------------------

def _proposition(K, cfg, out, report):
    for q in cfg.qs:
        res = proposition_check(K, q, samples=cfg.clause_samples, seed=cfg.seed)
        report.tables.append({"field": K.name, "q": q, "rows": res["rows"]})
        for c in res["clauses"]:
            out(c["clause"], c["status"], c["evidence"])
        rp = rho_property_checks(K, q, samples=cfg.sweep, seed=cfg.seed)
        out(f"rho_m lift independence / rho_0 prime dependence q={q}", _status(rp["pass"]), rp)
    oracle = k1_brute_oracle(K)
    total = sum(r["expected"] for t in report.tables if t["field"] == K.name and t["q"] == 1
                for r in t["rows"])
    if 1 in cfg.qs:
        out("sum dim G_m^1 = dim K^x/p", _status(total == oracle["total"]),
            {"graded_total": total, "oracle_total": oracle["total"]})


def _step1(K, cfg, out, report):
    if not K.eprime_integral:
        out("Step I pairing", VACUOUS, {"reason": f"e' = {K.eprime} is not an integer"})
    else:
        k = ResidueField(K.p, K.f, 1)
        ram = RamificationData(K.p, K.e, k.const(K.eprime_constant_a().constant_value))
        left = TruncationWindow(k, hi=cfg.window, lo=-2)
        right = TruncationWindow(k, hi=cfg.window + 2, lo=-(cfg.window + 2))
        for q in cfg.qs:
            for m in range(1, int(K.eprime)):
                pr = pairing_rank(m, q, ram, k, left, right)
                out(f"Step I pairing q={q} m={m} over {k}", _status(pr.nondegenerate),
                    {"left_dim": pr.left_dim, "right_dim": pr.right_dim, "rank": pr.rank,
                     "left_quotient_dim": pr.left_quotient_dim,
                     "degenerate_vectors": len(pr.degenerate_vectors)})
    if zeta_p(K) is None:
        out("Step I anchor U_{e'}h^2 = pBr", VACUOUS, {"reason": "zeta_p not in K"})
    else:
        anchor = p_brauer_anchor(K)
        out("Step I anchor U_{e'}h^2 = pBr", _status(anchor["pass"]), anchor)


def _crosscheck(K, cfg, out, report):
    import random
    rng = random.Random(cfg.seed)
    try:
        cyclotomic_extension(K)
    except OracleError as exc:
        out("h_2 oracle equivalence", VACUOUS, {"reason": str(exc)})
        return
    mism, closed_bad, n, low = [], [], 0, 0
    for _ in range(cfg.samples):
        a = K.random_element(rng, -2, 3)
        b = K.random_element(rng, -2, 3)
        S = SymbolSum.symbol(a, b)
        try:
            t_m = filtration_report(S, verify=False).trivial
            t_h = k2_trivial(S)
        except PrecisionError:
            low += 1
            continue
        n += 1
        if t_m != t_h:
            mism.append(S.serialize())
        if (K.p, K.e, K.f) == (2, 1, 1) and hilbert_q2_closed(a, b) != hilbert_symbol(a, b).sign:
            closed_bad.append(S.serialize())
    out("h_2 oracle equivalence (milnor vs Hilbert)", _status(n > 0 and not mism),
        {"samples": n, "skipped_low_precision": low, "mismatches": mism})
    if (K.p, K.e, K.f) == (2, 1, 1):
        out("Hilbert closed-form cross-check", _status(n > 0 and not closed_bad),
            {"samples": n, "mismatches": closed_bad})
    stein, done, skipped = [], 0, 0
    for _ in range(cfg.samples // 4):
        a = K.random_element(rng, -2, 3)
        one_minus = K.one() - a
        if one_minus.is_zero():
            continue
        S = SymbolSum.symbol(a, one_minus)
        try:
            bad = not filtration_report(S, verify=False).trivial or not k2_trivial(S)
        except PrecisionError:
            # 1 - a keeps few digits when a is close to 1
            skipped += 1
            continue
        done += 1
        if bad:
            stein.append(S.serialize())
    out("Steinberg {a, 1-a} trivial", _status(done > 0 and not stein),
        {"samples": done, "skipped_low_precision": skipped, "failures": stein})
    if zeta_p(K) is not None:
        direct = []
        for _ in range(10):
            a = K.random_element(rng, -1, 2)
            b = K.random_element(rng, -1, 2)
            try:
                if is_norm(K, b, a) != hilbert_symbol(a, b).trivial:
                    direct.append((a.serialize(), b.serialize()))
            except ValueError:
                continue
        out("bilinear Hilbert matrix vs direct norm test", _status(not direct),
            {"samples": 10, "failures": direct})


def _norm(K, cfg, out, report):
    n = cfg.samples // 2
    ext = KummerExtension(K, K.pi())
    r = cor_res_check(ext, 1, samples=n, seed=cfg.seed)
    out(f"cor∘res = ×{K.p} on K(pi^(1/{K.p}))", _status(r["pass"]), r)
    if K.e * K.f > 1:
        ext = AbsoluteExtension(K)
        r = cor_res_check(ext, 1, samples=n, seed=cfg.seed)
        out(f"cor∘res = ×{ext.degree} for K/Q_{K.p}", _status(r["pass"]), r)
        if zeta_p(K) is not None and zeta_p(ext.K) is not None and 2 in cfg.qs:
            r = cor_res_check(ext, 2, samples=n, seed=cfg.seed)
            out(f"projection formula (x, y)_K = (N x, y)_Q{K.p}", _status(r["pass"]), r)
    if zeta_p(K) is not None and 2 in cfg.qs:
        r = norm_triviality_check(K, samples=n // 2, seed=cfg.seed)
        out("norm triviality (a, N(x)) = 1", _status(r["pass"] and r["checked"] > 0), r)


def _bockstein(K, cfg, out, report):
    if K.p != 2:
        out("Bockstein exactness n=2 q=1", VACUOUS, {"reason": "p != 2"})
        return
    r = bockstein_exactness_check(K)
    out("Bockstein exactness n=2 q=1", _status(r["pass"]), r)


_RUNNERS = {"proposition": _proposition, "step1_pairing": _step1, "oracle_crosscheck": _crosscheck,
            "norm_argument": _norm, "bockstein": _bockstein}


def resolve_field(field, precision=None) -> LocalField:
    if isinstance(field, LocalField):
        return field
    return load_descriptor(field, precision)


def run_suite(config: SuiteConfig) -> CheckReport:
    fields = [resolve_field(f, config.precision) for f in config.fields]
    report = CheckReport(config)
    for K in fields:
        for suite in config.suites():
            def out(clause, status, evidence, suite=suite, K=K):
                report.checks.append(Check(K.name, suite, clause, status, evidence,
                                           round(time.perf_counter() - start, 4)))
            start = time.perf_counter()
            try:
                _RUNNERS[suite](K, config, out, report)
            except PrecisionError as exc:
                out(f"{suite} (aborted)", UNDECIDED, {"error": str(exc), "hint": "raise N (--precision) or D (--window)"})
            except (OracleError, NotImplementedError) as exc:
                out(f"{suite} (aborted)", UNDECIDED, {"error": str(exc), "hint": "unsupported at this precision or shape"})
    return report


def emit_report(report: CheckReport, fmt: str = "text") -> str:
    if fmt == "structured":
        doc = {
            "version": __version__,
            "seed": report.config.seed,
            "config": report.config.to_dict(),
            "exit_code": report.exit_code,
            "tables": _plain(report.tables),
            "checks": [c.to_dict() for c in report.checks],
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    if fmt != "text":
        raise ValueError("format must be text or structured")
    lines = [f"bklab {__version__}  seed={report.config.seed}"]
    for t in report.tables:
        lines.append("")
        lines.append(f"{t['field']}  q={t['q']}")
        lines.append(f"{'m':>3}  {'regime':<15}{'dim G_m':>8}{'gr_m':>6}  status")
        for r in t["rows"]:
            lines.append(f"{r['m']:>3}  {r['regime']:<15}{r['expected']:>8}{r['observed']:>6}  {r['status']}")
    lines.append("")
    for c in report.checks:
        lines.append(f"[{c.status.upper():>9}] {c.field} | {c.suite} | {c.clause}  ({c.timing:.2f}s)")
        if c.status in (FAIL, UNDECIDED):
            lines.append("            " + json.dumps(_plain(c.evidence), sort_keys=True, ensure_ascii=False)[:2000])
    counts = {s: sum(c.status == s for c in report.checks) for s in (PASS, FAIL, UNDECIDED, VACUOUS)}
    lines.append("")
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    return "\n".join(lines)


def fields_menu() -> list[dict]:
    out = []
    for name in shipped_names():
        K = load_descriptor(name)
        out.append({"name": name, "field": K.name, "p": K.p, "e": K.e, "f": K.f,
                    "eprime": str(K.eprime), "zeta_p": zeta_p(K) is not None, "precision": K.N})
    return out


# --- symbol grammar -------------------------------------------------------------

_SYMBOL = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*\{([^{}]*)\}")


def _eval_entry(node, K: LocalField):
    if isinstance(node, ast.Expression):
        return _eval_entry(node.body, K)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return K(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return K.pi()
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "u":
        if len(node.args) != 1 or not isinstance(node.args[0], ast.Constant):
            raise ValueError("u(...) takes one residue code")
        return K.teichmuller(int(node.args[0].value))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_entry(node.operand, K)
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not isinstance(node.right, ast.Constant) and not (
                    isinstance(node.right, ast.UnaryOp) and isinstance(node.right.operand, ast.Constant)):
                raise ValueError("exponents must be integer literals")
            exp = ast.literal_eval(node.right)
            return _eval_entry(node.left, K) ** int(exp)
        left, right = _eval_entry(node.left, K), _eval_entry(node.right, K)
        ops = {ast.Add: left.__add__, ast.Sub: left.__sub__, ast.Mult: left.__mul__, ast.Div: left.__truediv__}
        for op, fn in ops.items():
            if isinstance(node.op, op):
                return fn(right)
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


def parse_symbol_sum(text: str, K: LocalField) -> SymbolSum:
    """Parse '{a, b} + 2{c, d} - {e, f}' with entries in integers, pi, u(g), + - * / ^."""
    terms = []
    rest = _SYMBOL.sub("", text).strip()
    if rest:
        raise ValueError(f"cannot parse {rest!r}")
    q = None
    for sign, coef, body in _SYMBOL.findall(text):
        c = int(coef) if coef else 1
        c = -c if sign == "-" else c
        entries = [e.strip().replace("^", "**") for e in body.split(",")]
        vals = tuple(_eval_entry(ast.parse(e, mode="eval"), K) for e in entries)
        if q is not None and len(vals) != q:
            raise ValueError("symbols of different degrees in one sum")
        q = len(vals)
        terms.append((c, vals))
    if q is None:
        raise ValueError("no symbol found")
    return SymbolSum(K, q, terms)
