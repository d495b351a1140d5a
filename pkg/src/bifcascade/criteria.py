"""The function H and the combinatorial conditions on rotation-number sequences.

Everything touching products of denominators runs in log space on the shared
mpmath context, so sequences like q_{m+1} = 2^q_m stay exact in the exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DomainError
from .geometry import GeometryConstants, log_bifurcation_radius
from .rotation import MP, RotationNumber, as_mpf, log_of

SATISFIED = "satisfied"
VIOLATED = "violated"
UNDECIDABLE = "undecidable-at-finite-depth"

# Below this log u, H(u) = 16u to within binary64 resolution.
_TINY_LOG = -40.0


def _num(x):
    """JSON-friendly number: float when representable, else an mpmath string."""
    if x is None:
        return None
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x if abs(x) < 2 ** 53 else str(x)
    x = MP.mpf(x)
    if MP.isinf(x) or MP.isnan(x):
        return str(float(x))
    if x != 0 and (abs(x) > MP.mpf("1e300") or abs(x) < MP.mpf("1e-300")):
        return MP.nstr(x, 17)
    return float(x)


@dataclass(frozen=True)
class ConditionReport:
    name: str
    quantities: tuple
    verdict: str
    margin: float
    subconditions: dict = field(default_factory=dict)
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "margin": _num(self.margin),
            "quantities": [{k: _num(v) if not isinstance(v, str) else v for k, v in row.items()}
                           for row in self.quantities],
            "subconditions": {k: v.to_json() for k, v in self.subconditions.items()},
            "notes": self.notes,
        }


# ---------------------------------------------------------------- H

def _h_tail_bound(u: float, k: int) -> float:
    u2 = u * u
    return 8.0 * (u ** (2 * k + 2) / (1 - u2) + u ** (2 * k + 1) / ((1 - u) * (1 - u2)))


def log_h_eval(u: float, rel_tol: float = 1e-12) -> float:
    """log H(u) for 0 < u < 1."""
    if not 0 < u < 1:
        raise DomainError(f"log H needs 0 < u < 1, got {u}")
    total = math.log(16.0 * u)
    k = 1
    while True:
        total += 8.0 * (math.log1p(u ** (2 * k)) - math.log1p(-(u ** (2 * k - 1))))
        if _h_tail_bound(u, k) <= rel_tol / 2:
            return total
        k += 1


def h_eval(u, rel_tol: float = 1e-12) -> float:
    """H(u) = 16u prod_k (1+u^2k)^8 / (1-u^(2k-1))^8; inf once it overflows binary64."""
    u = float(u)
    if not 0 <= u < 1:
        raise DomainError(f"H is defined on [0, 1), got {u}")
    if u == 0:
        return 0.0
    lh = log_h_eval(u, rel_tol)
    return math.inf if lh > 709 else math.exp(lh)


def h_upper_bound(u: float) -> float:
    """(1/16) exp(-pi^2 / log u)."""
    return math.exp(-math.pi ** 2 / math.log(u)) / 16.0


def _log_h_from_log(log_u):
    """log H(u) from log u, valid for tiny u; -inf for u = 0."""
    if log_u == MP.ninf:
        return MP.ninf
    if log_u < _TINY_LOG:
        return MP.log(16) + log_u
    return MP.mpf(log_h_eval(float(MP.exp(log_u))))


# ---------------------------------------------------------------- trends

def _tail_split(values):
    n_tail = max(1, math.ceil(len(values) / 3))
    return values[:-n_tail], values[-n_tail:]


def trend(values: Sequence) -> str:
    """'decaying', 'persistent' or 'unclear', judged on the last third (at least two terms)."""
    vals = [MP.mpf(v) for v in values]
    if len(vals) < 2:
        return "unclear"
    n_tail = max(2, math.ceil(len(vals) / 3))
    head, tail = vals[:-n_tail], vals[-n_tail:]
    if all(b <= a / 2 for a, b in zip(tail, tail[1:])):
        return "decaying"
    ref = max(head) if head else tail[0]
    if min(tail) > 0 and min(tail) >= ref / 2:
        return "persistent"
    return "unclear"


def _log_abs(t: RotationNumber):
    return t.log_abs()


def _check(ts):
    out = [RotationNumber.parse(t) for t in ts]
    return out


def _log_prods(ts, start: int = 0):
    """log(q_start ... q_{m-1}) for m = start .. len(ts)."""
    out = [MP.mpf(0)]
    for t in ts[start:]:
        out.append(out[-1] + log_of(t.q))
    return out


def _exp_or_zero(lx):
    if lx == MP.ninf or lx < -10 ** 6:
        return MP.mpf(0)
    return MP.exp(lx)


# ---------------------------------------------------------------- series conditions

def milnor_terms(ts) -> list:
    """a_m = |t_m|^(1/q_{m-1}) for m >= 1, as mpf."""
    ts = _check(ts)
    return [_exp_or_zero(_log_abs(ts[m]) / as_mpf(ts[m - 1].q)) for m in range(1, len(ts))]


def milnor_series(ts) -> ConditionReport:
    ts = _check(ts)
    if len(ts) < 2:
        raise ValueError("need at least two rotation numbers")
    terms = milnor_terms(ts)
    rows, partial = [], MP.mpf(0)
    for m, a in enumerate(terms, start=1):
        partial += a
        rows.append({"m": m, "term": a, "partial_sum": partial})
    kind = trend(terms)
    verdict = {"decaying": "converging", "persistent": "diverging"}.get(kind, UNDECIDABLE)
    return ConditionReport("milnor_series", tuple(rows), verdict, float(terms[-1]),
                           notes=f"trend of the last third: {kind}")


def theorem2_condition(ts, a: float, Q: float = 1) -> ConditionReport:
    ts = _check(ts)
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    terms = milnor_terms(ts) if len(ts) >= 2 else []
    rows = [{"m": m, "term": v} for m, v in enumerate(terms, start=1)]
    if len(terms) < 2:
        return ConditionReport("theorem2_condition", tuple(rows), UNDECIDABLE, math.nan,
                               notes="too few terms for a limsup proxy")
    _, tail = _tail_split(terms)
    proxy = max(tail)
    log_q_max = max(log_of(t.q) for t in ts)
    q_ok = log_q_max > MP.log(Q)
    ok = proxy < a and q_ok
    return ConditionReport(
        "theorem2_condition", tuple(rows), SATISFIED if ok else VIOLATED, float(a - proxy),
        subconditions={},
        notes=f"limsup proxy {MP.nstr(proxy, 12)}; max q exceeds {Q}: {bool(q_ok)}")


# ---------------------------------------------------------------- three-part condition

def log_theta(ts, k: int, m: int, C: float):
    """log theta_{k,m}; the product q_k...q_{m-1} is 1 when m = k."""
    logs = [log_of(t.q) for t in ts]
    log_p = MP.fsum(logs[k:m]) if m > k else MP.mpf(0)
    p = _exp_big(log_p)
    first = log_p + logs[m]
    second = p * MP.log(4) - log_p - logs[m]
    return MP.log(C) + _log_abs(ts[m + 1]) + max(first, second)


def _exp_big(lx):
    # exp of a log-product; mpmath keeps arbitrary exponents
    return MP.exp(lx)


def _log_u(log_th, q):
    return log_th / as_mpf(q)


def theorem5_conditions(ts, k: int, constants: Optional[GeometryConstants] = None
                        ) -> ConditionReport:
    constants = constants or GeometryConstants()
    ts = _check(ts)
    if not 0 <= k < len(ts):
        raise ValueError("need 0 <= k < len(ts)")

    # (E0): log(1/|t_{m+1}|) / (q_0...q_{m-1})
    lp = _log_prods(ts)
    e_rows, e_vals = [], []
    for m in range(len(ts) - 1):
        v = -_log_abs(ts[m + 1]) / _exp_big(lp[m])
        e_vals.append(v)
        e_rows.append({"m": m, "value": v})
    kind = trend(e_vals)
    e_verdict = {"persistent": SATISFIED, "decaying": VIOLATED}.get(kind, UNDECIDABLE)
    e0 = ConditionReport("E0", tuple(e_rows), e_verdict,
                         float(min(e_vals)) if e_vals else math.nan,
                         notes=f"liminf proxy; trend {kind}")

    # (Y0): |t_m| q_0...q_{m-1}, compared through its log
    y_logs = [_log_abs(t) + lp[m] for m, t in enumerate(ts)]
    y_rows = tuple({"m": m, "log_value": v} for m, v in enumerate(y_logs))
    if len(y_logs) < 2:
        y_verdict = UNDECIDABLE
    else:
        n_tail = max(2, math.ceil(len(y_logs) / 3))
        head, tail = y_logs[:-n_tail], y_logs[-n_tail:]
        log2 = MP.log(2) * (1 - MP.mpf(10) ** -12)
        if all(b - a >= log2 for a, b in zip(tail, tail[1:])):
            y_verdict = VIOLATED
        elif max(tail) <= max(head or tail[:1]) + log2:
            y_verdict = SATISFIED
        else:
            y_verdict = UNDECIDABLE
    y0 = ConditionReport("Y0", y_rows, y_verdict, float(max(y_logs)),
                         notes="margin is the log of the sup proxy over the prefix")

    # (S0)
    C = constants.C_big
    log_us = []
    for m in range(k, len(ts) - 1):
        log_us.append(_log_u(log_theta(ts, k, m, C), ts[m].q))
    s_rows, terms = [], []
    partial = MP.mpf(0)
    bad = any(lu >= 0 for lu in log_us)
    for i in range(len(log_us) - 1):
        m = k + i
        lu, lu1 = log_us[i], log_us[i + 1]
        if lu >= 0 or lu1 >= 0:
            s_rows.append({"m": m, "log_u": lu, "log_u_next": lu1, "term": math.inf})
            continue
        u = _exp_or_zero(lu)
        term = u / (as_mpf(ts[m].q) * (1 - u)) * _exp_or_zero(_log_h_from_log(lu1))
        partial += term
        terms.append(term)
        s_rows.append({"m": m, "log_u": lu, "u": u, "term": term, "partial_sum": partial})
    if bad:
        s_verdict = VIOLATED
    elif len(terms) < 2:
        s_verdict = UNDECIDABLE
    else:
        kind = trend(terms)
        s_verdict = {"decaying": SATISFIED, "persistent": VIOLATED}.get(kind, UNDECIDABLE)
    s0 = ConditionReport("S0", tuple(s_rows), s_verdict,
                         float(terms[-1]) if terms else math.nan,
                         notes="margin is the last term, a remainder heuristic")

    subs = {"E0": e0, "Y0": y0, "S0": s0}
    verdicts = [r.verdict for r in subs.values()]
    if VIOLATED in verdicts:
        verdict = VIOLATED
    elif all(v == SATISFIED for v in verdicts):
        verdict = SATISFIED
    else:
        verdict = UNDECIDABLE
    return ConditionReport("theorem5_conditions", tuple(s_rows), verdict, s0.margin, subs,
                           notes=f"k={k}, C={C}")


# ---------------------------------------------------------------- level quantities

@dataclass(frozen=True)
class LemmaLevel:
    m: int
    log_n: object
    log_d_tilde: object
    log_d: object
    log_theta_bar: object
    log_u_bar: object

    @property
    def u_bar(self):
        return _exp_or_zero(self.log_u_bar) if self.log_u_bar < 0 else MP.exp(self.log_u_bar)


def lemma_levels(ts, n: int, constants: GeometryConstants) -> list:
    ts = _check(ts)
    lp = _log_prods(ts)
    out = []
    log_pre = MP.log(320) - MP.log(constants.beta)
    for m in range(len(ts) - 1):
        log_n = MP.log(n) + lp[m]
        n_m = n * int(ts_prod_small(ts, m)) if lp[m] < 40 else MP.exp(log_n)
        ldt = log_bifurcation_radius(ts[m], n_m, constants)
        ld = log_pre - 2 * log_of(ts[m].q) + _log_abs(ts[m + 1])
        lth = MP.log(200 * constants.beta) + ld - ldt
        out.append(LemmaLevel(m, log_n, ldt, ld, lth, lth / as_mpf(ts[m].q)))
    return out


def ts_prod_small(ts, m: int) -> int:
    p = 1
    for t in ts[:m]:
        p *= t.q_int
    return p


def lemma_quantities(ts, n: int = 1, constants: Optional[GeometryConstants] = None,
                     Q: float = 1) -> ConditionReport:
    constants = constants or GeometryConstants()
    ts = _check(ts)
    if len(ts) < 2:
        raise ValueError("need at least two rotation numbers")
    levels = lemma_levels(ts, n, constants)
    L = constants.budget
    rows = []
    for lv in levels:
        rows.append({"m": lv.m, "log_n": lv.log_n, "d_tilde": _exp_or_zero(lv.log_d_tilde),
                     "log_d_tilde": lv.log_d_tilde, "d": _exp_or_zero(lv.log_d),
                     "log_d": lv.log_d, "log_theta_bar": lv.log_theta_bar,
                     "u_bar": lv.u_bar})

    # (0)
    q_rows = [{"m": m, "log_q": log_of(t.q)} for m, t in enumerate(ts)]
    q_margin = min(log_of(t.q) for t in ts) - MP.log(Q)
    c0 = ConditionReport("0", tuple(q_rows), SATISFIED if q_margin > 0 else VIOLATED,
                         float(q_margin), notes=f"Q={Q}; margin in log q")

    # (Y): d_m < d_tilde_m / 2, margin in log units
    y_margins = [lv.log_d_tilde - MP.log(2) - lv.log_d for lv in levels]
    cy = ConditionReport("Y", tuple({"m": lv.m, "log_margin": mg} for lv, mg in
                                    zip(levels, y_margins)),
                         SATISFIED if min(y_margins) > 0 else VIOLATED, float(min(y_margins)),
                         notes="margin is min log(d_tilde / (2 d))")

    # (S)
    s_rows = []
    bad = any(lv.log_u_bar >= 0 for lv in levels)
    partial = MP.mpf(0)
    terms = []
    if not bad:
        first = _exp_or_zero(_log_abs(ts[0]) + _log_h_from_log(levels[0].log_u_bar))
        partial += first
        terms.append(first)
        s_rows.append({"m": 0, "term": first, "partial_sum": partial})
        for m in range(1, len(levels)):
            u = levels[m - 1].u_bar
            term = u / (as_mpf(ts[m - 1].q) * (1 - u)) * _exp_or_zero(
                _log_h_from_log(levels[m].log_u_bar))
            partial += term
            terms.append(term)
            s_rows.append({"m": m, "term": term, "partial_sum": partial})
    if bad:
        s_verdict, s_margin = VIOLATED, -math.inf
    elif partial >= L:
        s_verdict, s_margin = VIOLATED, float(L - partial)
    else:
        s_margin = float(L - partial)
        s_verdict = SATISFIED if len(terms) >= 2 and trend(terms) == "decaying" else UNDECIDABLE
        if len(terms) >= 1 and all(t == 0 for t in terms[1:]) and len(terms) >= 2:
            s_verdict = SATISFIED
    cs = ConditionReport("S", tuple(s_rows), s_verdict, s_margin,
                         notes=f"budget L={L}; last term {MP.nstr(terms[-1], 6) if terms else 'n/a'}")

    subs = {"0": c0, "Y": cy, "S": cs}
    verdicts = [r.verdict for r in subs.values()]
    if VIOLATED in verdicts:
        verdict = VIOLATED
    elif all(v == SATISFIED for v in verdicts):
        verdict = SATISFIED
    else:
        verdict = UNDECIDABLE
    return ConditionReport("lemma_quantities", tuple(rows), verdict,
                           min(c0.margin, cy.margin, cs.margin), subs)


def mlc_rates(ts, n: int = 1) -> list:
    """log|p_m| / (n q_0 ... q_{m-1}) for each m, as mpf."""
    ts = _check(ts)
    lp = _log_prods(ts)
    return [MP.log(abs(t.p)) / (n * _exp_big(lp[m])) for m, t in enumerate(ts)]
