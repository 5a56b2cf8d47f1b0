"""Command-line front end.

Exit codes: 0 success, 2 invalid input or resource gate, 3 a checked
inequality failed, 4 a certified comparison stayed undecided at the
precision cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, TextIO

from flint import arb

from . import certify, factor, hermite_pade, measure
from .balls import DEFAULT_BITS, MAX_BITS, ball, fmt, lower_str, upper_str, workprec
from .errors import IndeterminateError, PreconditionError, ResourceLimitError, TheoremViolation

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_VIOLATION = 3
EXIT_INDETERMINATE = 4

COMMANDS = (
    "approx", "det", "factor", "kappa", "kappa-table", "fm-table", "bound",
    "omega", "sparse", "power", "verify", "qr-check", "search",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    args: Dict[str, object] = field(default_factory=dict)
    precision_bits: int = DEFAULT_BITS
    format: str = "text"
    opt_in_heavy: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv", "text"):
            raise PreconditionError(f"unknown format {self.format!r}")
        if not 32 <= self.precision_bits <= MAX_BITS:
            raise PreconditionError(f"--precision-bits must be in 32..{MAX_BITS}")

    def get(self, name: str):
        value = self.args.get(name)
        if value is None:
            raise PreconditionError(f"--{name.replace('_', '-')} is required for {self.command}")
        return value


Records = List[Dict[str, object]]


def _decimal(cfg: RunConfig, name: str) -> arb:
    text = cfg.get(name)
    try:
        return ball(str(text))
    except ValueError as exc:
        raise PreconditionError(f"--{name}: {exc}") from None


def _positive(cfg: RunConfig, name: str, least: int = 1) -> int:
    v = int(cfg.get(name))
    if v < least:
        raise PreconditionError(f"--{name.replace('_', '-')} must be >= {least}")
    return v


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_approx(cfg: RunConfig) -> Records:
    m, l = _positive(cfg, "m"), _positive(cfg, "l", 2)
    system = hermite_pade.build_system(m, l, allow_heavy=cfg.opt_in_heavy)
    rows = []
    for k in range(m + 1):
        for j in range(m + 1):
            p = system[k, j]
            row = {"k": k, "j": j, "degree": p.degree, "value_at_1": str(p(1))}
            if cfg.format == "json":
                row["coefficients"] = [str(c) for c in p.coeffs]
            rows.append(row)
    return rows


def cmd_det(cfg: RunConfig) -> Records:
    m, l = _positive(cfg, "m"), _positive(cfg, "l", 2)
    c, e = hermite_pade.determinant_shape(m, l)
    return [{"m": m, "l": l, "leading_coefficient": str(c), "exponent": e,
             "expected_exponent": m * (m + 1) * l}]


def cmd_factor(cfg: RunConfig) -> Records:
    m, l = _positive(cfg, "m"), _positive(cfg, "l", 2)
    system = hermite_pade.build_system(m, l, allow_heavy=cfg.opt_in_heavy)
    report = factor.extract_common_factor(system)
    rows = []
    for p in sorted(report.nu_exact):
        rows.append({"m": m, "l": l, "p": p, "nu_exact": report.nu_exact[p],
                     "nu_lower": report.nu_lower[p]})
    if not rows:
        rows.append({"m": m, "l": l, "p": None, "nu_exact": 0, "nu_lower": 0})
    return rows


def cmd_kappa(cfg: RunConfig) -> Records:
    bits = cfg.precision_bits
    if cfg.args.get("limit"):
        tol = _decimal(cfg, "tolerance")
        val = factor.kappa_limit(tol)
        return [{"quantity": "kappa_limit", "value": fmt(val, 30),
                 "lower": lower_str(val, 15), "upper": upper_str(val, 15)}]
    m = _positive(cfg, "m", 2)
    val = factor.kappa_m(m, bits).value
    return [{"m": m, "kappa": fmt(val, 20), "lower": lower_str(val, 15)}]


def cmd_kappa_table(cfg: RunConfig) -> Records:
    hi = _positive(cfg, "m_max", 2)
    if hi > 14:
        raise PreconditionError("--m-max is at most 14, the extent of the reference table")
    rows = []
    with workprec(cfg.precision_bits):
        for m in range(2, hi + 1):
            val = factor.kappa_m(m, cfg.precision_bits).value
            ref = factor.PAPER_KAPPA_TABLE[m]
            margin = val - ball(ref)
            rows.append({"m": m, "kappa_lower": lower_str(val, 12), "paper_value": ref,
                         "margin": lower_str(margin, 6)})
            if not margin >= ball("-0.000001"):
                raise TheoremViolation(f"kappa_{m} is below the reference value {ref}")
    return rows


def cmd_fm_table(cfg: RunConfig) -> Records:
    rows = []
    for r in measure.fm_table(bits=cfg.precision_bits):
        rows.append({"m": r.m, "f": fmt(r.f, 12), "product": fmt(r.product, 12),
                     "paper_f": r.paper_f, "paper_product": r.paper_product,
                     "dominated": r.dominated})
    return rows


def cmd_bound(cfg: RunConfig) -> Records:
    m = _positive(cfg, "m", 2)
    with workprec(cfg.precision_bits):
        logH = _decimal(cfg, "logH")
        params = measure.params_for_e(m, bits=cfg.precision_bits)
        fn = measure.corollary_bound if cfg.args.get("corollary") else measure.generic_lower_bound
        lb = fn(params, logH)
        return [{"m": m, "logH": str(cfg.get("logH")),
                 "kind": "corollary" if cfg.args.get("corollary") else "generic",
                 "epsilon": fmt(lb.excess, 15), "prefactor": fmt(lb.prefactor, 15),
                 "log_bound": fmt(lb.log_bound, 15),
                 "omega_excess": fmt(lb.omega_excess(logH), 15)}]


def cmd_omega(cfg: RunConfig) -> Records:
    m = _positive(cfg, "m", 2)
    with workprec(cfg.precision_bits):
        ll = _decimal(cfg, "loglogH")
        val = measure.omega_upper(m, ll, cfg.precision_bits)
        return [{"m": m, "loglogH": str(cfg.get("loglogH")), "omega": fmt(val, 20)}]


def cmd_sparse(cfg: RunConfig) -> Records:
    m1, m2 = _positive(cfg, "m1"), _positive(cfg, "m2")
    with workprec(cfg.precision_bits):
        ll = _decimal(cfg, "loglogH")
        val = measure.sparse_bound(m1, m2, ll, cfg.precision_bits)
        return [{"m1": m1, "m2": m2, "loglogH": str(cfg.get("loglogH")),
                 "rho": fmt(measure.rho_constant(m2), 6), "exponent": fmt(val, 20)}]


def cmd_power(cfg: RunConfig) -> Records:
    d, m = _positive(cfg, "d"), _positive(cfg, "m")
    with workprec(cfg.precision_bits):
        ll = _decimal(cfg, "loglogH")
        val = measure.power_measure(d, m, ll, cfg.precision_bits)
        return [{"d": d, "m": m, "m2": d * m, "loglogH": str(cfg.get("loglogH")),
                 "rho": fmt(measure.rho_constant(d * m), 6), "omega": fmt(val, 20)}]


def _parse_lambda(text: str) -> certify.LinearForm:
    try:
        coeffs = tuple(int(x) for x in str(text).split(","))
    except ValueError:
        raise PreconditionError("--lambda must be comma-separated integers") from None
    return certify.LinearForm(coeffs)


def cmd_verify(cfg: RunConfig) -> Records:
    form = _parse_lambda(cfg.get("lambda"))
    with workprec(cfg.precision_bits):
        logH = _decimal(cfg, "logH")
    cert = certify.verify_measure(form, logH, cfg.precision_bits)
    row = cert.to_json()
    row["logH"] = str(cfg.get("logH"))
    if cfg.format != "json":
        row["lambda"] = ",".join(row["lambda"])
    return [row]


def cmd_qr_check(cfg: RunConfig) -> Records:
    m, l = _positive(cfg, "m", 2), _positive(cfg, "l", 2)
    q = certify.check_Q_bound(m, l, opt_in_heavy=cfg.opt_in_heavy)
    r = certify.check_R_bound(m, l, opt_in_heavy=cfg.opt_in_heavy)
    return [q.to_json(), r.to_json()]


def cmd_search(cfg: RunConfig) -> Records:
    m, box = _positive(cfg, "m"), _positive(cfg, "box")
    res = certify.empirical_min_search(m, box)
    row = res.to_json()
    if cfg.format != "json":
        row["lambda"] = ",".join(row["lambda"])
    return [row]


HANDLERS: Dict[str, Callable[[RunConfig], Records]] = {
    "approx": cmd_approx,
    "det": cmd_det,
    "factor": cmd_factor,
    "kappa": cmd_kappa,
    "kappa-table": cmd_kappa_table,
    "fm-table": cmd_fm_table,
    "bound": cmd_bound,
    "omega": cmd_omega,
    "sparse": cmd_sparse,
    "power": cmd_power,
    "verify": cmd_verify,
    "qr-check": cmd_qr_check,
    "search": cmd_search,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render(records: Records, form: str) -> str:
    if form == "json":
        return json.dumps(records, ensure_ascii=False, indent=2) + "\n"
    if form == "csv":
        buf = io.StringIO()
        keys: List[str] = []
        for r in records:
            keys += [k for k in r if k not in keys]
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\r\n")
        writer.writeheader()
        for r in records:
            writer.writerow({k: _csv_cell(v) for k, v in r.items()})
        return buf.getvalue()
    lines = []
    for r in records:
        lines.append("  ".join(f"{k}={v}" for k, v in r.items()))
    return "\n".join(lines) + "\n"


def _csv_cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return v


def run(cfg: RunConfig, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        records = HANDLERS[cfg.command](cfg)
    except (PreconditionError, ResourceLimitError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    except TheoremViolation as exc:
        err.write(f"violation: {exc}\n")
        return EXIT_VIOLATION
    except IndeterminateError as exc:
        err.write(f"undecided: {exc}\n")
        return EXIT_INDETERMINATE
    out.write(render(records, cfg.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--opt-in-heavy", action="store_true")

    parser = argparse.ArgumentParser(prog="emeasure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, *opts):
        p = sub.add_parser(name, help=help_, parents=[common])
        for flag, kw in opts:
            p.add_argument(flag, **kw)
        return p

    m_ = ("--m", {"type": int})
    l_ = ("--l", {"type": int})
    add("approx", "build the integer approximation system", m_, l_)
    add("det", "determinant shape c t^e of the system", m_, l_)
    add("factor", "common-factor valuations of the system", m_, l_)
    add("kappa", "kappa_m or the limit constant", m_,
        ("--limit", {"action": "store_true"}), ("--tolerance", {"default": "1e-9"}))
    add("kappa-table", "kappa_m for m = 2..m-max", ("--m-max", {"type": int, "default": 14}))
    add("fm-table", "f(m) against the product bound for m = 5..14")
    add("bound", "lower bound F (2H)^-(m + eps)", m_, ("--logH", {}),
        ("--corollary", {"action": "store_true"}))
    add("omega", "upper bound for omega(m, H)", m_, ("--loglogH", {}))
    add("sparse", "exponent for sparse polynomials in e",
        ("--m1", {"type": int}), ("--m2", {"type": int}), ("--loglogH", {}))
    add("power", "omega bound for powers e^d", ("--d", {"type": int}), m_, ("--loglogH", {}))
    add("verify", "certify one linear form against the bound", ("--lambda", {}), ("--logH", {}))
    add("qr-check", "size estimates at t = 1 for m = 2, 3, 4", m_, l_)
    add("search", "exhaustive minimum of |Lambda| in a box", m_, ("--box", {"type": int}))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    skip = {"command", "precision_bits", "format", "opt_in_heavy"}
    args = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(ns.command, args, ns.precision_bits, ns.format, ns.opt_in_heavy)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
