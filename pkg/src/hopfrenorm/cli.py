"""Command-line entry point.

Each ``cmd_*`` builds a Report from a RunConfig.  Structured output is the
report's JSON; human output renders the same data with series written out.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from .characters import Character, birkhoff, convolution, inverse
from .errors import HopfRenormError, ParseError, VerdictError
from .gauge import compare_schemes
from .graphs import DEFAULT_VERTEX_CAP
from .hopf import HopfAlgebra
from .io import (
    BUNDLED_CATALOGS,
    BUNDLED_SCHEMES,
    Report,
    character_document,
    data_path,
    hopf_element_document,
    load_catalog,
    load_character,
    rational,
    tensor_document,
)
from .rgflow import (
    ScaleMode,
    beta_limit,
    beta_residue,
    connection_pullback,
    flatness_residual,
    has_simple_poles,
    is_equisingular,
    r_tilde,
    scale_action,
)
from .series import DEFAULT_POLE_CAP, LaurentSeries, from_literal, to_literal

DEFAULT_CATALOG = "phi3_two_loop"
NOT_APPLICABLE = "not-applicable"


@dataclass
class RunConfig:
    command: str
    catalogs: list[str] = field(default_factory=lambda: [DEFAULT_CATALOG])
    schemes: list[str] = field(default_factory=list)
    truncation: int | None = None
    pole_cap: int = DEFAULT_POLE_CAP
    vertex_cap: int = DEFAULT_VERTEX_CAP
    output: str = "human"
    decimal: bool = False
    graphs: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.truncation is not None and self.truncation < 1:
            raise ParseError(f"--truncation must be >= 1, got {self.truncation}")
        if self.pole_cap < 1 or self.vertex_cap < 1:
            raise ParseError("--pole-cap and --vertex-cap must be >= 1")
        if self.output not in ("human", "structured"):
            raise ParseError(f"unknown output format {self.output!r}")

    def echo(self) -> dict:
        return {
            "catalogs": list(self.catalogs),
            "schemes": list(self.schemes),
            "truncation": self.truncation,
            "pole_cap": self.pole_cap,
            "vertex_cap": self.vertex_cap,
            "graphs": list(self.graphs),
        }


def _resolve(path: str, bundled: Sequence[str]) -> Path:
    p = Path(path)
    if not p.exists() and path in bundled:
        return data_path(path)
    return p


class _Session:
    """Loaded catalog, algebra and schemes for one run."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.catalog = load_catalog([_resolve(c, BUNDLED_CATALOGS) for c in config.catalogs], config.vertex_cap)
        self.H = HopfAlgebra(self.catalog)
        for g in config.graphs:
            self.catalog.graph(g)

    def scheme(self, index: int = 0) -> Character:
        if len(self.config.schemes) <= index:
            flag = "--scheme" if index == 0 else "--scheme2"
            raise ParseError(f"{self.config.command} needs {flag}")
        path = _resolve(self.config.schemes[index], BUNDLED_SCHEMES)
        return load_character(path, self.H, self.config.truncation, self.config.pole_cap).character

    def names(self) -> list[str]:
        return list(self.config.graphs) or self.H.generators()

    def report(self, results: dict, verdicts: dict) -> Report:
        return Report(self.config.command, self.config.echo(), _plain(results), _plain(verdicts))


def _plain(obj: Any) -> Any:
    """Replace series by literals, recursively."""
    if isinstance(obj, LaurentSeries):
        return {"series": to_literal(obj), "order": obj.order}
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


# -- commands --------------------------------------------------------------------------

def cmd_coproduct(config: RunConfig) -> Report:
    s = _Session(config)
    results = {n: tensor_document(s.H.coproduct(s.H.gen(n))) for n in s.names()}
    return s.report(results, {})


def cmd_antipode(config: RunConfig) -> Report:
    s = _Session(config)
    results = {n: hopf_element_document(s.H.antipode(s.H.gen(n))) for n in s.names()}
    return s.report(results, {})


def cmd_birkhoff(config: RunConfig) -> Report:
    s = _Session(config)
    gamma = s.scheme()
    minus, plus = birkhoff(gamma)
    rebuilt = convolution(inverse(minus), plus)
    results = {}
    ok = True
    for n in s.names():
        residual = rebuilt(n) - gamma(n)
        ok = ok and residual.is_zero()
        results[n] = {"gamma": gamma(n), "minus": minus(n), "plus": plus(n), "residual": residual}
    report = s.report(results, {"reconstruction": ok})
    if not ok:
        raise VerdictError("Birkhoff reconstruction residual is nonzero", report)
    return report


def cmd_beta(config: RunConfig) -> Report:
    s = _Session(config)
    gamma = s.scheme()
    equi = is_equisingular(gamma)
    res = beta_residue(gamma)
    lim = beta_limit(gamma) if equi else None
    results = {}
    for n in s.names():
        results[n] = {
            "residue": rational(res.per_generator[n]),
            "limit": rational(lim.per_generator[n]) if lim else NOT_APPLICABLE,
        }
    verdicts = {
        "equisingular": equi,
        "routes_agree": (lim == res) if lim else NOT_APPLICABLE,
        "total_residue": rational(res.total_degree1),
        "total_limit": rational(lim.total_degree1) if lim else NOT_APPLICABLE,
    }
    return s.report(results, verdicts)


def cmd_connection(config: RunConfig) -> Report:
    s = _Session(config)
    gamma = s.scheme()
    p = connection_pullback(gamma)
    resid = flatness_residual(p)
    results = {n: {"a": p.a(n), "b": p.b(n), "flatness_residual": resid(n)} for n in s.names()}
    flat = resid.is_zero()
    report = s.report(results, {"flat": flat, "evaluated_at_t1": p.evaluated_at_t1})
    if not flat:
        raise VerdictError("pullback is not flat", report)
    return report


def cmd_check_equisingular(config: RunConfig) -> Report:
    s = _Session(config)
    gamma = s.scheme()
    family = scale_action(gamma, ScaleMode.TZY).character
    minus, _ = birkhoff(family)
    b = r_tilde(gamma)
    results = {n: {"counterterm": minus(n), "ell_free": minus(n).is_ell_free(), "r_tilde": b(n)}
               for n in s.names()}
    return s.report(results, {"equisingular": is_equisingular(gamma), "simple_poles": has_simple_poles(b)})


def cmd_gauge_compare(config: RunConfig) -> Report:
    s = _Session(config)
    g1, g2 = s.scheme(0), s.scheme(1)
    v = compare_schemes(g1, g2)
    verdicts = {
        "equivalent": v.equivalent,
        "counterterm_match": v.counterterm_match,
        "beta_match": NOT_APPLICABLE if v.beta_match is None else v.beta_match,
        "witness": character_document(v.witness, "witness") if v.witness is not None else None,
    }
    return s.report({"diffs": dict(sorted(v.diffs.items()))}, verdicts)


COMMANDS: dict[str, Callable[[RunConfig], Report]] = {
    "coproduct": cmd_coproduct,
    "antipode": cmd_antipode,
    "birkhoff": cmd_birkhoff,
    "beta": cmd_beta,
    "connection": cmd_connection,
    "check-equisingular": cmd_check_equisingular,
    "gauge-compare": cmd_gauge_compare,
}

HELP = {
    "coproduct": "coproduct of each generator",
    "antipode": "antipode of each generator",
    "birkhoff": "counterterm and renormalized parts of a scheme",
    "beta": "beta-function by residue and by limit",
    "connection": "pulled-back connection and its flatness",
    "check-equisingular": "does the counterterm depend on the scale?",
    "gauge-compare": "are two schemes related by a holomorphic character?",
}


# -- rendering -------------------------------------------------------------------------

def _render_value(v: Any, decimal: bool) -> str:
    if isinstance(v, dict) and set(v) == {"series", "order"}:
        x = from_literal(v["series"], v["order"])
        return x.to_decimal_str() if decimal else str(x)
    if isinstance(v, list) and v and isinstance(v[0], dict) and "coefficient" in v[0]:
        return " + ".join(_render_term(t) for t in v)
    if isinstance(v, dict) and "values" in v and "scheme_name" in v:
        return "{" + ", ".join(f"{k}: {_render_value({'series': s, 'order': v['truncation_order']}, decimal)}"
                               for k, s in v["values"].items()) + "}"
    return str(v)


def _render_term(t: dict) -> str:
    if "monomial" in t:
        body = "*".join(t["monomial"]) or "1"
    else:
        body = f"{'*'.join(t['left']) or '1'} (x) {'*'.join(t['right']) or '1'}"
    return body if t["coefficient"] == "1" else f"{t['coefficient']} {body}"


def render_human(report: Report, decimal: bool = False) -> str:
    lines = [f"== {report.command}"]
    for name, value in report.results.items():
        if isinstance(value, dict) and not ({"series", "order"} == set(value)):
            lines.append(f"{name}:")
            for k, x in value.items():
                lines.append(f"  {k}: {_render_value(x, decimal)}")
        else:
            lines.append(f"{name}: {_render_value(value, decimal)}")
    for k, v in report.verdicts.items():
        lines.append(f"[{k}] {_render_value(v, decimal)}")
    if report.timing is not None:
        lines.append(f"(took {report.timing:.3f} s)")
    return "\n".join(lines) + "\n"


# -- entry point -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", action="append", dest="catalogs", metavar="PATH",
                        help=f"graph catalog JSON (repeatable; bundled: {', '.join(BUNDLED_CATALOGS)})")
    common.add_argument("--scheme", metavar="PATH", help=f"character file (bundled: {', '.join(BUNDLED_SCHEMES)})")
    common.add_argument("--scheme2", metavar="PATH", help="second character file for gauge-compare")
    common.add_argument("--truncation", type=int, metavar="N", help="z-truncation order (>= 1)")
    common.add_argument("--pole-cap", type=int, default=DEFAULT_POLE_CAP, metavar="N")
    common.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP, metavar="N")
    common.add_argument("--format", choices=("human", "structured"), default="human", dest="output")
    common.add_argument("--decimal", action="store_true", help="decimal approximations in human output")
    common.add_argument("--graph", action="append", dest="graphs", default=[], metavar="NAME",
                        help="restrict output to these generators (repeatable)")
    parser = argparse.ArgumentParser(prog="hopfrenorm", description="Hopf-algebraic renormalization toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    schemes = [s for s in (args.scheme, args.scheme2) if s is not None]
    if args.scheme2 is not None and args.scheme is None:
        raise ParseError("--scheme2 needs --scheme")
    return RunConfig(
        command=args.command,
        catalogs=args.catalogs or [DEFAULT_CATALOG],
        schemes=schemes,
        truncation=args.truncation,
        pole_cap=args.pole_cap,
        vertex_cap=args.vertex_cap,
        output=args.output,
        decimal=args.decimal,
        graphs=args.graphs,
    )


def emit(report: Report, config: RunConfig, stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    if config.output == "structured":
        stream.write(report.to_json())
    else:
        stream.write(render_human(report, config.decimal))


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        start = time.perf_counter()
        report = COMMANDS[config.command](config)
        report.timing = time.perf_counter() - start
    except VerdictError as exc:
        if exc.report is not None:
            emit(exc.report, config)
        print(f"hopfrenorm: {exc}", file=sys.stderr)
        return exc.exit_code
    except HopfRenormError as exc:
        print(f"hopfrenorm: {exc}", file=sys.stderr)
        return exc.exit_code
    emit(report, config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
