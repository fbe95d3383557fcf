"""Command-line front end.

Reads INI-style scenario configs and drives the library: classification,
truncated pdf/cdf grids, expected-time tables, no-gap baselines, contour
grids, mesh optimization, and Monte Carlo validation.  All tabular output
is CSV with a header row, ``.`` decimal separator and ``\\n`` line endings;
times print with 6 significant digits, validation statistics with 12, so a
given config and flags produce byte-identical output.

Exit status: 0 on success, 2 for config/usage problems, 3 for numeric
failures.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

from . import montecarlo
from .distributions import Cauchy, Gamma, Normal, SkewNormal
from .errors import ConfigurationError, GapSearchError, NewtonStallError
from .optimize import NewtonOptions, ObjectivePart, PenaltyParams, \
    modified_objective, optimize_layout
from .search import SearchSpeeds, baseline_expectation, contour_grid, \
    expected_time_table, row_range
from .truncation import Side, TruncationLayout, classify, make_truncated, \
    truncated_cdf, truncated_pdf

_GAP_RE = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")

_TIME_FMT = "{:.6g}"
_STAT_FMT = "{:.12g}"


class _Config:
    """Parsed config: sections -> key -> (value, line number)."""

    def __init__(self, path: str):
        self.path = path
        self.sections: dict[str, dict[str, tuple[str, int]]] = {}
        self.section_lines: dict[str, int] = {}

    def error(self, line: int, message: str) -> ConfigurationError:
        return ConfigurationError(f"{self.path}:{line}: {message}")

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, (default, None))[0]

    def line_of(self, section: str, key: str) -> int:
        entry = self.sections.get(section, {}).get(key)
        if entry is not None:
            return entry[1]
        return self.section_lines.get(section, 1)


def parse_config(path: str) -> _Config:
    cfg = _Config(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    current: dict[str, tuple[str, int]] | None = None
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith(("#", ";")):
            continue
        if text.startswith("[") and text.endswith("]"):
            name = text[1:-1].strip().lower()
            current = cfg.sections.setdefault(name, {})
            cfg.section_lines.setdefault(name, lineno)
            continue
        if "=" not in text:
            raise cfg.error(lineno, f"expected 'key = value', got {text!r}")
        if current is None:
            raise cfg.error(lineno, "key outside any [section]")
        key, _, value = text.partition("=")
        current[key.strip().lower()] = (value.strip(), lineno)
    return cfg


def _float(cfg: _Config, section: str, key: str, default=None) -> float:
    raw = cfg.get(section, key)
    if raw is None:
        if default is None:
            raise cfg.error(cfg.line_of(section, key),
                            f"missing key '{key}' in [{section}]")
        return default
    try:
        return float(raw)
    except ValueError:
        raise cfg.error(cfg.line_of(section, key),
                        f"{key} must be a number, got {raw!r}") from None


def _gap_list(cfg: _Config, section: str, key: str) -> list[tuple[float, float]]:
    raw = cfg.get(section, key)
    if raw is None or not raw.strip():
        return []
    pairs = _GAP_RE.findall(raw)
    leftover = _GAP_RE.sub("", raw).strip()
    if not pairs or leftover:
        raise cfg.error(cfg.line_of(section, key),
                        f"{key} must be a list like '(-6,-4) (-15,-10)', got {raw!r}")
    try:
        return [(float(lo), float(hi)) for lo, hi in pairs]
    except ValueError:
        raise cfg.error(cfg.line_of(section, key),
                        f"non-numeric gap endpoint in {raw!r}") from None


_DIST_PARAMS = {
    "normal": (Normal, ("mu", "sigma")),
    "cauchy": (Cauchy, ("x_tilde", "c")),
    "skew-normal": (SkewNormal, ("eta", "varpi", "varrho")),
    "gamma": (Gamma, ("kappa", "theta")),
}


def build_distribution(cfg: _Config):
    if "distribution" not in cfg.sections:
        raise cfg.error(1, "missing [distribution] section")
    kind = (cfg.get("distribution", "kind") or "").lower()
    if kind not in _DIST_PARAMS:
        raise cfg.error(cfg.line_of("distribution", "kind"),
                        f"kind must be one of {sorted(_DIST_PARAMS)}, got {kind!r}")
    cls, names = _DIST_PARAMS[kind]
    values = {name: _float(cfg, "distribution", name) for name in names}
    try:
        return cls(**values)
    except GapSearchError as exc:
        raise cfg.error(cfg.line_of("distribution", names[0]), str(exc)) from exc


def build_layout(cfg: _Config) -> TruncationLayout:
    if "truncation" not in cfg.sections:
        raise cfg.error(1, "missing [truncation] section")
    a = _float(cfg, "truncation", "a")
    b = _float(cfg, "truncation", "b")
    left = _gap_list(cfg, "truncation", "left")
    right = _gap_list(cfg, "truncation", "right")
    try:
        return TruncationLayout(a=a, b=b, left_gaps=left, right_gaps=right)
    except GapSearchError as exc:
        key = "left" if "left" in str(exc) else ("right" if "right" in str(exc) else "a")
        raise cfg.error(cfg.line_of("truncation", key), str(exc)) from exc


def build_speeds(cfg: _Config) -> SearchSpeeds:
    try:
        return SearchSpeeds(v1=_float(cfg, "search", "v1", 1.0),
                            v2=_float(cfg, "search", "v2", 5.0))
    except GapSearchError as exc:
        raise cfg.error(cfg.line_of("search", "v1"), str(exc)) from exc


def build_optimizer_options(cfg: _Config) -> NewtonOptions:
    try:
        return NewtonOptions(
            max_iterations=int(_float(cfg, "optimizer", "max_iterations", 100)),
            grad_tol=_float(cfg, "optimizer", "grad_tol", 1e-8),
            step_tol=_float(cfg, "optimizer", "step_tol", 1e-10),
            fd_step=_float(cfg, "optimizer", "fd_step", 1e-5))
    except GapSearchError as exc:
        raise cfg.error(cfg.line_of("optimizer", "grad_tol"), str(exc)) from exc


def build_penalties(cfg: _Config, layout: TruncationLayout) -> PenaltyParams:
    value = _float(cfg, "optimizer", "penalty", 0.1)
    try:
        return PenaltyParams.uniform(value, layout.n_left, layout.n_right)
    except GapSearchError as exc:
        raise cfg.error(cfg.line_of("optimizer", "penalty"), str(exc)) from exc


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(lines, path: str | None) -> None:
    out, close = _open_output(path)
    try:
        for line in lines:
            out.write(line + "\n")
    finally:
        if close:
            out.close()


def _grid_lines(cfg: _Config, value_fn, points: int) -> list[str]:
    d = build_distribution(cfg)
    layout = build_layout(cfg)
    t = make_truncated(d, layout)
    lines = ["x,value"]
    span = layout.b - layout.a
    for i in range(points):
        x = layout.a + span * i / (points - 1) if points > 1 else layout.a
        lines.append(f"{_STAT_FMT.format(x)},{_STAT_FMT.format(value_fn(t, x))}")
    return lines


def cmd_classify(cfg: _Config, args) -> list[str]:
    return [classify(build_layout(cfg)).value]


def cmd_pdf(cfg: _Config, args) -> list[str]:
    return _grid_lines(cfg, truncated_pdf, args.points)


def cmd_cdf(cfg: _Config, args) -> list[str]:
    return _grid_lines(cfg, truncated_cdf, args.points)


def cmd_expected_times(cfg: _Config, args) -> list[str]:
    t = make_truncated(build_distribution(cfg), build_layout(cfg))
    table = expected_time_table(t, build_speeds(cfg))
    lines = ["m,tau,expected"]
    for row in table.rows:
        lines.append(f"{row.m},{_TIME_FMT.format(row.tau)},"
                     f"{_TIME_FMT.format(row.expected)}")
    return lines


def cmd_baseline(cfg: _Config, args) -> list[str]:
    d = build_distribution(cfg)
    layout = build_layout(cfg)
    s = build_speeds(cfg)
    lines = ["side,expected"]
    for side in (Side.LEFT, Side.RIGHT):
        value = baseline_expectation(d, layout.a, layout.b, s, side)
        lines.append(f"{side.value},{_TIME_FMT.format(value)}")
    return lines


def _parse_span(raw: str, flag: str):
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigurationError(f"{flag} must look like lo:hi:steps, got {raw!r}")
    try:
        return (float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise ConfigurationError(f"bad {flag} value {raw!r}") from None


def cmd_contour(cfg: _Config, args) -> list[str]:
    d = build_distribution(cfg)
    layout = build_layout(cfg)
    s = build_speeds(cfg)
    vary = Side.LEFT if args.vary == "left" else Side.RIGHT
    grid = contour_grid(
        d, layout, s, args.m, vary,
        _parse_span(args.x_range, "--x-range"),
        _parse_span(args.y_range, "--y-range"),
        workers=args.threads)
    lines = ["x,y,expected"]
    for iy, yv in enumerate(grid.y):
        for ix, xv in enumerate(grid.x):
            value = grid.values[iy, ix]
            if math.isnan(value):
                continue
            lines.append(f"{_STAT_FMT.format(xv)},{_STAT_FMT.format(yv)},"
                         f"{_TIME_FMT.format(value)}")
    return lines


def cmd_optimize(cfg: _Config, args) -> list[str]:
    d = build_distribution(cfg)
    layout = build_layout(cfg)
    s = build_speeds(cfg)
    penalties = build_penalties(cfg, layout)
    opts = build_optimizer_options(cfg)
    optimized, result = optimize_layout(d, layout, s, penalties, opts)
    lines = ["key,value"]
    for j, gap in enumerate(optimized.left_gaps, start=1):
        lines.append(f"left_gap{j}_lower,{_STAT_FMT.format(gap.lower)}")
        lines.append(f"left_gap{j}_upper,{_STAT_FMT.format(gap.upper)}")
    for i, gap in enumerate(optimized.right_gaps, start=1):
        lines.append(f"right_gap{i}_lower,{_STAT_FMT.format(gap.lower)}")
        lines.append(f"right_gap{i}_upper,{_STAT_FMT.format(gap.upper)}")
    lines.append(f"penalized_objective,{_TIME_FMT.format(result.objective)}")
    lines.append(
        f"unpenalized_objective,{_TIME_FMT.format(result.unpenalized_objective)}")
    lines.append(f"grad_norm,{_STAT_FMT.format(result.grad_norm)}")
    lines.append(f"iterations,{result.iterations}")
    lines.append(f"converged,{str(result.converged).lower()}")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            fh.write("iteration,objective,grad_norm,damping\n")
            for e in result.trace:
                fh.write(f"{e.iteration},{_STAT_FMT.format(e.objective)},"
                         f"{_STAT_FMT.format(e.grad_norm)},"
                         f"{_STAT_FMT.format(e.damping)}\n")
    return lines


def cmd_validate(cfg: _Config, args) -> list[str]:
    d = build_distribution(cfg)
    layout = build_layout(cfg)
    s = build_speeds(cfg)
    t = make_truncated(d, layout)
    report = montecarlo.build_report(t, s, seed=args.seed, n=args.n)
    lines = [
        f"n {report.n}",
        f"seed {report.seed}",
        f"sup_cdf_distance {_STAT_FMT.format(report.sup_cdf_distance)}",
    ]
    for k, freq in enumerate(report.segment_frequencies):
        lines.append(f"segment_freq_{k} {_STAT_FMT.format(freq)}")
    lines.append(f"mean_arrival_left {_STAT_FMT.format(report.mean_arrival_left)}")
    lines.append(f"mean_arrival_right {_STAT_FMT.format(report.mean_arrival_right)}")
    lines.append(f"std_error {_STAT_FMT.format(report.std_error)}")
    rows = row_range(layout)
    from .search import expected_time
    if not layout.half_line:
        lines.append(f"expected_sweep_left {_STAT_FMT.format(expected_time(t, s, 0))}")
    lines.append(
        f"expected_sweep_right {_STAT_FMT.format(expected_time(t, s, rows[-1]))}")
    lines.append("note mean arrival times and expected sweep times are "
                 "different functionals; they are not comparable one-to-one")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapsearch",
        description="Coordinated line search over gapped truncated distributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("config", help="scenario config file")
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.set_defaults(fn=fn)
        return p

    add("classify", cmd_classify, help="print the truncation class")
    for name, fn in (("pdf", cmd_pdf), ("cdf", cmd_cdf)):
        p = add(name, fn, help=f"emit truncated {name} samples over [a, b]")
        p.add_argument("--points", type=int, default=1001)
    add("expected-times", cmd_expected_times,
        help="emit the expected elapsed time table")
    add("baseline", cmd_baseline, help="print no-gap left/right expectations")
    p = add("contour", cmd_contour, help="expected time over one gap's edges")
    p.add_argument("--vary", choices=("left", "right"), required=True)
    p.add_argument("--m", type=int, required=True, help="table row index")
    p.add_argument("--x-range", required=True, metavar="LO:HI:STEPS")
    p.add_argument("--y-range", required=True, metavar="LO:HI:STEPS")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p = add("optimize", cmd_optimize, help="optimize the mesh points")
    p.add_argument("--trace", default=None, help="write iteration trace CSV here")
    p = add("validate", cmd_validate, help="Monte Carlo validation report")
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--seed", type=int, default=1)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config)
        lines = args.fn(cfg, args)
        _emit(lines, args.output)
        return 0
    except NewtonStallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for entry in exc.trace:
            print(f"  trace: {entry}", file=sys.stderr)
        return 3
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GapSearchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
