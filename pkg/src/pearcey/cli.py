"""Command-line front end.

    pearcey gap --alpha 2 --rho 0 --s-grid 8:25:6log
    pearcey fit --alpha 2 --rho 0.5 --format json
    pearcey verify --suite bessel
    pearcey kernel 0.7 1.3 --alpha 2

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import click
import numpy as np

from . import asymptotics as asy
from . import fredholm as fh
from . import kernel as K

EXIT_CONFIG = 1
EXIT_NUMERIC = 2
S_WARN = fh.S_MAX
DEFAULTS = {"alpha": 2.0, "rho": 0.0, "s": None, "s_grid": None, "gamma": 1.0, "nodes": fh.M_MAX,
            "tol": 1e-10, "out": None, "format": "csv", "threads": None, "suite": "all"}
FIT_GRID = "8:25:6log"


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


class NumericalFailure(click.ClickException):
    exit_code = EXIT_NUMERIC


@dataclass
class RunConfig:
    alpha: float = 2.0
    rho: float = 0.0
    s: float = None
    s_grid: str = None
    gamma: float = 1.0
    nodes: int = fh.M_MAX
    tol: float = 1e-10
    out: str = None
    format: str = "csv"
    threads: int = None
    suite: str = "all"

    def validate(self):
        if not self.alpha > -1:
            raise ConfigError("alpha must be > -1")
        if not 0 < self.gamma <= 1:
            raise ConfigError("gamma must lie in (0, 1]")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.nodes < 16:
            raise ConfigError("nodes must be at least 16")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be positive")
        return self

    def grid(self, default=None):
        if self.s is not None and self.s_grid is not None:
            raise ConfigError("give either --s or --s-grid, not both")
        if self.s is not None:
            pts = [float(self.s)]
        elif self.s_grid is not None or default is not None:
            pts = parse_grid(self.s_grid or default)
        else:
            raise ConfigError("one of --s or --s-grid is required")
        for v in pts:
            if not v > 0:
                raise ConfigError("s must be positive")
            if v > S_WARN:
                click.echo("warning: s = %g exceeds %g, where the determinant is "
                           "not computed" % (v, S_WARN), err=True)
                raise ConfigError("s = %g is above the supported range (0, %g]" % (v, S_WARN))
        return pts

    def worker_count(self):
        if self.threads is not None:
            return self.threads
        return fh.default_threads()


def parse_grid(text):
    """``min:max:count[log|lin]`` -> list of floats (log is the default)."""
    try:
        lo, hi, rest = text.split(":")
        kind = "log"
        for k in ("log", "lin"):
            if rest.endswith(k):
                rest, kind = rest[:-len(k)], k
        lo, hi, n = float(lo), float(hi), int(rest)
    except ValueError:
        raise ConfigError("bad grid %r; expected min:max:count[log|lin]" % (text,))
    if n < 1 or hi < lo or (n > 1 and hi == lo):
        raise ConfigError("bad grid %r" % (text,))
    if n == 1:
        return [lo]
    if kind == "log":
        if lo <= 0:
            raise ConfigError("log grid needs min > 0")
        return [float(v) for v in np.geomspace(lo, hi, n)]
    return [float(v) for v in np.linspace(lo, hi, n)]


def read_config_file(path):
    """Plain ``key = value`` lines with ``#`` comments."""
    out = {}
    try:
        with open(path) as fh_:
            lines = fh_.readlines()
    except OSError as exc:
        raise ConfigError("cannot read config file: %s" % exc)
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected key = value" % (path, num))
        key, val = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError("%s:%d: unknown key %r" % (path, num, key))
        out[key] = val
    return out


_TYPES = {"alpha": float, "rho": float, "s": float, "gamma": float, "nodes": int, "tol": float,
          "threads": int, "s_grid": str, "out": str, "format": str, "suite": str}


def build_config(cli_values, config_path=None):
    """Flags > config file > defaults."""
    merged = dict(DEFAULTS)
    if config_path:
        for k, v in read_config_file(config_path).items():
            try:
                merged[k] = _TYPES[k](v)
            except ValueError:
                raise ConfigError("config value %s = %r is not a valid %s" % (k, v, _TYPES[k].__name__))
    for k, v in cli_values.items():
        if v is not None:
            merged[k] = v
    return RunConfig(**merged).validate()


def fmt(v):
    """Round-trip decimal with 17 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def emit(rows, headers, cfg, preamble=()):
    if cfg.format == "json":
        text = json.dumps([{h: _json_value(r[h]) for h in headers} for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        for line in preamble:
            buf.write("# %s\n" % line)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        for r in rows:
            w.writerow([fmt(r[h]) for h in headers])
        text = buf.getvalue()
    write_text(text, cfg)


def write_text(text, cfg):
    if cfg.out:
        try:
            with open(cfg.out, "w") as f:
                f.write(text)
        except OSError as exc:
            raise ConfigError("cannot write %s: %s" % (cfg.out, exc))
    else:
        click.echo(text, nl=False)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def gap_rows(cfg, grid):
    def one(s):
        return fh.gap_log_prob(s, cfg.alpha, cfg.rho, tol=cfg.tol, gamma=cfg.gamma,
                               m_start=min(fh.M_START, cfg.nodes // 2), m_max=cfg.nodes, threads=1)
    try:
        if cfg.worker_count() > 1 and len(grid) > 1:
            with ThreadPoolExecutor(max_workers=cfg.worker_count()) as pool:
                results = list(pool.map(one, grid))
        else:
            results = [one(s) for s in grid]
    except (fh.ConvergenceError, fh.GapError, ArithmeticError) as exc:
        raise NumericalFailure(str(exc))
    except ValueError as exc:
        raise ConfigError(str(exc))
    return [{"s": s, "F": r.F, "det": math.exp(r.F), "est_error": r.est_error, "m_used": r.m_used}
            for s, r in zip(grid, results)]


# --------------------------------------------------------------------------
# click wiring

def _common(f):
    opts = [
        click.option("--alpha", type=float, help="exponent alpha > -1"),
        click.option("--rho", type=float, help="parameter rho"),
        click.option("--s", "s", type=float, help="single interval length"),
        click.option("--s-grid", "s_grid", help="min:max:count[log|lin]"),
        click.option("--gamma", type=float, help="thinning factor in (0, 1]"),
        click.option("--nodes", type=int, help="largest Gauss-Legendre node count"),
        click.option("--tol", type=float, help="convergence tolerance for F"),
        click.option("--out", help="write output here instead of stdout"),
        click.option("--format", "format", type=click.Choice(["csv", "json"]), help="output format"),
        click.option("--threads", type=int, help="worker threads (default $PEARCEY_THREADS or 1)"),
        click.option("--config", "config", type=click.Path(), help="key = value config file"),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _cfg(kw):
    path = kw.pop("config", None)
    return build_config(kw, path)


@click.group()
def main():
    """Gap probabilities of the hard edge Pearcey process and checks of
    their large-gap asymptotics."""


@main.command()
@_common
def gap(**kw):
    """ln det(I - gamma K_s) on an s value or grid."""
    cfg = _cfg(kw)
    rows = gap_rows(cfg, cfg.grid())
    emit(rows, ["s", "F", "det", "est_error", "m_used"], cfg)


@main.command()
@_common
@click.option("--corrected", is_flag=True, help="use the log coefficient -1/18")
def fit(corrected, **kw):
    """Fit the constant of the large-s expansion on an s-grid (default 8:25:6log)."""
    cfg = _cfg(kw)
    rows = gap_rows(cfg, cfg.grid(FIT_GRID))
    pts = [(r["s"], r["F"], r["est_error"]) for r in rows]
    try:
        res = asy.fit_constant(pts, cfg.alpha, cfg.rho, corrected=corrected)
        free = asy.fit_constant(pts, cfg.alpha, cfg.rho, corrected=corrected, free_log=True)
        expo = asy.fcet_exponent(pts, cfg.alpha, cfg.rho, corrected=corrected)
    except asy.FitError as exc:
        raise NumericalFailure(str(exc))
    for r, e in zip(rows, res.residuals):
        r["residual"] = float(e)
    summary = {"alpha": cfg.alpha, "rho": cfg.rho, "log_coeff": res.log_coeff, "C_hat": res.C_hat,
               "C_err": res.C_err, "a": res.a, "a_err": res.a_err, "rms": res.rms,
               "fcet_exponent": expo, "free_log_coeff": free.log_coeff,
               "free_log_err": free.log_err}
    headers = ["s", "F", "est_error", "m_used", "residual"]
    if cfg.format == "json":
        text = json.dumps({"summary": {k: _json_value(v) for k, v in summary.items()},
                           "points": [{h: _json_value(r[h]) for h in headers} for r in rows]},
                          indent=1) + "\n"
        write_text(text, cfg)
    else:
        emit(rows, headers, cfg, preamble=["%s = %s" % (k, fmt(v)) for k, v in summary.items()])


@main.command()
@click.option("--suite", default=None, help="w, lambda, kernel, bessel, parametrix, identities or all")
@click.option("--format", "format", type=click.Choice(["csv", "json"]))
@click.option("--out")
@click.option("--config", "config", type=click.Path())
def verify(**kw):
    """Run invariant checks; exit 0 iff every check passes."""
    from .checks import run_suite
    cfg = _cfg(kw)
    try:
        results = run_suite(cfg.suite)
    except KeyError as exc:
        raise ConfigError(exc.args[0])
    emit([c.row() for c in results], ["suite", "check", "residual", "threshold", "passed"], cfg)
    failed = [c.name for c in results if not c.passed]
    if failed:
        click.echo("failed: %s" % ", ".join(failed), err=True)
        sys.exit(EXIT_NUMERIC)


@main.command()
@click.argument("x", type=float, required=False)
@click.argument("y", type=float, required=False)
@click.option("--diag", type=float, help="evaluate K(x, x)")
@click.option("--alpha", type=float)
@click.option("--rho", type=float)
@click.option("--format", "format", type=click.Choice(["csv", "json"]))
@click.option("--out")
@click.option("--config", "config", type=click.Path())
def kernel(x, y, diag, **kw):
    """K(x, y) from every available representation with pairwise deviations."""
    cfg = _cfg(kw)
    if diag is not None:
        if x is not None or y is not None:
            raise ConfigError("give either X Y or --diag X")
        x = y = diag
    elif x is None or y is None:
        raise ConfigError("need X and Y, or --diag X")
    if not (x > 0 and y > 0):
        raise ConfigError("x and y must be positive")
    vals = {}
    try:
        if x == y:
            vals["psi"] = K.kernel_diag(x, cfg.alpha, cfg.rho)
        else:
            vals["psi"] = K.kernel_psi(x, y, cfg.alpha, cfg.rho)
        try:
            vals["double"] = K.kernel_double(x, y, cfg.alpha, cfg.rho)
            if x != y:
                vals["pq"] = K.kernel_pq(x, y, cfg.alpha, cfg.rho)
        except K.UnsupportedRepresentation:
            pass
    except ValueError as exc:
        raise ConfigError(str(exc))
    except ArithmeticError as exc:
        raise NumericalFailure(str(exc))
    names = list(vals)
    rows = [{"representation": n, "value": vals[n]} for n in names]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            rows.append({"representation": "%s-%s" % (a, b), "value": abs(vals[a] - vals[b])})
    emit(rows, ["representation", "value"], cfg)


if __name__ == "__main__":
    main()
