"""
Scenario runner: ``fermient <scenario> [options]``.

Configuration is a flat ``key = value`` text file (``#`` starts a comment);
command-line flags override file values.  Keys and defaults:

    scenario        dimer-curve | eks-thermal | free-thermal | spectrum | car-check | rho-site
    model           free | hubbard | eks       (default depends on the scenario)
    sites           site count                 (eks/hubbard: 2, free: 8)
    t               hopping                    1.0
    u               on-site repulsion          0.0
    mu              chemical potential list    0.0
    beta            inverse temperature list   1.0
    boundary        open | periodic            (free: periodic, otherwise open)
    u_over_4t_min   dimer-curve grid start     0.0
    u_over_4t_max   dimer-curve grid end       10.0
    points          dimer-curve grid size      201
    decomposition   real | reciprocal | unitary:FILE     real
    entropy         vn | linear                (dimer-curve: linear, otherwise vn)
    site            site for rho-site          0
    by_sector       spectrum per sector        false
    format          csv | json                 csv
    out             output path                (stdout)

Exit codes: 0 success, 2 configuration error, 3 resource cap, 4 degeneracy refusal.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import dimer
from .entanglement import EntropyKind, entropy, partial_trace_site
from .errors import DegeneracyError, DomainError, FermientError, ResourceError
from .fock import SpinResolved, annihilate, build_basis, create, realize_matrix
from .models import ModelKind, ModelSpec
from .spectral import ThermalParams, diagonalize, ground_entries, mean_filling, thermal_local_entanglement
from .transform import ModeMap, express_in, fourier_map, induce_fock_unitary

log = logging.getLogger("fermient")

SCENARIOS = ("dimer-curve", "eks-thermal", "free-thermal", "spectrum", "car-check", "rho-site")

DEFAULT_MODEL = {
    "dimer-curve": "hubbard",
    "eks-thermal": "eks",
    "free-thermal": "free",
    "spectrum": "eks",
    "car-check": "free",
    "rho-site": "hubbard",
}

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_DEGENERATE = 0, 2, 3, 4


class ConfigError(FermientError, ValueError):
    """A configuration problem tied to a field and, when known, a line number."""

    def __init__(self, field: str, message: str, line: int | None = None):
        self.field = field
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}field {field!r}: {message}")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    model: str
    sites: int
    t: float = 1.0
    u: float = 0.0
    mu: tuple[float, ...] = (0.0,)
    beta: tuple[float, ...] = (1.0,)
    boundary: str = "open"
    u_over_4t_min: float = 0.0
    u_over_4t_max: float = 10.0
    points: int = 201
    decomposition: str = "real"
    entropy: str = "vn"
    site: int = 0
    by_sector: bool = False
    format: str = "csv"
    out: str = ""

    def to_text(self) -> str:
        """The effective configuration in the key-value file format."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def model_spec(self, mu: float = 0.0) -> ModelSpec:
        return ModelSpec(ModelKind(self.model), self.sites, self.t, self.u, mu, self.boundary)


KEYS = {f.name for f in fields(ScenarioConfig)}


def _read_pairs(text: str) -> dict[str, tuple[str, int | None]]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line.split()[0], "expected 'key = value'", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key", lineno)
        out[key] = (value, lineno)
    return out


def _float(key, value, line) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {value!r}", line) from None
    if not np.isfinite(x):
        raise ConfigError(key, f"must be finite, got {value!r}", line)
    return x


def _int(key, value, line) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {value!r}", line) from None


def _float_list(key, value, line) -> tuple[float, ...]:
    items = [s.strip() for s in value.split(",") if s.strip()]
    if not items:
        raise ConfigError(key, "list must not be empty", line)
    values = [_float(key, s, line) for s in items]
    unique = tuple(dict.fromkeys(values))
    if len(unique) < len(values):
        log.warning("field %r: duplicate values removed", key)
    return unique


def _bool(key, value, line) -> bool:
    if value.lower() in ("true", "yes", "1"):
        return True
    if value.lower() in ("false", "no", "0"):
        return False
    raise ConfigError(key, f"expected true or false, got {value!r}", line)


def _choice(key, value, line, options) -> str:
    if value not in options:
        raise ConfigError(key, f"expected one of {', '.join(options)}, got {value!r}", line)
    return value


def parse_config(text: str = "", overrides: dict[str, str] | None = None) -> ScenarioConfig:
    """
    Parse the key-value format, apply ``overrides`` (raw strings, e.g. from
    flags) on top, fill defaults and validate every field.
    """
    pairs = _read_pairs(text)
    for key, value in (overrides or {}).items():
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        pairs[key] = (str(value), None)

    def get(key):
        return pairs.get(key, (None, None))

    value, line = get("scenario")
    if value is None:
        raise ConfigError("scenario", "missing")
    scenario = _choice("scenario", value, line, SCENARIOS)

    value, line = get("model")
    model = _choice("model", value, line, [k.value for k in ModelKind]) if value else DEFAULT_MODEL[scenario]

    cfg = {"scenario": scenario, "model": model}
    value, line = get("sites")
    cfg["sites"] = _int("sites", value, line) if value else (8 if model == "free" else 2)
    if cfg["sites"] < 1:
        raise ConfigError("sites", "must be at least 1", line)
    for key in ("t", "u", "u_over_4t_min", "u_over_4t_max"):
        value, line = get(key)
        if value is not None:
            cfg[key] = _float(key, value, line)
    for key in ("mu", "beta"):
        value, line = get(key)
        if value is not None:
            cfg[key] = _float_list(key, value, line)
    for key in ("points", "site"):
        value, line = get(key)
        if value is not None:
            cfg[key] = _int(key, value, line)
    value, line = get("by_sector")
    if value is not None:
        cfg["by_sector"] = _bool("by_sector", value, line)

    value, line = get("boundary")
    cfg["boundary"] = _choice("boundary", value, line, ("open", "periodic")) if value else (
        "periodic" if model == "free" else "open"
    )
    value, line = get("entropy")
    cfg["entropy"] = _choice("entropy", value, line, ("vn", "linear")) if value else (
        "linear" if scenario == "dimer-curve" else "vn"
    )
    value, line = get("decomposition")
    if value is not None:
        if not (value in ("real", "reciprocal") or (value.startswith("unitary:") and len(value) > 8)):
            raise ConfigError("decomposition", f"expected real, reciprocal or unitary:FILE, got {value!r}", line)
        cfg["decomposition"] = value
    value, line = get("format")
    if value is not None:
        cfg["format"] = _choice("format", value, line, ("csv", "json"))
    value, line = get("out")
    if value is not None:
        cfg["out"] = value

    config = ScenarioConfig(**cfg)
    _validate(config, pairs)
    return config


def _validate(cfg: ScenarioConfig, pairs) -> None:
    def fail(key, msg):
        raise ConfigError(key, msg, pairs.get(key, (None, None))[1])

    if cfg.u_over_4t_max < 0:
        fail("u_over_4t_max", f"must be >= 0, got {cfg.u_over_4t_max}")
    if cfg.u_over_4t_min < 0:
        fail("u_over_4t_min", f"must be >= 0, got {cfg.u_over_4t_min}")
    if cfg.u_over_4t_min > cfg.u_over_4t_max:
        fail("u_over_4t_min", "must not exceed u_over_4t_max")
    if cfg.points < 1:
        fail("points", f"must be at least 1, got {cfg.points}")
    if any(b < 0 for b in cfg.beta):
        fail("beta", "inverse temperatures must be >= 0")
    if cfg.t <= 0 and cfg.model != "eks":
        fail("t", f"hopping must be positive, got {cfg.t}")
    if cfg.u < 0:
        fail("u", f"only repulsive U >= 0 is supported, got {cfg.u}")
    if cfg.model == "eks" and cfg.sites != 2:
        fail("sites", "the EKS model is defined on two sites")
    if cfg.scenario == "dimer-curve" and cfg.model != "hubbard":
        fail("model", "dimer-curve needs the hubbard model")
    if cfg.scenario == "eks-thermal" and cfg.model != "eks":
        fail("model", "eks-thermal needs the eks model")
    if cfg.scenario == "free-thermal" and cfg.model != "free":
        fail("model", "free-thermal needs the free model")
    if cfg.scenario != "free-thermal" and len(cfg.mu) != 1:
        fail("mu", "a list of chemical potentials is only meaningful for free-thermal")
    if not 0 <= cfg.site < cfg.sites:
        fail("site", f"must lie in [0, {cfg.sites})")


def load_unitary(path: str | Path) -> ModeMap:
    """Read a mode map: first line ``L``, then ``L`` rows of ``2L`` floats (re, im interleaved)."""
    try:
        lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise ConfigError("decomposition", f"cannot read {path}: {exc}") from None
    try:
        n = int(lines[0][0])
        rows = np.array([[float(x) for x in row] for row in lines[1:]])
    except (IndexError, ValueError):
        raise ConfigError("decomposition", f"malformed unitary file {path}") from None
    if rows.shape != (n, 2 * n):
        raise ConfigError("decomposition", f"expected {n} rows of {2 * n} numbers in {path}")
    try:
        return ModeMap(rows[:, 0::2] + 1j * rows[:, 1::2], Path(path).stem)
    except DomainError as exc:
        raise ConfigError("decomposition", str(exc)) from None


def _decomposition_unitary(cfg: ScenarioConfig):
    if cfg.decomposition == "real":
        return None
    mode_map = fourier_map(cfg.sites) if cfg.decomposition == "reciprocal" else load_unitary(cfg.decomposition[8:])
    if mode_map.n_modes != cfg.sites:
        raise ConfigError("decomposition", f"unitary acts on {mode_map.n_modes} sites, model has {cfg.sites}")
    if cfg.model != "free":
        mode_map = mode_map.spinful()
    return induce_fock_unitary(mode_map)


# --------------------------------------------------------------------------
# scenarios: each returns (columns, rows, summary)

def _dimer_curve(cfg):
    grid = np.linspace(cfg.u_over_4t_min, cfg.u_over_4t_max, cfg.points)
    kind = EntropyKind(cfg.entropy)
    real = dimer.dimer_curve(cfg.t, grid, "real", kind)
    recip = dimer.dimer_curve(cfg.t, grid, "reciprocal", kind)
    rows = [(x, s, r) for (x, s), (_, r) in zip(real, recip)]
    summary = (
        f"dimer-curve: U/4t={rows[0][0]:g} S_real={rows[0][1]:.6f} S_reciprocal={rows[0][2]:.6f}; "
        f"U/4t={rows[-1][0]:g} S_real={rows[-1][1]:.6f} S_reciprocal={rows[-1][2]:.6f}"
    )
    return ["U_over_4t", "S_real", "S_reciprocal"], rows, summary


def _eks_thermal(cfg):
    decomp = diagonalize(cfg.model_spec())
    unitary = _decomposition_unitary(cfg)
    kind = EntropyKind(cfg.entropy)
    rows = [(b, thermal_local_entanglement(decomp, ThermalParams(b), kind, unitary)) for b in cfg.beta]
    values = ", ".join(f"{s:.10f}" for _, s in rows)
    return ["beta", "S_thermal"], rows, f"eks-thermal: S_thermal = {values} (3/4 ln 2 = {0.75 * np.log(2):.10f})"


def _free_thermal(cfg):
    decomp = diagonalize(cfg.model_spec(mu=0.0))
    unitary = _decomposition_unitary(cfg)
    kind = EntropyKind(cfg.entropy)
    rows = []
    for b in cfg.beta:
        for mu in cfg.mu:
            params = ThermalParams(b, mu)
            rows.append((b, mu, thermal_local_entanglement(decomp, params, kind, unitary), mean_filling(decomp, params)))
    top = max(rows, key=lambda r: r[2])
    summary = f"free-thermal: L={cfg.sites}, max S_thermal={top[2]:.6f} at beta={top[0]:g}, mu={top[1]:g}"
    return ["beta", "mu", "S_thermal", "mean_filling"], rows, summary


def _spectrum(cfg):
    decomp = diagonalize(cfg.model_spec(mu=cfg.mu[0]))
    groups: dict[tuple[str, float], int] = {}
    for entry in decomp:
        sector = str(entry.sector) if cfg.by_sector else "all"
        match = next((k for k in groups if k[0] == sector and abs(k[1] - entry.energy) < 1e-9), None)
        if match is None:
            groups[(sector, entry.energy)] = 1
        else:
            groups[match] += 1
    rows = sorted(((s, e, n) for (s, e), n in groups.items()), key=lambda r: (r[0], r[1]))
    if not cfg.by_sector:
        rows = sorted(rows, key=lambda r: r[1])
    summary = "spectrum: " + ", ".join(f"{e:.6g} (x{n})" for _, e, n in rows[:8])
    return ["sector", "eigenvalue", "degeneracy"], rows, summary


def car_deviations(n_modes: int) -> dict[str, float]:
    """Maximum deviation of each canonical anticommutation identity on ``n_modes`` modes."""
    basis = build_basis(n_modes)
    c = [realize_matrix(annihilate(i), basis) for i in range(n_modes)]
    cd = [realize_matrix(create(i), basis) for i in range(n_modes)]
    eye = np.eye(len(basis))
    dev_cc = dev_ccd = dev_vac = 0.0
    for i in range(n_modes):
        dev_vac = max(dev_vac, np.abs(c[i][:, 0]).max())
        for j in range(n_modes):
            dev_cc = max(dev_cc, np.abs(c[i] @ c[j] + c[j] @ c[i]).max())
            target = eye if i == j else 0
            dev_ccd = max(dev_ccd, np.abs(c[i] @ cd[j] + cd[j] @ c[i] - target).max())
    return {"{c_i,c_j}": dev_cc, "{c_i,c_j^dag}": dev_ccd, "c_i|0>": dev_vac}


def _car_check(cfg):
    n_modes = cfg.model_spec().n_modes
    rows = list(car_deviations(n_modes).items())
    worst = max(d for _, d in rows)
    verdict = "PASS" if worst < 1e-12 else "FAIL"
    return ["relation", "max_deviation"], rows, f"car-check: M={n_modes} max deviation {worst:.3e} {verdict}"


def _rho_site(cfg):
    spec = cfg.model_spec(mu=cfg.mu[0])
    decomp = diagonalize(spec)
    sector = None
    if spec.kind is ModelKind.HUBBARD:
        sector = SpinResolved(spec.n_sites // 2, spec.n_sites // 2)
    entries = ground_entries(decomp, sector=sector)
    if len(entries) > 1:
        log.warning("ground state is %d-fold degenerate; using the first eigenvector", len(entries))
    v = entries[0].vector
    unitary = _decomposition_unitary(cfg)
    if unitary is not None:
        v = express_in(unitary, v)
    rho = partial_trace_site(v, cfg.site, spec.local_dim, cfg.decomposition)
    rows = [(a, b, rho.rho[a, b].real, rho.rho[a, b].imag) for a in range(rho.dim) for b in range(rho.dim)]
    s_vn = entropy(rho, EntropyKind.VON_NEUMANN)
    s_lin = entropy(rho, EntropyKind.LINEAR)
    summary = f"rho-site: site {cfg.site}, S_vn={s_vn:.6f}, S_linear={s_lin:.6f}"
    return ["row", "col", "real", "imag"], rows, summary


RUNNERS = {
    "dimer-curve": _dimer_curve,
    "eks-thermal": _eks_thermal,
    "free-thermal": _free_thermal,
    "spectrum": _spectrum,
    "car-check": _car_check,
    "rho-site": _rho_site,
}


def _cell(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def render(cfg: ScenarioConfig, columns, rows) -> str:
    if cfg.format == "json":
        body = {
            "config": asdict(cfg),
            "columns": list(columns),
            "rows": [[float(x) if isinstance(x, np.floating) else x for x in row] for row in rows],
        }
        return json.dumps(body, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(x) for x in row) + "\n")
    return buf.getvalue()


def run_scenario(cfg: ScenarioConfig, stdout=None) -> int:
    """Run one scenario, write its table, print the summary line and return the exit code."""
    stdout = stdout or sys.stdout
    columns, rows, summary = RUNNERS[cfg.scenario](cfg)
    text = render(cfg, columns, rows)
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
        print(summary, file=stdout)
    else:
        stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fermient", description="Local entanglement in fermionic lattice models.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--model", choices=[k.value for k in ModelKind])
    p.add_argument("--t")
    p.add_argument("--u")
    p.add_argument("--mu", help="comma-separated list")
    p.add_argument("--beta", help="comma-separated list")
    p.add_argument("--sites")
    p.add_argument("--site")
    p.add_argument("--boundary", choices=("open", "periodic"))
    p.add_argument("--decomposition", help="real, reciprocal or unitary:FILE")
    p.add_argument("--entropy", choices=("vn", "linear"))
    p.add_argument("--points")
    p.add_argument("--by-sector", dest="by_sector", action="store_const", const="true")
    p.add_argument("--u-over-4t-min", dest="u_over_4t_min")
    p.add_argument("--u-over-4t-max", dest="u_over_4t_max")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text, overrides)
        return run_scenario(cfg)
    except (ConfigError, OSError) as exc:
        print(f"fermient: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as exc:
        print(f"fermient: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DegeneracyError as exc:
        print(f"fermient: degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DomainError as exc:
        print(f"fermient: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
