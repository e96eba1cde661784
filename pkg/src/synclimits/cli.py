"""Command-line front end: every command writes one CSV table.

The first line of each table is a ``# `` comment holding the resolved run
configuration as JSON. Numbers use 17 significant digits.

Exit status: 0 on success, 2 on a configuration error, 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import SynclimitsError
from .kl_transform import (
    cl_psd_field,
    decreasing_rearrangement,
    kl_psd_field,
    representation_entropy,
)
from .lab.filters import apply_kl_wiener, empirical_mse
from .lab.prediction import prediction_mmse_by_order
from .lab.realization import dump_realization, generate_realization
from .mmse import (
    AdditiveScenario,
    high_snr_asymptote,
    mmse_causal,
    mmse_noncausal,
    mmse_prediction,
    mmse_report,
    occupied_band,
)
from .models import SrrcPamModel, composite_model, pulse_time_taps
from .spectral_core import FrequencyGrid

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
COMMANDS = ("spectra", "entropy", "mmse", "highsnr", "syncgain", "simulate", "predict")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    period: int
    deltas: list[float]
    noise_powers: list[float]
    grid_points: int = 1024
    n_samples: int = 2**20
    seed: int = 1
    trials: int = 1
    output: str | None = None
    snr_db: list[float] | None = None
    orders: list[int] = field(default_factory=list)
    dump: str | None = None

    @property
    def snrs(self) -> list[float]:
        return [1.0 / pz for pz in self.noise_powers]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def parse_values(text: str) -> list[float]:
    """Comma list (``1,2,5``) or inclusive range ``start:step:stop``."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ConfigError(f"range must be start:step:stop, got {text!r}")
            start, step, stop = parts
            if step == 0 or (stop - start) / step < 0:
                raise ConfigError(f"range {text!r} is empty")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse numbers from {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--period", "-P", type=int, default=4)
    d = common.add_mutually_exclusive_group()
    d.add_argument("--delta", default=None, help="delay spread list or start:step:stop")
    d.add_argument("--delta-sweep", type=int, default=None, metavar="N",
                   help="N evenly spaced delays from 0 to P/(P-1)")
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("--noise-power", default=None)
    noise.add_argument("--snr", default=None)
    noise.add_argument("--snr-db", default=None)
    common.add_argument("--grid-points", type=int, default=1024)
    common.add_argument("--samples", type=int, default=2**20)
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--output", "-o", default=None)

    parser = argparse.ArgumentParser(prog="synclimits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "predict":
            p.add_argument("--orders", default="1:1:64", help="predictor orders")
        if name == "simulate":
            p.add_argument("--dump", default=None, help="write trial 0 observation to this file")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    P = args.period
    if P < 1:
        raise ConfigError("period must be at least 1")
    dmax = P / (P - 1) if P > 1 else 0.0
    if args.delta_sweep is not None:
        if args.delta_sweep < 2:
            raise ConfigError("--delta-sweep needs at least 2 points")
        deltas = list(np.linspace(0.0, dmax, args.delta_sweep))
    elif args.delta is not None:
        deltas = parse_values(args.delta)
    else:
        deltas = [0.0]
    if not deltas:
        raise ConfigError("no delay values given")
    for dl in deltas:
        if not -1e-12 <= dl <= dmax + 1e-12:
            raise ConfigError(f"delta {dl} outside [0, {dmax:.6g}]")
    deltas = [min(max(dl, 0.0), dmax) for dl in deltas]

    snr_db = None
    if args.noise_power is not None:
        pz = parse_values(args.noise_power)
    elif args.snr is not None:
        pz = [1.0 / s if s > 0 else -1.0 for s in parse_values(args.snr)]
    elif args.snr_db is not None:
        snr_db = parse_values(args.snr_db)
        pz = [10.0 ** (-s / 10.0) for s in snr_db]
    else:
        pz = [1.0]
    if not pz or any(not (p > 0 and math.isfinite(p)) for p in pz):
        raise ConfigError("noise power / SNR values must be positive and finite")
    if args.grid_points < 1 or args.samples < 1 or args.trials < 1:
        raise ConfigError("grid points, samples and trials must be positive")
    if args.seed < 0:
        raise ConfigError("seed must be nonnegative")

    cfg = RunConfig(
        args.command, P, deltas, pz, args.grid_points, args.samples, args.seed, args.trials, args.output, snr_db
    )
    if args.command == "predict":
        orders = parse_values(args.orders)
        if not orders or any(o != int(o) or o < 0 for o in orders):
            raise ConfigError("orders must be nonnegative integers")
        cfg.orders = [int(o) for o in orders]
    if args.command == "simulate":
        cfg.dump = args.dump
    return cfg


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if not math.isfinite(v):
        raise FloatingPointError("non-finite value in output table")
    return "%.17g" % v


class Table:
    def __init__(self, cfg: RunConfig, columns: list[str]):
        self.buf = io.StringIO()
        self.buf.write("# " + cfg.to_json() + "\n")
        self.buf.write(",".join(columns) + "\n")

    def row(self, *values) -> None:
        self.buf.write(",".join(_fmt(v) for v in values) + "\n")

    def rows(self, columns) -> None:
        for vals in zip(*columns):
            self.row(*vals)

    def text(self) -> str:
        return self.buf.getvalue()


def cmd_spectra(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    pz = cfg.noise_powers[0]
    t = Table(cfg, ["delta", "lambda", "cl_psd", "kl_psd", "cl_psd_sorted", "kl_psd_sorted"])
    for dl in cfg.deltas:
        x = composite_model(SrrcPamModel(cfg.period, dl), pz)
        kl, cl = kl_psd_field(x, grid), cl_psd_field(x, grid)
        # CL field ordered by frequency for plotting
        order = np.argsort(cl.lambdas, kind="stable")
        t.rows([
            np.full(kl.values.size, dl),
            cl.lambdas[order],
            cl.values[order],
            kl.values[order],
            decreasing_rearrangement(cl).values,
            decreasing_rearrangement(kl).values,
        ])
    return t.text()


def cmd_entropy(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    pz = cfg.noise_powers[0]
    t = Table(cfg, ["delta", "h_kl", "h_cl"])
    for dl in cfg.deltas:
        x = composite_model(SrrcPamModel(cfg.period, dl), pz)
        t.row(dl, representation_entropy(kl_psd_field(x, grid)), representation_entropy(cl_psd_field(x, grid)))
    return t.text()


def cmd_mmse(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    cols = ["snr", "mmse_nc", "mmse_c", "mmse_p", "mmse_nc_wss", "mmse_c_wss", "mmse_p_wss"]
    t = Table(cfg, ["delta"] + cols)
    for dl in cfg.deltas:
        sig = SrrcPamModel(cfg.period, dl)
        for pz in cfg.noise_powers:
            r = mmse_report(AdditiveScenario(sig, pz), grid)
            t.row(dl, *(getattr(r, c) for c in cols))
    return t.text()


def cmd_highsnr(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    t = Table(cfg, ["delta", "snr_db", "mode", "mmse_times_snr", "asymptote"])
    for dl in cfg.deltas:
        sig = SrrcPamModel(cfg.period, dl)
        band = occupied_band(sig, grid)
        for pz in cfg.noise_powers:
            sc = AdditiveScenario(sig, pz)
            snr = sc.snr
            db = 10.0 * math.log10(snr)
            values = {
                "noncausal": mmse_noncausal(sc, grid),
                "causal": mmse_causal(sc, grid),
                "prediction": mmse_prediction(sc, grid),
            }
            for mode, v in values.items():
                t.row(dl, db, mode, v * snr, high_snr_asymptote(mode, band, snr) * snr)
    return t.text()


def cmd_syncgain(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    dmax = cfg.period / (cfg.period - 1)
    t = Table(cfg, ["snr", "delta_normalized", "inv_zeta_nc", "inv_zeta_c", "inv_zeta_p"])
    for pz in cfg.noise_powers:
        for dl in cfg.deltas:
            g = mmse_report(AdditiveScenario(SrrcPamModel(cfg.period, dl), pz), grid).gains
            t.row(1.0 / pz, dl / dmax, 1.0 / g.zeta_nc, 1.0 / g.zeta_c, 1.0 / g.zeta_p)
    return t.text()


def cmd_simulate(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    if cfg.n_samples % cfg.period:
        raise ConfigError("--samples must be a multiple of the period")
    pulse = pulse_time_taps(cfg.period)
    edge = pulse.half_length
    if cfg.n_samples <= 2 * edge + pulse.taps.size:
        raise ConfigError("--samples too small for the pulse length")
    t = Table(cfg, ["delta", "snr", "empirical_mse", "analytic_mmse", "rel_error"])
    for dl in cfg.deltas:
        sig = SrrcPamModel(cfg.period, dl)
        for pz in cfg.noise_powers:
            sc = AdditiveScenario(sig, pz)
            mse = 0.0
            for trial in range(cfg.trials):
                r = generate_realization(sig, pz, cfg.n_samples, cfg.seed, trial, pulse)
                r.d_hat = apply_kl_wiener(sc, r.x)
                mse += empirical_mse(r.d, r.d_hat, edge)
                if cfg.dump and trial == 0 and dl == cfg.deltas[0] and pz == cfg.noise_powers[0]:
                    dump_realization(r, cfg.dump)
            mse /= cfg.trials
            ref = mmse_noncausal(sc, grid)
            t.row(dl, sc.snr, mse, ref, (mse - ref) / ref)
    return t.text()


def cmd_predict(cfg: RunConfig) -> str:
    grid = FrequencyGrid(cfg.period, cfg.grid_points)
    top = max(cfg.orders)
    t = Table(cfg, ["delta", "noise_power", "N", "finite_mmse", "bound"])
    for dl in cfg.deltas:
        sig = SrrcPamModel(cfg.period, dl)
        for pz in cfg.noise_powers:
            by_phase = np.array([prediction_mmse_by_order(sig, pz, top, ph) for ph in range(cfg.period)])
            geo = np.exp(np.mean(np.log(by_phase), axis=0))
            bound = mmse_prediction(AdditiveScenario(sig, pz), grid)
            for n in cfg.orders:
                t.row(dl, pz, n, geo[n], bound)
    return t.text()


HANDLERS = {
    "spectra": cmd_spectra,
    "entropy": cmd_entropy,
    "mmse": cmd_mmse,
    "highsnr": cmd_highsnr,
    "syncgain": cmd_syncgain,
    "simulate": cmd_simulate,
    "predict": cmd_predict,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        text = HANDLERS[cfg.command](cfg)
    except (SynclimitsError, FloatingPointError, np.linalg.LinAlgError) as exc:
        if isinstance(exc, ValueError):
            print(f"synclimits: error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"synclimits: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"synclimits: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.output:
        with open(cfg.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
