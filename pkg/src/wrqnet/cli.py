"""Command-line front end.

Subcommands
-----------
build       generate a lattice and write the graph JSON schema
analyze     report regularity, commonality and cut quantities for a graph
verify      property-check the threshold guarantees with random lengths
sweep-fig2  sweep target capacity: max link length and min nodal density
sweep-fig3  sweep link length: ground-vs-satellite daily-rate advantage
calibrate   back-solve the effective satellite transit time

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
Sweeps write a CSV plus rendered PNG figures next to it.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path

from . import capacity as cap_mod
from . import flow, lattice, satcomp
from .netgraph import (UserPair, commonality_superset, dump_network,
                       min_commonality_multiset, network_from_json)

_FAMILIES = [f.value for f in lattice.LatticeFamily]


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    text = Path(path).read_text()
    if path.endswith(".toml"):
        try:
            import tomllib  # py >= 3.11
        except ImportError as exc:  # pragma: no cover
            raise SystemExit("TOML config requires Python >= 3.11; "
                             "use JSON instead") from exc
        doc = tomllib.loads(text)
    else:
        doc = json.loads(text)
    known = {"fibre", "satellite"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return doc


def _fibre_params(config: dict, args) -> cap_mod.FibreParams:
    fields = dict(config.get("fibre", {}))
    unknown = set(fields) - {"gamma", "alpha", "t_daily"}
    if unknown:
        raise ValueError(f"unknown fibre config keys: {sorted(unknown)}")
    for name in ("gamma", "alpha", "t_daily"):
        flag = getattr(args, name, None)
        if flag is not None:
            fields[name] = flag  # flags beat the config file
    return cap_mod.FibreParams(**fields)


def _sat_config(config: dict, preset: str) -> satcomp.SatConfig:
    cfg = satcomp.PRESETS[preset]
    overrides = dict(config.get("satellite", {}).get(preset, {}))
    unknown = set(overrides) - {"R_orb", "altitude_km", "t_Q"}
    if unknown:
        raise ValueError(f"unknown satellite config keys: {sorted(unknown)}")
    return replace(cfg, **overrides) if overrides else cfg


def _provenance(args, p: cap_mod.FibreParams) -> dict:
    return {
        "config_file": getattr(args, "config", None),
        "seed": getattr(args, "seed", None),
        "fibre": {"gamma": p.gamma, "alpha": p.alpha, "t_daily": p.t_daily},
    }


def _write_json(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- build ----------------------------------------------------------------

def cmd_build(args, config: dict) -> int:
    net = lattice.build_lattice(lattice.LatticeFamily(args.family),
                                args.rings, args.edge_scale)
    Path(args.out).write_text(dump_network(net))
    return 0


# -- analyze --------------------------------------------------------------

def _auto_users(net, k: int, delta: int) -> UserPair:
    internal = net.internal_nodes() or list(range(net.n_nodes))
    pair = lattice.deep_pair_search(net, k, delta, internal)
    if pair is not None:
        return pair
    # fall back: most separated internal pair sharing no edge or neighbour
    best = None
    for i, a in enumerate(internal):
        for b in internal[i + 1:]:
            if net.has_edge(a, b) or net.neighbor_set(a) & net.neighbor_set(b):
                continue
            sep = ((net.positions[a] - net.positions[b]) ** 2).sum()
            if best is None or sep > best[0]:
                best = (sep, a, b)
    if best is None:
        raise SystemExit("no valid user pair exists in this graph")
    return UserPair(best[1], best[2])


def cmd_analyze(args, config: dict) -> int:
    p = _fibre_params(config, args)
    try:
        doc = json.loads(Path(args.graph).read_text())
    except json.JSONDecodeError as exc:
        print(f"error: malformed graph JSON at line {exc.lineno} "
              f"column {exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    net = network_from_json(doc)
    net = cap_mod.with_plob_capacities(net, p)

    degrees = [net.degree(x) for x in range(net.n_nodes)]
    spectrum: dict[int, int] = {}
    for d in degrees:
        spectrum[d] = spectrum.get(d, 0) + 1
    internal = net.internal_nodes() or list(range(net.n_nodes))
    superset = sorted(commonality_superset(net, internal))
    k = max(len(m) for m in superset)
    full = [m for m in superset if len(m) == k]
    lam_star = min_commonality_multiset(full, k)
    delta = sum(k - l - 1 for l in lam_star)
    omega = Fraction(2 * (k - 1), delta) if delta else None

    if args.users is not None:
        users = UserPair(*args.users)
    else:
        users = _auto_users(net, k, delta)
    prob = flow.FlowProblem(net, users)
    cm, cm_user = flow.min_neighborhood_capacity(prob)
    cut = flow.flooding_capacity(prob)
    menger = (flow.menger_cardinality(net, users)
              if not net.has_edge(users.a, users.b) else None)

    report = {
        "n_nodes": net.n_nodes,
        "n_edges": len(net.edges),
        "k_spectrum": {str(d): c for d, c in sorted(spectrum.items())},
        "lambda_superset": [list(m) for m in superset],
        "lambda_star": list(lam_star),
        "delta": delta,
        "omega": str(omega) if omega is not None else None,
        "users": [users.a, users.b],
        "min_neighborhood_capacity": cm,
        "min_neighborhood_user": cm_user,
        "flooding_capacity": cut.value,
        "cut_set": sorted([e.u, e.v] for e in cut.cut_set),
        "menger_cardinality": menger,
        "run": _provenance(args, p),
    }
    _write_json(report, args.out)
    return 0


# -- verify ---------------------------------------------------------------

def cmd_verify(args, config: dict) -> int:
    p = _fibre_params(config, args)
    report = flow.verify_threshold_theorem(
        lattice.LatticeFamily(args.family), args.rings, args.capacity,
        args.mode, trials=args.trials, seed=args.seed, fibre=p)
    doc = report.to_json()
    doc["run"] = _provenance(args, p)
    _write_json(doc, args.out)
    if not report.passed:
        print(f"verification failed on trials {list(report.failures)[:10]}",
              file=sys.stderr)
        return 1
    return 0


# -- sweeps ---------------------------------------------------------------

def _fig2_row(item) -> list:
    family, c, gamma = item
    p = cap_mod.FibreParams(gamma=gamma)
    chars = lattice.characteristics(lattice.LatticeFamily(family))
    d_max = cap_mod.max_link_length(c, chars.delta, p)
    rho = cap_mod.min_nodal_density(c, chars.delta, chars.xi, p)
    return [family, c, d_max, rho]


def _waxman_row(c: float) -> list:
    # density at which the random-network regression reaches capacity c
    rho = cap_mod.WAXMAN_RHO_CRIT + (c + 1.0) / cap_mod.WAXMAN_ZETA
    return ["waxman", c, "", rho]


def _parallel_map(func, items, jobs: int):
    if jobs > 1:
        with Pool(jobs) as pool:
            return pool.map(func, items)
    return [func(item) for item in items]


def _log_space(lo: float, hi: float, samples: int) -> list[float]:
    step = (math.log10(hi) - math.log10(lo)) / (samples - 1)
    return [10.0 ** (math.log10(lo) + i * step) for i in range(samples)]


def _figure_path(out: str, suffix: str) -> Path:
    stem = Path(out)
    return stem.with_name(stem.stem + "_" + suffix + ".png")


def cmd_sweep_fig2(args, config: dict) -> int:
    p = _fibre_params(config, args)
    cs = _log_space(1e-2, 1e1, args.samples)
    items = [(family, c, p.gamma) for family in _FAMILIES for c in cs]
    rows = _parallel_map(_fig2_row, items, args.jobs)
    rows += [_waxman_row(c) for c in cs]
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["family", "c_target", "d_max_km", "rho_min"])
        writer.writerows(rows)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 4))
    for family in _FAMILIES:
        xs = [r[1] for r in rows if r[0] == family]
        ys = [r[2] for r in rows if r[0] == family]
        ax.plot(xs, ys, label=family)
    ax.set_xscale("log")
    ax.set_xlabel("target capacity [bits/use]")
    ax.set_ylabel("maximum link length [km]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(_figure_path(args.out, "dmax"))
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5.5, 4))
    for family in _FAMILIES + ["waxman"]:
        xs = [r[3] for r in rows if r[0] == family]
        ys = [r[1] for r in rows if r[0] == family]
        style = "--" if family == "waxman" else "-"
        ax.plot(xs, ys, style, label=family)
    ax.set_yscale("log")
    ax.set_xlabel("nodal density [nodes/km^2]")
    ax.set_ylabel("target capacity [bits/use]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(_figure_path(args.out, "density"))
    plt.close(fig)
    return 0


def _fig3_row(item) -> list:
    family, d, label, r_orb, h, t_q, gamma = item
    p = cap_mod.FibreParams(gamma=gamma)
    cfg = satcomp.SatConfig(label, r_orb, h, t_q)
    sat = satcomp.sat_daily_rate(cfg, p)
    if family == "chain":
        ground = satcomp.chain_daily_rate(d, p)
        rho = ""
    else:
        chars = lattice.characteristics(lattice.LatticeFamily(family))
        ground = satcomp.wrn_daily_rate(d, chars, p)
        rho = chars.xi / d ** 2
    return [family, d, rho, satcomp.daily_advantage(ground, sat), "sample"]


def cmd_sweep_fig3(args, config: dict) -> int:
    p = _fibre_params(config, args)
    cfg = _sat_config(config, args.preset)
    ds = _log_space(50.0, 600.0, args.samples)
    families = ["chain"] + _FAMILIES
    items = [(family, d, cfg.label, cfg.R_orb, cfg.altitude_km, cfg.t_Q,
              p.gamma) for family in families for d in ds]
    rows = _parallel_map(_fig3_row, items, args.jobs)
    rows.sort(key=lambda r: (r[0], r[1]))
    for family in families:
        chars = (None if family == "chain" else
                 lattice.characteristics(lattice.LatticeFamily(family)))
        try:
            d_star = satcomp.critical_separation(cfg, p, chars)
        except satcomp.NoCriticalPoint as exc:
            print(f"{family}: {exc}", file=sys.stderr)
            continue
        rho = "" if chars is None else chars.xi / d_star ** 2
        rows.append([family, d_star, rho, 0.0, "critical"])
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["family", "d_max_km", "rho", "delta_k_db",
                         "row_type"])
        writer.writerows(rows)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 4))
    for family in families:
        xs = [r[1] for r in rows if r[0] == family and r[4] == "sample"]
        ys = [r[3] for r in rows if r[0] == family and r[4] == "sample"]
        ax.plot(xs, ys, label=family)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("maximum link length [km]")
    ax.set_ylabel("daily-rate advantage [dB]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(_figure_path(args.out, "advantage_distance"))
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5.5, 4))
    for family in _FAMILIES:
        xs = [r[2] for r in rows if r[0] == family and r[4] == "sample"]
        ys = [r[3] for r in rows if r[0] == family and r[4] == "sample"]
        ax.plot(xs, ys, label=family)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("nodal density [nodes/km^2]")
    ax.set_ylabel("daily-rate advantage [dB]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(_figure_path(args.out, "advantage_density"))
    plt.close(fig)
    return 0


def cmd_calibrate(args, config: dict) -> int:
    p = _fibre_params(config, args)
    cfg = _sat_config(config, args.preset)
    t_q = satcomp.calibrate_transit_time(cfg, args.chain_d_star, p)
    _write_json({"preset": cfg.label, "chain_d_star_km": args.chain_d_star,
                 "t_Q_seconds": t_q, "run": _provenance(args, p)}, args.out)
    return 0


# -- parser ---------------------------------------------------------------

def _add_fibre_flags(sub) -> None:
    sub.add_argument("--gamma", type=_positive_float, default=None,
                     help="fibre loss exponent per km")
    sub.add_argument("--alpha", type=_positive_float, default=None,
                     help="channel uses per second")
    sub.add_argument("--t-daily", dest="t_daily", type=_positive_float,
                     default=None, help="seconds per day")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wrqnet",
        description="weakly-regular quantum-network capacity toolkit")
    parser.add_argument("--config", default=None,
                        help="JSON (or TOML) parameter overrides")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=_positive_int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", help="generate a lattice graph JSON")
    sp.add_argument("--family", choices=_FAMILIES, required=True)
    sp.add_argument("--rings", type=_positive_int, required=True)
    sp.add_argument("--edge-scale", dest="edge_scale", type=_positive_float,
                    default=1.0, help="longest edge length in km")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("analyze", help="analyse a graph JSON file")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--users", nargs=2, type=int, default=None,
                    metavar=("A", "B"))
    sp.add_argument("--out", default=None)
    _add_fibre_flags(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="randomized threshold verification")
    sp.add_argument("--family", choices=_FAMILIES, required=True)
    sp.add_argument("--rings", type=_positive_int, required=True)
    sp.add_argument("--capacity", type=_positive_float, default=1.0)
    sp.add_argument("--mode", choices=["bounds", "equality"],
                    default="equality")
    sp.add_argument("--trials", type=_positive_int, default=100)
    sp.add_argument("--out", default=None)
    _add_fibre_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep-fig2",
                        help="capacity sweep: link lengths and densities")
    sp.add_argument("--out", required=True, help="CSV path")
    sp.add_argument("--samples", type=_positive_int, default=60)
    _add_fibre_flags(sp)
    sp.set_defaults(func=cmd_sweep_fig2)

    sp = sub.add_parser("sweep-fig3",
                        help="separation sweep: daily-rate advantage")
    sp.add_argument("--out", required=True, help="CSV path")
    sp.add_argument("--preset", choices=sorted(satcomp.PRESETS),
                    default="down-night")
    sp.add_argument("--samples", type=_positive_int, default=60)
    _add_fibre_flags(sp)
    sp.set_defaults(func=cmd_sweep_fig3)

    sp = sub.add_parser("calibrate", help="back-solve satellite transit time")
    sp.add_argument("--preset", choices=sorted(satcomp.PRESETS),
                    default="down-night")
    sp.add_argument("--chain-d-star", dest="chain_d_star",
                    type=_positive_float,
                    default=satcomp.CHAIN_PARITY_SEPARATION_KM)
    sp.add_argument("--out", default=None)
    _add_fibre_flags(sp)
    sp.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        # seed is shared by any randomized step; stash it for dispatchers
        if getattr(args, "seed", None) is None:
            args.seed = 0
        return args.func(args, config)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
