"""Command-line surface: spectral tables, Gibbs data, limit measures,
convergence experiments, and the brute-force equivalence battery.

Every command writes a single record {schema_version, command, inputs,
payload} as JSON (default) or CSV (one atom/mass or table row per line).
Exact rationals are emitted as {"num", "den", "float"} objects so nothing
is silently rounded.  Exit codes: 0 success, 2 infeasible parameters or
out-of-domain values, 3 internal consistency failure, 64 usage errors,
65 malformed numeric input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from fractions import Fraction

from . import families as fam
from . import fock, limits, oracle
from .gibbs import (
    check_negative_powers,
    gibbs_distribution,
    gibbs_point,
    in_pi,
    measure_moment,
)
from .params import (
    ClassicalParams,
    InfeasibleParameters,
    InternalConsistencyError,
    feasibility_check,
    intersection_array,
    spectral_table,
)

SCHEMA_VERSION = "1"

EX_INFEASIBLE = 2
EX_INCONSISTENT = 3
EX_USAGE = 64
EX_NUMERIC = 65

_NUMERIC_TAG = "bad numeric input"


class _UsageError(Exception):
    def __init__(self, message: str, code: int = EX_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        code = EX_NUMERIC if _NUMERIC_TAG in message else EX_USAGE
        raise _UsageError(message, code)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{_NUMERIC_TAG}: {text!r} ({exc})")


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{_NUMERIC_TAG}: {text!r} is not an integer")


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{_NUMERIC_TAG}: {text!r} is not a number")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"{_NUMERIC_TAG}: {text!r} is not a comma-separated integer list"
        )


def _rat(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "float": float(x)}


def _enc(value):
    if isinstance(value, Fraction):
        return _rat(value)
    if isinstance(value, (list, tuple)):
        return [_enc(v) for v in value]
    if isinstance(value, dict):
        return {k: _enc(v) for k, v in value.items()}
    return value


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=_float, default=1e-10, help="comparison tolerance")
    p.add_argument("--prec", type=_float, default=1e-14, help="infinite-product eps")
    p.add_argument("--jmax", type=_int, default=40, help="largest limit atom index")
    p.add_argument("--jmin", type=_int, default=-12, help="smallest lattice atom index")
    p.add_argument("--seed", type=_int, default=0, help="seed echoed into the record")


def _add_cp_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=_int, required=True)
    p.add_argument("--b", type=_int, required=True)
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--beta", type=_fraction, required=True)


def build_parser() -> _Parser:
    parser = _Parser(prog="drgibbs", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("params", help="intersection array and spectral table")
    _add_cp_flags(p)
    _add_common(p)

    p = sub.add_parser("gibbs", help="Gibbs point and normalized spectral measure")
    _add_cp_flags(p)
    p.add_argument("--t", type=_fraction, required=True)
    _add_common(p)

    p = sub.add_parser("psd-check", help="kernel positivity at t = b^-i")
    _add_cp_flags(p)
    p.add_argument("--imax", type=_int, default=6)
    _add_common(p)

    p = sub.add_parser("limit", help="limiting measure (family preset or raw regime)")
    p.add_argument("--preset", choices=fam.FAMILY_NAMES)
    p.add_argument("--q", "--r", dest="base", type=_int, default=2)
    p.add_argument("--delta", type=_fraction, default=None)
    p.add_argument("--parity", choices=("even", "odd"), default=None)
    p.add_argument("--gamma", type=_float, default=0.0)
    p.add_argument(
        "--route",
        choices=("auto", "generic", "closed"),
        default="auto",
        help="closed family formula vs generic regime measure",
    )
    p.add_argument("--kind", choices=limits._KINDS, default=None)
    p.add_argument("--b", type=_int, default=None)
    p.add_argument("--alpha", type=_fraction, default=None)
    p.add_argument("--rho", type=_float, default=None)
    p.add_argument("--eta", type=_float, default=None)
    _add_common(p)

    p = sub.add_parser("converge", help="finite measures against the limit measure")
    p.add_argument("--preset", choices=fam.FAMILY_NAMES, required=True)
    p.add_argument("--q", "--r", dest="base", type=_int, default=2)
    p.add_argument("--delta", type=_fraction, default=None)
    p.add_argument("--parity", choices=("even", "odd"), default=None)
    p.add_argument("--d-list", type=_int_list, default=[4, 6, 8, 10])
    p.add_argument("--t-rule", default="0", help="'0' or 'NUM,OFFSET,DEN'")
    p.add_argument("--j-list", type=_int_list, default=None)
    p.add_argument("--gamma", type=_float, default=None)
    _add_common(p)

    p = sub.add_parser("qclt", help="finite vs limit mixed moments, word by word")
    p.add_argument("--preset", choices=fam.FAMILY_NAMES, required=True)
    p.add_argument("--q", "--r", dest="base", type=_int, default=2)
    p.add_argument("--delta", type=_fraction, default=None)
    p.add_argument("--parity", choices=("even", "odd"), default=None)
    p.add_argument("--d-list", type=_int_list, default=[4, 6, 8, 10, 12])
    p.add_argument("--t-rule", default="1,0,1", help="'0' or 'NUM,OFFSET,DEN'")
    p.add_argument("--words", default=None, help="comma-separated words over + - o")
    p.add_argument("--max-word-len", type=_int, default=2)
    p.add_argument("--gamma", type=_float, default=None)
    _add_common(p)

    p = sub.add_parser("oracle", help="brute-force equivalence battery")
    p.add_argument(
        "--battery",
        default="all",
        help="instance key (%s) or 'all'" % ", ".join(sorted(oracle.BATTERY)),
    )
    p.add_argument(
        "--dump-adjacency",
        action="store_true",
        help="print the edge list ('u v' per line) instead of the report",
    )
    _add_common(p)
    p.set_defaults(tol=1e-7)  # eigenvalue-matching tolerance for this command

    p = sub.add_parser("families", help="list the family presets")
    _add_common(p)

    return parser


def _record(command: str, inputs: dict, payload: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": _enc(inputs),
        "payload": payload,
    }


def _emit(record: dict, fmt: str, csv_rows, out) -> None:
    if fmt == "json":
        json.dump(record, out, indent=2, default=str)
        out.write("\n")
        return
    header, rows = csv_rows
    for key, value in record["inputs"].items():
        out.write(f"# {key}={value}\n")
    writer = csv.writer(out)
    writer.writerow(header)
    writer.writerows(rows)


def _cp_from_args(args) -> ClassicalParams:
    return ClassicalParams(args.d, args.b, args.alpha, args.beta)


def _descriptor(args) -> fam.FamilyDescriptor:
    return fam.FamilyDescriptor(
        args.preset, args.base, delta=args.delta, parity=args.parity
    )


def _measure_payload(mu) -> dict:
    return {
        "atoms": list(mu.atoms),
        "masses": _enc(list(mu.masses)),
        "masses_float": [float(w) for w in mu.masses],
        "truncated": mu.truncated,
        "tail_bound": mu.tail_bound,
        "positivity": mu.positivity,
        "moments_0_to_2": [measure_moment(mu, m) for m in range(3)],
    }


def _measure_csv(mu, j_start=0):
    rows = [
        (j_start + i, mu.atoms[i], float(mu.masses[i])) for i in range(len(mu.atoms))
    ]
    return ("j", "atom", "mass"), rows


def _cmd_params(args, out) -> int:
    cp = _cp_from_args(args)
    ia = intersection_array(cp)
    st = spectral_table(cp)
    report = feasibility_check(cp)
    payload = {
        "k": _rat(ia.k),
        "b_seq": _enc(ia.b_seq),
        "c_seq": _enc(ia.c_seq),
        "a_seq": _enc(ia.a_seq),
        "k_seq": _enc(ia.k_seq),
        "theta": _enc(st.theta),
        "mult": _enc(st.mult),
        "vertex_count": _rat(st.vertex_count),
        "v_matrix": _enc(st.v_matrix),
        "feasibility": {
            "ok": report.ok,
            "violations": list(report.violations),
            "notes": list(report.notes),
        },
    }
    rows = [
        (
            i,
            float(ia.b_seq[i]),
            float(ia.c_seq[i]),
            float(ia.a_seq[i]),
            float(ia.k_seq[i]),
            float(st.theta[i]),
            float(st.mult[i]),
        )
        for i in range(cp.d + 1)
    ]
    _emit(
        _record("params", _inputs(args), payload),
        args.format,
        (("i", "b_i", "c_i", "a_i", "k_i", "theta_i", "m_i"), rows),
        out,
    )
    return 0 if report.ok else EX_INFEASIBLE


def _cmd_gibbs(args, out) -> int:
    cp = _cp_from_args(args)
    st = spectral_table(cp)
    gp = gibbs_point(cp, st, args.t)
    mu = gibbs_distribution(cp, st, args.t)
    payload = {
        "mean": _rat(gp.mean),
        "variance": _rat(gp.variance),
        "kt_spectrum": _enc(gp.kt_spectrum),
        "in_pi": in_pi(gp),
        "distribution": _measure_payload(mu),
    }
    rows = [
        (j, float(st.theta[j]), float(gp.kt_spectrum[j]), mu.atoms[j], float(mu.masses[j]))
        for j in range(cp.d + 1)
    ]
    _emit(
        _record("gibbs", _inputs(args), payload),
        args.format,
        (("j", "theta_j", "kt_j", "atom_j", "mass_j"), rows),
        out,
    )
    return 0


def _cmd_psd_check(args, out) -> int:
    cp = _cp_from_args(args)
    report = check_negative_powers(cp, args.imax)
    payload = {
        "ok": report.ok,
        "entries": [
            {
                "i": e.i,
                "t": _rat(e.t),
                "min_eigenvalue": _rat(e.min_eigenvalue),
                "psd": e.psd,
            }
            for e in report.entries
        ],
    }
    rows = [(e.i, float(e.t), float(e.min_eigenvalue), e.psd) for e in report.entries]
    _emit(
        _record("psd-check", _inputs(args), payload),
        args.format,
        (("i", "t", "min_eigenvalue", "psd"), rows),
        out,
    )
    return 0


_CLOSED_FORM_MAP = {
    "grassmann": lambda a: limits.ClosedFormPreset(
        "grassmann", a.base, delta=a.delta if a.delta is not None else Fraction(1)
    ),
    "twisted_grassmann": lambda a: limits.ClosedFormPreset(
        "grassmann", a.base, delta=Fraction(1)
    ),
    "half_dual_polar": lambda a: limits.ClosedFormPreset(
        "half_dual_polar", a.base, epsilon=0 if (a.parity or "even") == "even" else 1
    ),
    "ustimenko": lambda a: limits.ClosedFormPreset(
        "half_dual_polar", a.base, epsilon=0 if (a.parity or "even") == "even" else 1
    ),
    "second_hermitian_dual_polar": lambda a: limits.ClosedFormPreset(
        "second_dual_polar", a.base, sign=-1 if (a.parity or "even") == "even" else 1
    ),
    "bilinear": lambda a: limits.ClosedFormPreset(
        "bilinear", a.base, delta=a.delta if a.delta is not None else Fraction(1, 2)
    ),
    "alternating": lambda a: limits.ClosedFormPreset(
        "bilinear",
        a.base * a.base,
        delta=Fraction(-1, 4) if (a.parity or "even") == "even" else Fraction(1, 4),
    ),
    "quadratic": lambda a: limits.ClosedFormPreset(
        "bilinear",
        a.base * a.base,
        delta=Fraction(-1, 4) if (a.parity or "even") == "even" else Fraction(1, 4),
    ),
    "hermitian_forms": lambda a: limits.ClosedFormPreset(
        "hermitian_forms", a.base, sign=-1 if (a.parity or "even") == "even" else 1
    ),
}


def _cmd_limit(args, out) -> int:
    j_start = 0
    if args.preset:
        route = args.route
        if route == "auto":
            route = "closed" if args.preset in _CLOSED_FORM_MAP else "generic"
        if route == "closed":
            if args.preset not in _CLOSED_FORM_MAP:
                raise _UsageError(f"no closed form for preset {args.preset}")
            preset = _CLOSED_FORM_MAP[args.preset](args)
            mu = limits.family_closed_form(
                preset, gamma=args.gamma, j_max=args.jmax, eps=args.prec
            )
        else:
            fd = _descriptor(args)
            parity = args.parity or "even"
            regime = limits.regime_for_family(fd, args.gamma, parity=parity)
            mu = limits.limit_measure(
                regime, j_max=args.jmax, j_min=args.jmin, eps=args.prec
            )
            if regime.kind == limits.CASE_II and regime.rho == 0:
                j_start = args.jmin
    else:
        if args.kind is None or args.b is None or args.alpha is None:
            raise _UsageError("generic limit requires --kind, --b, --alpha")
        regime = limits.LimitRegime(
            args.kind,
            args.b,
            args.alpha,
            args.gamma,
            args.rho if args.rho is not None else 0.0,
            args.eta,
        )
        mu = limits.limit_measure(
            regime, j_max=args.jmax, j_min=args.jmin, eps=args.prec
        )
        if regime.kind == limits.CASE_II and regime.rho == 0:
            j_start = args.jmin
    payload = _measure_payload(mu)
    payload["j_start"] = j_start
    _emit(
        _record("limit", _inputs(args), payload),
        args.format,
        _measure_csv(mu, j_start),
        out,
    )
    return 0


def _cmd_converge(args, out) -> int:
    fd = _descriptor(args)
    result = limits.convergence_table(
        fd,
        args.d_list,
        fam.parse_t_rule(args.t_rule),
        j_list=args.j_list,
        gamma=args.gamma,
        parity=args.parity,
        eps=args.prec,
    )
    payload = {
        "gamma": result["gamma"],
        "regime_kind": result["regime"].kind,
        "j_list": list(result["j_list"]),
        "rows": result["rows"],
    }
    rows = [
        (r["d"], r["max_atom_diff"], r["max_mass_diff"], r["max_diff"])
        for r in result["rows"]
    ]
    _emit(
        _record("converge", _inputs(args), payload),
        args.format,
        (("d", "max_atom_diff", "max_mass_diff", "max_diff"), rows),
        out,
    )
    return 0


def _cmd_qclt(args, out) -> int:
    fd = _descriptor(args)
    if args.words:
        words = [w.strip() for w in args.words.split(",") if w.strip()]
    else:
        words = [
            "".join(w)
            for m in range(1, args.max_word_len + 1)
            for w in fock.all_words(m)
        ]
    result = fock.qclt_table(
        fd,
        args.d_list,
        fam.parse_t_rule(args.t_rule),
        words,
        gamma=args.gamma,
        parity=args.parity,
    )
    payload = {
        "gamma": result["gamma"],
        "regime_kind": result["regime"].kind,
        "rows": result["rows"],
    }
    rows = [
        (r["word"], e["d"], e["finite"], e["limit"], e["abs_diff"])
        for r in result["rows"]
        for e in r["entries"]
    ]
    _emit(
        _record("qclt", _inputs(args), payload),
        args.format,
        (("word", "d", "finite", "limit", "abs_diff"), rows),
        out,
    )
    return 0


def _cmd_oracle(args, out) -> int:
    keys = sorted(oracle.BATTERY) if args.battery == "all" else [args.battery]
    for key in keys:
        if key not in oracle.BATTERY:
            raise _UsageError(
                f"unknown battery instance {key!r}; choose from "
                f"{', '.join(sorted(oracle.BATTERY))} or 'all'"
            )
    if args.dump_adjacency:
        if len(keys) != 1:
            raise _UsageError("--dump-adjacency needs a single battery instance")
        out.write(oracle.dump_adjacency(oracle.battery_instance(keys[0])))
        out.write("\n")
        return 0
    reports = [oracle.equivalence_report(key, tol=args.tol) for key in keys]
    payload = {"reports": reports, "ok": all(r["ok"] for r in reports)}
    rows = [
        (r["instance"], c["name"], c["ok"], c["detail"])
        for r in reports
        for c in r["checks"]
    ]
    _emit(
        _record("oracle", _inputs(args), payload),
        args.format,
        (("instance", "check", "ok", "detail"), rows),
        out,
    )
    return 0 if payload["ok"] else EX_INCONSISTENT


def _cmd_families(args, out) -> int:
    entries = []
    for name in fam.FAMILY_NAMES:
        entry = {"name": name, "base_symbol": "q"}
        if name in (
            "half_dual_polar",
            "ustimenko",
            "alternating",
            "quadratic",
            "second_hermitian_dual_polar",
            "hermitian_forms",
            "dual_polar_2A_even",
            "dual_polar_2A_odd",
        ):
            entry["base_symbol"] = "r"
        if name in fam.DUAL_POLAR_E:
            entry["beta_exponent"] = str(fam.DUAL_POLAR_E[name])
        if name in fam.N_PARITY_FAMILIES:
            entry["parity"] = "ambient dimension n"
        if name in fam.D_PARITY_FAMILIES:
            entry["parity"] = "diameter d"
        base = 4 if name in ("dual_polar_2A_even", "dual_polar_2A_odd") else 2
        fd = fam.FamilyDescriptor(name, base)
        cp = fam.member(fd, 3).cp
        entry["example_d3"] = {
            "d": cp.d,
            "b": cp.b,
            "alpha": _rat(cp.alpha),
            "beta": _rat(cp.beta),
        }
        entries.append(entry)
    payload = {"families": entries}
    rows = [
        (e["name"], e["base_symbol"], e.get("beta_exponent", ""), e.get("parity", ""))
        for e in entries
    ]
    _emit(
        _record("families", _inputs(args), payload),
        args.format,
        (("name", "base_symbol", "beta_exponent", "parity"), rows),
        out,
    )
    return 0


def _inputs(args) -> dict:
    skip = {"format"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or key == "command":
            continue
        out[key] = value
    out["command"] = args.command
    return out


_COMMANDS = {
    "params": _cmd_params,
    "gibbs": _cmd_gibbs,
    "psd-check": _cmd_psd_check,
    "limit": _cmd_limit,
    "converge": _cmd_converge,
    "qclt": _cmd_qclt,
    "oracle": _cmd_oracle,
    "families": _cmd_families,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleParameters as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return EX_INFEASIBLE
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EX_INCONSISTENT
    except (ValueError, ZeroDivisionError) as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EX_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
