"""Experiment driver.

Every library operation is exposed as a subcommand.  Reports are
deterministic: sorted keys, no timestamps, atomic file writes, and an
embedded schema_version plus the fully resolved configuration, so a
rerun with identical arguments and seed is byte-identical.

Exit codes: 0 success, 2 validation or precondition failure (with a
machine-readable JSON object on stderr), 64 unknown subcommand, 65
malformed config file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .errors import InvalidInputError, LacunaError
from .extremal import (
    ExtremalConfig,
    blowup_probe,
    growth_exponent,
    maximize_ratio,
    ratio_gradient,
    trig_family,
    walsh_family,
)
from .inverse import (
    TrigContext,
    WalshContext,
    build_summation_matrix,
    inverse_bound_experiment,
    inverse_parseval_check,
)
from .lacunary import (
    LacunarySequence,
    counterexample_sequence,
    critical_lambda,
    enumerate_index_set,
    geometric_sequence,
    head_partition,
    representations,
    validate_lacunary,
)
from .measure import IntervalSet, energy_on_set
from .trig import (
    TrigPolynomial,
    khintchine_ratio,
    lp_norm_trig,
    lp_norm_walsh,
    modulation_projection,
    riesz_product,
)
from .walsh import (
    DyadicPoint,
    WalshIndex,
    WalshPolynomial,
    find_alpha,
    recover_coefficient,
    shift_sum,
)

SCHEMA_VERSION = "1"

COMMANDS = (
    "lambda",
    "validate",
    "enumerate",
    "reps",
    "heads",
    "counterexample",
    "walsh-shift",
    "find-alpha",
    "recover",
    "norm",
    "ratio",
    "riesz",
    "project",
    "energy",
    "inverse-check",
    "matrix-experiment",
    "extremal",
    "growth",
    "blowup",
)


class _CliFailure(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliFailure(2, {"error": "invalid-input", "message": message})


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


class _CommandSpec:
    """Parser plus the per-flag converters needed to type config values."""

    def __init__(self, name: str):
        self.parser = _Parser(prog=f"lacuna {name}", description=None)
        self.converters = {}
        self.actions = {}

    def add(self, flag: str, **kwargs):
        action = self.parser.add_argument(flag, **kwargs)
        conv = kwargs.get("type", str)
        if kwargs.get("action") == "store_true":
            conv = _parse_bool
        self.converters[action.dest] = conv
        self.actions[action.dest] = action
        return action


def _int_csv(text: str) -> str:
    # stored as the raw string so the resolved config stays primitive;
    # parsed on use by _parse_int_list
    [int(tok) for tok in text.split(",") if tok.strip() != ""]
    return text


def _parse_int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _float_csv(text: str) -> str:
    [float(tok) for tok in text.split(",") if tok.strip() != ""]
    return text


def _parse_float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _add_output_flags(spec: _CommandSpec):
    spec.add("--output", type=str, default=None, help="report file path")
    spec.add("--format", type=str, default="json", choices=("json", "csv"))
    spec.add("--config", type=str, default=None, help="key=value config file")


def _add_sequence_flags(spec: _CommandSpec):
    spec.add("--terms", type=_int_csv, default=None, help="comma-separated terms")
    spec.add("--lam", type=str, default=None, help="lacunarity witness, e.g. 3/2")
    spec.add("--ratio", type=int, default=None, help="geometric base instead of terms")
    spec.add("--length", type=int, default=None, help="geometric length")


def _sequence_from_args(args) -> LacunarySequence:
    if args.terms is not None:
        terms = tuple(_parse_int_list(args.terms))
        if args.lam is None:
            raise InvalidInputError("--terms needs --lam (exact rational witness)")
        return LacunarySequence(terms, lam=Fraction(args.lam))
    if args.ratio is not None and args.length is not None:
        lam = Fraction(args.lam) if args.lam is not None else None
        return geometric_sequence(args.ratio, args.length, lam=lam)
    raise InvalidInputError("supply --terms with --lam, or --ratio with --length")


def _load_json_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_poly(path: str, kind: str):
    data = _load_json_file(path)
    if kind == "walsh":
        return WalshPolynomial.from_json_dict(data)
    if kind == "trig":
        return TrigPolynomial.from_json_dict(data)
    raise InvalidInputError(f"unknown polynomial kind {kind!r}")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lacuna-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolved_config(args) -> dict:
    skip = {"command", "output", "config"}
    out = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        if isinstance(value, Fraction):
            value = str(value)
        out[key] = value
    threads = os.environ.get("LACUNA_THREADS")
    out["threads"] = int(threads) if threads and threads.isdigit() else None
    return out


def _report_text(args, body: dict) -> str:
    report = {"schema_version": SCHEMA_VERSION, "config": _resolved_config(args)}
    report.update(body)
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _jsonl_text(args, rows: list) -> str:
    header = {"schema_version": SCHEMA_VERSION, "config": _resolved_config(args)}
    lines = [json.dumps(header, sort_keys=True)]
    lines.extend(json.dumps(row, sort_keys=True) for row in rows)
    return "\n".join(lines) + "\n"


def _csv_text(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(args, text: str) -> None:
    if args.output:
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _emit_scalar(args, value) -> None:
    """Print the bare value; with --output wrap it in a report object."""
    if isinstance(value, float):
        printable = repr(value)
    else:
        printable = str(value)
    if args.output:
        json_value = value if isinstance(value, (int, float)) else str(value)
        _emit(args, _report_text(args, {"value": json_value}))
    else:
        sys.stdout.write(printable + "\n")


def _require_json_format(args) -> None:
    if args.format != "json":
        raise InvalidInputError("this subcommand only emits json")


# ---------------------------------------------------------------------------
# subcommand specs


def _spec_lambda() -> _CommandSpec:
    spec = _CommandSpec("lambda")
    spec.add("--l", type=int, required=True)
    spec.add("--tol", type=float, default=1e-10)
    _add_output_flags(spec)
    return spec


def _run_lambda(args):
    _require_json_format(args)
    _emit_scalar(args, critical_lambda(args.l, tol=args.tol))


def _spec_validate() -> _CommandSpec:
    spec = _CommandSpec("validate")
    spec.add("--terms", type=_int_csv, required=True)
    spec.add("--lam", type=str, required=True)
    _add_output_flags(spec)
    return spec


def _run_validate(args):
    _require_json_format(args)
    report = validate_lacunary(_parse_int_list(args.terms), Fraction(args.lam))
    violation = report["first_violation"]
    if violation is not None:
        violation = {"index": violation["index"], "pair": list(violation["pair"])}
    body = {"ok": report["ok"], "first_violation": violation}
    _emit(args, _report_text(args, body))


def _spec_enumerate() -> _CommandSpec:
    spec = _CommandSpec("enumerate")
    _add_sequence_flags(spec)
    spec.add("--l", type=int, required=True)
    spec.add("--variant", type=str, default="signed")
    spec.add("--prefix-len", type=int, default=None)
    _add_output_flags(spec)
    return spec


def _run_enumerate(args):
    _require_json_format(args)
    seq = _sequence_from_args(args)
    iset = enumerate_index_set(seq, args.l, args.variant, prefix_len=args.prefix_len)
    _emit(args, _report_text(args, iset.to_json_dict()))


def _spec_reps() -> _CommandSpec:
    spec = _CommandSpec("reps")
    _add_sequence_flags(spec)
    spec.add("--m", type=int, required=True)
    spec.add("--l", type=int, required=True)
    spec.add("--variant", type=str, default="signed")
    _add_output_flags(spec)
    return spec


def _run_reps(args):
    _require_json_format(args)
    seq = _sequence_from_args(args)
    found = representations(seq, args.m, args.l, args.variant)
    body = {
        "m": args.m,
        "count": len(found),
        "representations": [
            {
                "indices": list(r.indices),
                "signs": list(r.signs),
                "head": r.head,
            }
            for r in found
        ],
    }
    _emit(args, _report_text(args, body))


def _spec_heads() -> _CommandSpec:
    spec = _CommandSpec("heads")
    _add_sequence_flags(spec)
    spec.add("--l", type=int, required=True)
    spec.add("--variant", type=str, default="signed")
    _add_output_flags(spec)
    return spec


def _run_heads(args):
    _require_json_format(args)
    seq = _sequence_from_args(args)
    iset = enumerate_index_set(seq, args.l, args.variant)
    _emit(args, _report_text(args, head_partition(iset).to_json_dict()))


def _spec_counterexample() -> _CommandSpec:
    spec = _CommandSpec("counterexample")
    spec.add("--l", type=int, required=True)
    spec.add("--m-max", type=int, required=True)
    _add_output_flags(spec)
    return spec


def _run_counterexample(args):
    _require_json_format(args)
    seq, report = counterexample_sequence(args.l, args.m_max)
    body = dict(report)
    body["terms"] = [str(t) for t in seq.terms]
    _emit(args, _report_text(args, body))


def _spec_walsh_shift() -> _CommandSpec:
    spec = _CommandSpec("walsh-shift")
    spec.add("--n", type=int, required=True)
    spec.add("--m", type=int, required=True)
    spec.add("--alpha", type=str, required=True, help="dyadic point, e.g. 3/8")
    _add_output_flags(spec)
    return spec


def _run_walsh_shift(args):
    _require_json_format(args)
    value = shift_sum(
        WalshIndex.from_value(args.n),
        WalshIndex.from_value(args.m),
        DyadicPoint.parse(args.alpha),
    )
    _emit_scalar(args, value)


def _spec_find_alpha() -> _CommandSpec:
    spec = _CommandSpec("find-alpha")
    spec.add("--set", type=str, required=True, help="e.g. 0/1:15/16")
    spec.add("--exponents", type=_int_csv, required=True)
    _add_output_flags(spec)
    return spec


def _run_find_alpha(args):
    _require_json_format(args)
    E = IntervalSet.parse(args.set)
    point = find_alpha(E, tuple(_parse_int_list(args.exponents)))
    _emit_scalar(args, "absent" if point is None else point.as_fraction())


def _spec_recover() -> _CommandSpec:
    spec = _CommandSpec("recover")
    spec.add("--poly", type=str, required=True, help="walsh polynomial JSON file")
    spec.add("--m", type=int, required=True)
    spec.add("--alpha", type=str, required=True)
    _add_output_flags(spec)
    return spec


def _run_recover(args):
    _require_json_format(args)
    S = _load_poly(args.poly, "walsh")
    value = recover_coefficient(
        S, WalshIndex.from_value(args.m), DyadicPoint.parse(args.alpha)
    )
    _emit_scalar(args, value)


def _spec_norm() -> _CommandSpec:
    spec = _CommandSpec("norm")
    spec.add("--poly", type=str, required=True)
    spec.add("--kind", type=str, required=True, choices=("trig", "walsh"))
    spec.add("--p", type=float, required=True)
    spec.add("--oversample", type=int, default=8)
    _add_output_flags(spec)
    return spec


def _run_norm(args):
    _require_json_format(args)
    S = _load_poly(args.poly, args.kind)
    if args.kind == "trig":
        value = lp_norm_trig(S, args.p, oversample=args.oversample)
    else:
        value = lp_norm_walsh(S, args.p)
    _emit_scalar(args, value)


def _spec_ratio() -> _CommandSpec:
    spec = _CommandSpec("ratio")
    spec.add("--poly", type=str, required=True)
    spec.add("--kind", type=str, required=True, choices=("trig", "walsh"))
    spec.add("--p", type=float, required=True)
    _add_output_flags(spec)
    return spec


def _run_ratio(args):
    _require_json_format(args)
    S = _load_poly(args.poly, args.kind)
    _emit_scalar(args, khintchine_ratio(S, args.p))


def _spec_riesz() -> _CommandSpec:
    spec = _CommandSpec("riesz")
    spec.add("--freqs", type=_int_csv, required=True)
    spec.add("--signs", type=_int_csv, default=None)
    _add_output_flags(spec)
    return spec


def _run_riesz(args):
    _require_json_format(args)
    freqs = tuple(_parse_int_list(args.freqs))
    signs = (
        tuple(_parse_int_list(args.signs))
        if args.signs is not None
        else tuple(1 for _ in freqs)
    )
    product = riesz_product(freqs, signs)
    _emit(args, _report_text(args, product.to_json_dict()))


def _spec_project() -> _CommandSpec:
    spec = _CommandSpec("project")
    spec.add("--m", type=int, required=True)
    spec.add("--freqs", type=_int_csv, required=True)
    _add_output_flags(spec)
    return spec


def _run_project(args):
    _require_json_format(args)
    value = modulation_projection(args.m, tuple(_parse_int_list(args.freqs)))
    _emit_scalar(args, value)


def _spec_energy() -> _CommandSpec:
    spec = _CommandSpec("energy")
    spec.add("--poly", type=str, required=True)
    spec.add("--kind", type=str, required=True, choices=("trig", "walsh"))
    spec.add("--set", type=str, required=True)
    _add_output_flags(spec)
    return spec


def _run_energy(args):
    _require_json_format(args)
    S = _load_poly(args.poly, args.kind)
    _emit_scalar(args, energy_on_set(S, IntervalSet.parse(args.set)))


def _add_context_flags(spec: _CommandSpec):
    spec.add("--kind", type=str, required=True, choices=("trig", "walsh"))
    _add_sequence_flags(spec)
    spec.add("--l", type=int, required=True)
    spec.add("--d", type=int, default=None, help="representation bound (trig)")


def _context_from_args(args):
    if args.kind == "trig":
        return TrigContext(sequence=_sequence_from_args(args), order=args.l, d=args.d)
    return WalshContext(order=args.l)


def _spec_inverse_check() -> _CommandSpec:
    spec = _CommandSpec("inverse-check")
    spec.add("--poly", type=str, required=True)
    spec.add("--set", type=str, required=True)
    _add_context_flags(spec)
    _add_output_flags(spec)
    return spec


def _run_inverse_check(args):
    _require_json_format(args)
    S = _load_poly(args.poly, args.kind)
    report = inverse_parseval_check(
        S, IntervalSet.parse(args.set), _context_from_args(args)
    )
    _emit(args, _report_text(args, report.to_json_dict()))


def _spec_matrix_experiment() -> _CommandSpec:
    spec = _CommandSpec("matrix-experiment")
    spec.add("--coeffs", type=str, required=True, help="polynomial JSON file")
    spec.add("--set", type=str, required=True)
    _add_context_flags(spec)
    spec.add(
        "--matrix-kind",
        type=str,
        default="prefix-of-rearrangement",
        choices=("prefix-of-rearrangement", "nested-sets", "custom"),
    )
    spec.add("--order", type=_int_csv, default=None, help="prefix column order")
    spec.add("--matrix-file", type=str, default=None, help="sets/rows JSON file")
    spec.add("--bound", type=float, default=1.0)
    spec.add("--n-max", type=int, default=None)
    spec.add("--zero-mode", action="store_true", default=False)
    _add_output_flags(spec)
    return spec


def _matrix_from_args(args, coeffs):
    if args.matrix_kind == "prefix-of-rearrangement":
        if args.order is not None:
            order = _parse_int_list(args.order)
        else:
            order = sorted(coeffs)
        return build_summation_matrix(
            "prefix-of-rearrangement", order=order, bound=args.bound
        )
    if args.matrix_file is None:
        raise InvalidInputError(f"{args.matrix_kind} needs --matrix-file")
    data = _load_json_file(args.matrix_file)
    if args.matrix_kind == "nested-sets":
        return build_summation_matrix(
            "nested-sets", sets=data.get("sets"), bound=args.bound
        )
    rows = [
        {int(m): float(t) for m, t in row.items()} for row in data.get("rows", [])
    ]
    return build_summation_matrix(
        "custom", rows=rows, bound=float(data.get("bound", args.bound))
    )


def _run_matrix_experiment(args):
    poly = _load_poly(args.coeffs, args.kind)
    coeffs = dict(poly.coefficients)
    matrix = _matrix_from_args(args, coeffs)
    report = inverse_bound_experiment(
        coeffs,
        matrix,
        IntervalSet.parse(args.set),
        _context_from_args(args),
        n_max=args.n_max,
        zero_mode=args.zero_mode,
    )
    rows = [r.to_json_dict() for r in report.rows]
    if args.format == "csv":
        header = ["n", "energy", "mass", "bound", "pass"]
        table = [
            [row["n"], row["energy"], row["mass"], row["bound"], row["pass"]]
            for row in rows
        ]
        _emit(args, _csv_text(header, table))
        return
    summary = report.to_json_dict()
    del summary["rows"]
    _emit(args, _jsonl_text(args, rows + [{"summary": summary}]))


def _add_extremal_flags(spec: _CommandSpec):
    spec.add("--restarts", type=int, default=3)
    spec.add("--max-iter", type=int, default=150)
    spec.add("--step", type=float, default=0.5)
    spec.add("--seed", type=int, default=0)
    spec.add("--oversample", type=int, default=8)


def _extremal_config(args) -> ExtremalConfig:
    return ExtremalConfig(
        restarts=args.restarts,
        max_iter=args.max_iter,
        step=args.step,
        seed=args.seed,
        oversample=args.oversample,
    )


def _family_from_args(args):
    if args.family == "walsh":
        if args.exponent_budget is None:
            raise InvalidInputError("walsh family needs --exponent-budget")
        return walsh_family(args.l, args.exponent_budget)
    return trig_family(_sequence_from_args(args), args.l)


def _spec_extremal() -> _CommandSpec:
    spec = _CommandSpec("extremal")
    spec.add("--family", type=str, required=True, choices=("walsh", "trig"))
    spec.add("--l", type=int, required=True)
    spec.add("--exponent-budget", type=int, default=None)
    _add_sequence_flags(spec)
    spec.add("--p", type=float, required=True)
    _add_extremal_flags(spec)
    _add_output_flags(spec)
    return spec


def _run_extremal(args):
    _require_json_format(args)
    result = maximize_ratio(_family_from_args(args), args.p, _extremal_config(args))
    _emit(args, _report_text(args, result.to_json_dict()))


def _spec_growth() -> _CommandSpec:
    spec = _CommandSpec("growth")
    spec.add("--family", type=str, required=True, choices=("walsh", "trig"))
    spec.add("--l", type=int, required=True)
    spec.add("--exponent-budget", type=int, default=None)
    _add_sequence_flags(spec)
    spec.add("--p-list", type=_float_csv, required=True)
    _add_extremal_flags(spec)
    _add_output_flags(spec)
    return spec


def _run_growth(args):
    report = growth_exponent(
        _family_from_args(args),
        _parse_float_list(args.p_list),
        _extremal_config(args),
    )
    if args.format == "csv":
        _emit(args, _csv_text(["p", "ratio"], report.to_csv_rows()))
        return
    _emit(args, _report_text(args, report.to_json_dict()))


def _spec_blowup() -> _CommandSpec:
    spec = _CommandSpec("blowup")
    spec.add("--l", type=int, required=True)
    spec.add("--p", type=float, required=True)
    spec.add("--degree-list", type=_int_csv, required=True)
    spec.add("--seed", type=int, default=0)
    _add_output_flags(spec)
    return spec


def _run_blowup(args):
    report = blowup_probe(
        args.l, args.p, _parse_int_list(args.degree_list), seed=args.seed
    )
    if args.format == "csv":
        rows = [
            [r.budget, r.ratio_critical, r.ratio_control] for r in report.rows
        ]
        _emit(args, _csv_text(["budget", "ratio_critical", "ratio_control"], rows))
        return
    _emit(args, _report_text(args, report.to_json_dict()))


_SPECS = {
    "lambda": (_spec_lambda, _run_lambda),
    "validate": (_spec_validate, _run_validate),
    "enumerate": (_spec_enumerate, _run_enumerate),
    "reps": (_spec_reps, _run_reps),
    "heads": (_spec_heads, _run_heads),
    "counterexample": (_spec_counterexample, _run_counterexample),
    "walsh-shift": (_spec_walsh_shift, _run_walsh_shift),
    "find-alpha": (_spec_find_alpha, _run_find_alpha),
    "recover": (_spec_recover, _run_recover),
    "norm": (_spec_norm, _run_norm),
    "ratio": (_spec_ratio, _run_ratio),
    "riesz": (_spec_riesz, _run_riesz),
    "project": (_spec_project, _run_project),
    "energy": (_spec_energy, _run_energy),
    "inverse-check": (_spec_inverse_check, _run_inverse_check),
    "matrix-experiment": (_spec_matrix_experiment, _run_matrix_experiment),
    "extremal": (_spec_extremal, _run_extremal),
    "growth": (_spec_growth, _run_growth),
    "blowup": (_spec_blowup, _run_blowup),
}


def _scan_config_path(argv: list) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 < len(argv):
                return argv[i + 1]
            return None
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _CliFailure(
            65, {"error": "malformed-config", "message": f"cannot read {path}: {exc}"}
        )
    values = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise _CliFailure(
                65,
                {
                    "error": "malformed-config",
                    "message": f"{path}:{lineno}: expected key=value",
                },
            )
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(spec: _CommandSpec, raw: dict) -> dict:
    typed = {}
    for key, text in raw.items():
        if key not in spec.converters:
            raise _CliFailure(
                65,
                {"error": "malformed-config", "message": f"unknown config key {key!r}"},
            )
        try:
            typed[key] = spec.converters[key](text)
        except (ValueError, TypeError) as exc:
            raise _CliFailure(
                65,
                {
                    "error": "malformed-config",
                    "message": f"bad value for {key!r}: {exc}",
                },
            )
    return typed


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in ("-h", "--help"):
        sys.stdout.write("usage: lacuna <subcommand> [flags]\nsubcommands: ")
        sys.stdout.write(", ".join(COMMANDS) + "\n")
        return 0
    command = argv[0] if argv else None
    if command not in _SPECS:
        payload = {
            "error": "unknown-subcommand",
            "message": f"unknown subcommand {command!r}; expected one of "
            + ", ".join(COMMANDS),
        }
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
        return 64
    rest = argv[1:]
    try:
        build, run = _SPECS[command]
        spec = build()
        config_path = _scan_config_path(rest)
        if config_path is not None:
            typed = _apply_config(spec, _load_config_file(config_path))
            spec.parser.set_defaults(**typed)
            for dest in typed:
                spec.actions[dest].required = False
        args = spec.parser.parse_args(rest)
        args.command = command
        run(args)
        return 0
    except _CliFailure as exc:
        sys.stderr.write(json.dumps(exc.payload, sort_keys=True) + "\n")
        return exc.code
    except LacunaError as exc:
        sys.stderr.write(json.dumps(exc.payload(), sort_keys=True) + "\n")
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        payload = {"error": "invalid-input", "message": str(exc)}
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
