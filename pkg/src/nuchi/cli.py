"""Command line surface.

JSON is the sole machine output (one envelope per job on stdout); human
tables go to stderr behind ``--pretty``.  Exit codes: 0 success, 1 malformed
input, 2 mathematical refusal (the checker determined the answer is "no",
e.g. a non-critical point or irrational support).

Results are cached content-addressed under a digest of the canonical job
serialization plus the engine version; ``--no-cache`` disables the cache and
``--cache-dir`` / the NUCHI_CACHE_DIR environment variable relocate it.
Payloads are byte-identical across runs and across cache hits and misses.

Job specifications (also accepted in batch via ``--jobs file.json``, an
array of specs) use the schemas documented in the README; every polynomial
is normalized to canonical printing before hashing, so equivalent spellings
share cache entries.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arcs import (
    INFINITE_WITHIN_TRUNCATION,
    arc_from_strings,
    arc_vanishing_order,
    lagrangian_obstruction,
    parse_arc,
)
from .cycles import (
    CurveCycle,
    MONOMIAL,
    Presentation,
    REGULAR_SEQUENCE,
    SMOOTH,
    distinguished_cycle,
    euler_obstruction,
    normal_cone_ideal,
    presentation_from_critical_locus,
)
from .errors import InputError, NonIsolatedCriticalPoint, NotCriticalPoint, Refusal
from .euler import (
    ConstructibleFunction,
    Stratification,
    has_heuristic_inputs,
    hilbert_demo,
    point_count_chi,
    weighted_euler,
)
from .groebner import Ideal, Infinite
from .poly import GF, QQ, Ring, parse_point
from .singular import NOT_CRITICAL, OneForm, behrend_report, is_almost_closed, milnor_number

COMMANDS = (
    "milnor",
    "behrend",
    "almost-closed",
    "arc-check",
    "normal-cone",
    "cycle",
    "nu",
    "weighted-euler",
    "chi-oracle",
    "hilb-demo",
)

MILNOR_FIBRE_NOTE = (
    "imported fact: chi(Milnor fibre) = 1 + (-1)^(n-1)*mu for isolated "
    "critical points (classical Milnor theory)"
)
CURVE_EU_NOTE = (
    "imported fact: the local Euler obstruction of a curve equals its "
    "Hilbert-Samuel multiplicity"
)
HEURISTIC_NOTE = "heuristic: finite-field point counts fitted by an integer polynomial"


# ----------------------------------------------------------- normalization

def _ring_from_spec(spec) -> Ring:
    ring = spec.get("ring")
    if not ring or "vars" not in ring:
        raise InputError("job needs a ring declaration before any polynomial input")
    domain = QQ if not ring.get("char") else GF(int(ring["char"]))
    return Ring(tuple(ring["vars"]), domain)


def _canonical_ring(ring: Ring):
    return {"vars": list(ring.variables), "char": ring.domain.char}


def _canonical_point(text, ring: Ring):
    coords = parse_point(text if isinstance(text, str) else ",".join(map(str, text)), ring.arity)
    return [str(c) for c in coords]


def normalize_spec(raw: dict) -> dict:
    """Validate a raw job dict and rewrite every input in canonical form."""
    if "command" not in raw:
        raise InputError("job is missing the command field")
    command = raw["command"]
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    spec: dict = {"command": command}

    def norm_polys(field, required=True):
        exprs = raw.get(field)
        if exprs is None:
            if required:
                raise InputError(f"command {command} requires {field!r}")
            return None
        ring = _ring_from_spec(raw)
        return [str(ring.parse(e)) for e in exprs]

    if command in ("milnor", "behrend", "almost-closed", "arc-check", "normal-cone",
                   "cycle", "nu", "chi-oracle"):
        ring = _ring_from_spec(raw)
        spec["ring"] = _canonical_ring(ring)

    if command == "milnor":
        spec["f"] = str(ring.parse(_require(raw, "f")))
        spec["point"] = _canonical_point(_require(raw, "point"), ring)
    elif command == "behrend":
        if "critical_locus" in raw:
            spec["critical_locus"] = str(ring.parse(raw["critical_locus"]))
        elif "ideal" in raw:
            spec["ideal"] = norm_polys("ideal")
        else:
            raise InputError("behrend needs critical_locus or ideal")
        spec["point"] = _canonical_point(_require(raw, "point"), ring)
    elif command == "almost-closed":
        form = norm_polys("form")
        if len(form) != ring.arity:
            raise InputError("a 1-form needs one component per ring variable")
        spec["form"] = form
    elif command == "arc-check":
        form = norm_polys("form")
        if len(form) != ring.arity:
            raise InputError("a 1-form needs one component per ring variable")
        spec["form"] = form
        arc = parse_arc(_require(raw, "arc"), ring)
        spec["arc"] = {
            "order": arc.order,
            "params": list(arc.param_ring.variables),
            "components": [str(s) for s in arc.components],
        }
        if raw.get("m") is not None:
            spec["m"] = int(raw["m"])
    elif command == "normal-cone":
        spec["ideal"] = norm_polys("ideal")
    elif command == "cycle":
        spec["class"] = _presentation_class(_require(raw, "class"))
        spec["ideal"] = norm_polys("ideal")
    elif command == "nu":
        spec["point"] = _canonical_point(_require(raw, "point"), ring)
        if "critical_locus" in raw:
            spec["critical_locus"] = str(ring.parse(raw["critical_locus"]))
        elif "ideal" in raw and "class" in raw:
            spec["class"] = _presentation_class(raw["class"])
            spec["ideal"] = norm_polys("ideal")
        else:
            raise InputError("nu needs critical_locus, or class plus ideal")
    elif command == "weighted-euler":
        strata = Stratification.from_json(_require(raw, "strata"))
        func = ConstructibleFunction(_require(raw, "function"))
        spec["strata"] = [
            {"label": s.label, "chi": s.chi, "dim": s.dim, "how": s.how,
             "heuristic": s.heuristic}
            for s in strata.strata
        ]
        spec["function"] = func.as_dict()
    elif command == "chi-oracle":
        spec["ideal"] = norm_polys("ideal")
        primes = _require(raw, "primes")
        if isinstance(primes, str):
            primes = [int(p) for p in primes.split(",") if p.strip()]
        spec["primes"] = [int(p) for p in primes]
    elif command == "hilb-demo":
        spec["n_max"] = int(_require(raw, "n_max"))
    return spec


def _require(raw: dict, field: str):
    if raw.get(field) is None:
        raise InputError(f"command {raw.get('command')} requires {field!r}")
    return raw[field]


def _presentation_class(name: str) -> str:
    name = str(name)
    if name not in (SMOOTH, REGULAR_SEQUENCE, MONOMIAL):
        raise InputError(f"unknown presentation class {name!r}")
    return name


# --------------------------------------------------------------- execution

def execute_spec(spec: dict):
    """Run a normalized spec; returns (payload, provenance notes)."""
    command = spec["command"]
    handler = _HANDLERS[command]
    return handler(spec)


def _ideal_from(spec, field="ideal") -> Ideal:
    ring = _ring_from_spec(spec)
    return Ideal.from_strings(ring, spec[field])


def _point_from(spec, ring: Ring):
    return tuple(Fraction(c) for c in spec["point"])


def _handle_milnor(spec):
    ring = _ring_from_spec(spec)
    f = ring.parse(spec["f"])
    point = _point_from(spec, ring)
    mu = milnor_number(f, point)
    if mu is NOT_CRITICAL:
        raise NotCriticalPoint(f"df does not vanish at {tuple(map(str, point))}")
    if isinstance(mu, Infinite):
        raise NonIsolatedCriticalPoint("critical point is not isolated")
    return {"mu": mu}, []


def _handle_behrend(spec):
    ring = _ring_from_spec(spec)
    point = _point_from(spec, ring)
    if "critical_locus" in spec:
        presentation = ring.parse(spec["critical_locus"])
    else:
        presentation = _ideal_from(spec)
    report = behrend_report(presentation, point)
    if report.route == "milnor":
        return {"nu": report.nu, "route": "milnor", "mu": report.mu}, [MILNOR_FIBRE_NOTE]
    return {"nu": report.nu, "route": "smooth", "dim": report.local_dim}, []


def _handle_almost_closed(spec):
    ring = _ring_from_spec(spec)
    omega = OneForm.from_strings(ring, spec["form"])
    check = is_almost_closed(omega)
    if check.almost_closed:
        payload = {
            "almost_closed": True,
            "certificates": [
                {"pair": [i + 1, j + 1], "witness": str(w)}
                for (i, j), w in check.certificates
            ],
        }
    else:
        i, j = check.failing_pair
        payload = {
            "almost_closed": False,
            "failing_pair": [i + 1, j + 1],
            "normal_form": str(check.failing_normal_form),
        }
    return payload, []


def _handle_arc_check(spec):
    ring = _ring_from_spec(spec)
    omega = OneForm.from_strings(ring, spec["form"])
    # the canonical component strings re-parse under the arc grammar
    arc = arc_from_strings(
        ring,
        spec["arc"]["components"],
        order=spec["arc"]["order"],
        params=spec["arc"]["params"],
    )
    order = arc_vanishing_order(omega, arc)
    infinite = order is INFINITE_WITHIN_TRUNCATION
    payload = {
        "vanishing_order": "INFINITE_WITHIN_TRUNCATION" if infinite else order,
        "truncation_order": arc.order,
    }
    m = spec.get("m")
    if m is None and not infinite and order >= 1:
        m = order
    if m is not None:
        form = lagrangian_obstruction(omega, arc, m)
        payload["m"] = m
        payload["obstruction"] = form.to_payload()
        payload["obstruction_is_zero"] = form.is_zero()
    return payload, []


def _handle_normal_cone(spec):
    I = _ideal_from(spec)
    report = normal_cone_ideal(I)
    doubled = report.ideal.ring
    payload = {
        "ring": list(doubled.variables),
        "fiber_variables": [doubled.variables[i] for i in report.fiber_indices],
        "generators": [str(g) for g in report.ideal.generators],
        "dimension": report.dimension,
        "ambient_arity": report.base_arity,
        "conic": report.conic,
        "components": None
        if report.components is None
        else [
            {
                "multiplicity": mult,
                "zero_variables": [doubled.variables[i] for i in sorted(prime)],
            }
            for mult, prime in report.components
        ],
    }
    return payload, []


def _cycle_payload_and_notes(cycle):
    notes = []
    if any(isinstance(d, CurveCycle) for _, d in cycle.terms):
        notes.append(CURVE_EU_NOTE)
    return cycle.to_payload(), notes


def _handle_cycle(spec):
    presentation = Presentation(spec["class"], _ideal_from(spec))
    cycle = distinguished_cycle(presentation)
    payload, notes = _cycle_payload_and_notes(cycle)
    return {"cycle": payload}, notes


def _handle_nu(spec):
    ring = _ring_from_spec(spec)
    point = _point_from(spec, ring)
    if "critical_locus" in spec:
        presentation = presentation_from_critical_locus(ring.parse(spec["critical_locus"]))
    else:
        presentation = Presentation(spec["class"], _ideal_from(spec))
    cycle = distinguished_cycle(presentation)
    value = euler_obstruction(cycle, point)
    cycle_payload, notes = _cycle_payload_and_notes(cycle)
    return {"nu": value, "route": "cycle", "cycle": cycle_payload}, notes


def _handle_weighted_euler(spec):
    strat = Stratification.from_json(spec["strata"])
    func = ConstructibleFunction(spec["function"])
    value = weighted_euler(strat, func)
    heuristic = has_heuristic_inputs(strat)
    notes = [HEURISTIC_NOTE] if heuristic else []
    return {"weighted_euler": value, "heuristic_inputs": heuristic}, notes


def _handle_chi_oracle(spec):
    I = _ideal_from(spec)
    result = point_count_chi(I, spec["primes"])
    payload = {
        "chi": result.chi,
        "flag": result.flag,
        "counts": [[q, c] for q, c in result.counts],
        "fit": list(result.fit),
    }
    return payload, [HEURISTIC_NOTE]


def _handle_hilb_demo(spec):
    demo = hilbert_demo(spec["n_max"])
    payload = {
        "table": [{"n": n, "count": c, "signed": s} for n, c, s in demo.rows],
        "macmahon": list(demo.macmahon),
        "match": demo.match,
        "weight_note": demo.weight_note,
    }
    return payload, [demo.weight_note]


_HANDLERS = {
    "milnor": _handle_milnor,
    "behrend": _handle_behrend,
    "almost-closed": _handle_almost_closed,
    "arc-check": _handle_arc_check,
    "normal-cone": _handle_normal_cone,
    "cycle": _handle_cycle,
    "nu": _handle_nu,
    "weighted-euler": _handle_weighted_euler,
    "chi-oracle": _handle_chi_oracle,
    "hilb-demo": _handle_hilb_demo,
}


# ------------------------------------------------------------------- cache

def canonical_spec_json(spec: dict) -> str:
    return json.dumps(spec, sort_keys=True, separators=(",", ":"))


def cache_key(spec: dict) -> str:
    blob = canonical_spec_json(spec) + "|" + __version__
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def default_cache_dir() -> Path:
    env = os.environ.get("NUCHI_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "nuchi"


def _cache_load(path: Path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            stored = json.load(fh)
        if (
            not isinstance(stored, dict)
            or stored.get("engine_version") != __version__
            or "payload" not in stored
            or "command" not in stored
        ):
            return None
        return stored
    except (OSError, json.JSONDecodeError):
        return None


def _cache_store(path: Path, envelope: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(envelope, fh, sort_keys=True)
    os.replace(tmp, path)


def run_job(raw: dict, use_cache: bool = True, cache_dir: Path | None = None) -> dict:
    """Normalize, maybe serve from cache, execute, and wrap in an envelope."""
    spec = normalize_spec(raw)
    key = cache_key(spec)
    directory = cache_dir or default_cache_dir()
    entry = directory / f"{key}.json"
    if use_cache:
        if entry.exists():
            stored = _cache_load(entry)
            if stored is not None:
                stored = dict(stored)
                stored["cache"] = "hit"
                stored["timing_ms"] = 0.0
                return stored
            print(
                f"warning: corrupt cache entry {entry}, recomputing",
                file=sys.stderr,
            )
    start = time.monotonic()
    payload, provenance = execute_spec(spec)
    elapsed = (time.monotonic() - start) * 1000.0
    stored = {
        "command": spec["command"],
        "payload": payload,
        "provenance": sorted(set(provenance)),
        "engine_version": __version__,
    }
    if use_cache:
        _cache_store(entry, stored)
    envelope = dict(stored)
    envelope["cache"] = "miss" if use_cache else "off"
    envelope["timing_ms"] = round(elapsed, 3)
    return envelope


# ------------------------------------------------------------------ output

def _emit(envelope: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(envelope, sort_keys=True, indent=2))
    else:
        print(json.dumps(envelope, sort_keys=True, separators=(",", ":")))


def _pretty_tables(envelope: dict) -> None:
    payload = envelope.get("payload") or {}
    if "table" in payload:
        print("  n  count  signed", file=sys.stderr)
        for row in payload["table"]:
            print(f"{row['n']:>3}  {row['count']:>5}  {row['signed']:>6}", file=sys.stderr)


# ----------------------------------------------------------------- argparse

def _add_ring_arguments(p):
    p.add_argument("--ring", required=True, help="comma-separated variable names")
    p.add_argument("--char", type=int, default=0, help="0 for Q, or a prime p for F_p")


def _add_global_arguments(p, top: bool):
    # on subparsers the defaults are suppressed so they cannot clobber
    # values already parsed from before the subcommand
    kw = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--pretty", action="store_true",
                   help="indent JSON, tables to stderr", **kw)
    p.add_argument("--no-cache", action="store_true", **kw)
    p.add_argument("--cache-dir", **({"default": None} if top else kw))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nuchi",
        description="exact Milnor numbers, cone cycles and weighted Euler characteristics",
    )
    parser.add_argument("--jobs", help="batch mode: JSON file with an array of job specs")
    _add_global_arguments(parser, top=True)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("milnor", help="Milnor number of f at a point")
    _add_ring_arguments(p)
    p.add_argument("--f", required=True)
    p.add_argument("--point", required=True)
    _add_global_arguments(p, top=False)

    p = sub.add_parser("behrend", help="nu at a point (Milnor or smooth route)")
    _add_ring_arguments(p)
    p.add_argument("--critical-locus", dest="critical_locus")
    p.add_argument("--ideal", nargs="+")
    p.add_argument("--point", required=True)
    _add_global_arguments(p, top=False)

    p = sub.add_parser("almost-closed", help="test d(omega) in I*Omega^2")
    _add_ring_arguments(p)
    p.add_argument("--form", nargs="+", required=True, help="components f_1 .. f_n")
    _add_global_arguments(p, top=False)

    p = sub.add_parser("arc-check", help="vanishing order and obstruction along an arc")
    _add_ring_arguments(p)
    p.add_argument("--form", nargs="+", required=True)
    p.add_argument("--arc", help="arc file (order header plus assignments)")
    p.add_argument("--arc-text", dest="arc_text", help="inline arc text")
    p.add_argument("--m", type=int, default=None)
    _add_global_arguments(p, top=False)

    p = sub.add_parser("normal-cone", help="normal cone ideal via Rees elimination")
    _add_ring_arguments(p)
    p.add_argument("--ideal", nargs="+", required=True)
    _add_global_arguments(p, top=False)

    p = sub.add_parser("cycle", help="distinguished cycle of a presentation")
    _add_ring_arguments(p)
    p.add_argument("--class", dest="pres_class", required=True,
                   choices=[SMOOTH, REGULAR_SEQUENCE, MONOMIAL])
    p.add_argument("--ideal", nargs="+", required=True)
    _add_global_arguments(p, top=False)

    p = sub.add_parser("nu", help="nu via the cycle route")
    _add_ring_arguments(p)
    p.add_argument("--point", required=True)
    p.add_argument("--critical-locus", dest="critical_locus")
    p.add_argument("--class", dest="pres_class",
                   choices=[SMOOTH, REGULAR_SEQUENCE, MONOMIAL])
    p.add_argument("--ideal", nargs="+")
    _add_global_arguments(p, top=False)

    p = sub.add_parser("weighted-euler", help="weighted Euler characteristic from files")
    p.add_argument("--strata", required=True, help="JSON array of {label, chi, dim, how}")
    p.add_argument("--function", required=True, help="JSON object label -> integer")
    _add_global_arguments(p, top=False)

    p = sub.add_parser("chi-oracle", help="heuristic chi from finite-field point counts")
    _add_ring_arguments(p)
    p.add_argument("--ideal", nargs="+", required=True)
    p.add_argument("--primes", required=True, help="comma-separated primes, each <= 16")
    _add_global_arguments(p, top=False)

    p = sub.add_parser("hilb-demo", help="Hilbert scheme fixed points vs MacMahon")
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    _add_global_arguments(p, top=False)
    return parser


def _raw_spec_from_args(args) -> dict:
    raw: dict = {"command": args.command}
    if hasattr(args, "ring") and args.ring is not None:
        raw["ring"] = {"vars": [v.strip() for v in args.ring.split(",") if v.strip()],
                       "char": args.char}
    for field in ("f", "point", "critical_locus", "ideal", "form", "m", "primes"):
        value = getattr(args, field, None)
        if value is not None:
            raw[field] = value
    if getattr(args, "pres_class", None):
        raw["class"] = args.pres_class
    if args.command == "arc-check":
        if getattr(args, "arc_text", None):
            raw["arc"] = args.arc_text
        elif getattr(args, "arc", None):
            raw["arc"] = Path(args.arc).read_text(encoding="utf-8")
        else:
            raise InputError("arc-check needs --arc FILE or --arc-text TEXT")
    if args.command == "weighted-euler":
        raw["strata"] = json.loads(Path(args.strata).read_text(encoding="utf-8"))
        raw["function"] = json.loads(Path(args.function).read_text(encoding="utf-8"))
    if args.command == "hilb-demo":
        raw["n_max"] = args.n_max
    return raw


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    use_cache = not args.no_cache
    cache_dir = Path(args.cache_dir) if args.cache_dir else None
    try:
        if args.jobs:
            raw_jobs = json.loads(Path(args.jobs).read_text(encoding="utf-8"))
            if not isinstance(raw_jobs, list):
                raise InputError("--jobs file must contain a JSON array of job specs")
            envelopes = [run_job(job, use_cache, cache_dir) for job in raw_jobs]
            _emit(envelopes, args.pretty)
            return 0
        if not args.command:
            parser.print_help(sys.stderr)
            return 1
        envelope = run_job(_raw_spec_from_args(args), use_cache, cache_dir)
        _emit(envelope, args.pretty)
        if args.pretty:
            _pretty_tables(envelope)
        return 0
    except Refusal as exc:
        refusal = {
            "command": getattr(args, "command", None),
            "refusal": {"code": exc.code, "message": str(exc)},
            "engine_version": __version__,
        }
        _emit(refusal, args.pretty)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
