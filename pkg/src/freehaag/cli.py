"""Command line front end.

Exit status: 0 when every verdict passes, 1 when some verdict fails,
2 when a size ceiling or truncation order is exceeded, 3 on unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from fractions import Fraction
from typing import Any, Iterable

from . import bijection, cumulants, haagerup, models, partitions, patterns, spectral
from .cumulants import format_rational
from .errors import CapabilityError, SizeError, TruncationError

EXIT_OK, EXIT_FAIL, EXIT_SIZE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


# helpers -----------------------------------------------------------------

def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_model_arg(spec: str, k_max: int) -> models.RDiagonalModel:
    try:
        return models.builtin_model(spec, k_max)
    except KeyError:
        pass
    try:
        return models.RDiagonalModel.from_json(_load_json(spec))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad model file {spec}: {exc}") from exc


def load_tensor_arg(path: str) -> cumulants.ParticleTensor:
    try:
        return cumulants.ParticleTensor.from_json(_load_json(path))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad tensor file {path}: {exc}") from exc


def parse_word(text: str) -> cumulants.StarWord:
    """``"1,2*,1,2*"`` (or whitespace separated) into a StarWord."""
    out = []
    for tok in text.replace(",", " ").split():
        star = tok.endswith("*")
        idx = tok.rstrip("*")
        if not idx:
            raise InputError(f"bad letter {tok!r}")
        out.append((idx, star))
    if not out:
        raise InputError("empty word")
    return tuple(out)


def word_text(w: cumulants.StarWord) -> str:
    return ",".join(f"{i}*" if s else i for i, s in w)


def _dump(obj: Any, out) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))
    out.write("\n")


def _write_csv(rows: list[dict], out) -> None:
    if not rows:
        return
    fields: list[str] = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def _emit(args, payload: dict, text_lines: Iterable[str], csv_rows: list[dict] | None = None) -> None:
    out = sys.stdout
    if args.format == "json":
        _dump(payload, out)
    elif args.format == "csv":
        _write_csv(csv_rows if csv_rows is not None else [payload], out)
    else:
        for line in text_lines:
            out.write(line + "\n")


def _exit_for(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_FAIL


# subcommands -----------------------------------------------------------------

FAMILIES = ("nc", "star-pairings", "alternating", "no-intrablock", "multichains")


def _family_iter(family: str, n: int, m: int | None, ceiling):
    if family == "nc":
        return partitions.enumerate_nc(n, ceiling=ceiling)
    if m is None:
        raise InputError(f"--m is required for {family}")
    if family == "star-pairings":
        return patterns.enumerate_star_pairings(n, m, ceiling=ceiling)
    if family == "alternating":
        return patterns.enumerate_alternating_partitions(n, m, ceiling=ceiling)
    if family == "no-intrablock":
        return patterns.enumerate_no_intrablock_pairings(n, m, ceiling=ceiling)
    if family == "multichains":
        return partitions.enumerate_multichains(n, m, ceiling=ceiling)
    raise InputError(f"unknown family {family!r}")


def _item_text(x) -> str:
    if isinstance(x, partitions.Multichain):
        return " <= ".join(x.to_text())
    return x.to_text()


def cmd_count(args) -> int:
    n, m = args.n, args.m
    if args.family in (None, "catalan"):
        value = partitions.catalan(n)
        payload = {"kind": "count", "family": "catalan", "n": n, "count": str(value)}
        _emit(args, payload, [str(value)])
        return EXIT_OK
    if args.family == "fuss-catalan":
        value = partitions.fuss_catalan(n, m)
        payload = {"kind": "count", "family": "fuss-catalan", "n": n, "m": m, "count": str(value)}
        _emit(args, payload, [str(value)])
        return EXIT_OK
    count = sum(1 for _ in _family_iter(args.family, n, m, args.ceiling))
    expected = None
    if args.family == "nc":
        expected = partitions.catalan(n)
    elif args.family in ("star-pairings", "multichains"):
        # multichains of length n in NC(m) and star pairings share the count
        expected = partitions.fuss_catalan(n, m)
    elif args.family == "no-intrablock":
        expected = int(models.chebyshev_moment_oracle(n, m))
    payload = {"kind": "count", "family": args.family, "n": n, "count": str(count)}
    if m is not None:
        payload["m"] = m
    passed = True
    if expected is not None:
        passed = count == expected
        payload["expected"] = str(expected)
        payload["verdict"] = "pass" if passed else "fail"
    _emit(args, payload, [str(count)])
    return _exit_for(passed)


def cmd_enumerate(args) -> int:
    items = _family_iter(args.family, args.n, args.m, args.ceiling)
    if args.format == "text":
        for x in items:
            sys.stdout.write(_item_text(x) + "\n")
        return EXIT_OK
    texts = [_item_text(x) for x in items]
    payload = {"kind": "enumerate", "family": args.family, "n": args.n, "m": args.m,
               "count": str(len(texts)), "items": texts}
    _emit(args, payload, texts, [{"index": i, "item": t} for i, t in enumerate(texts, 1)])
    return EXIT_OK


def cmd_bijection(args) -> int:
    n, m = args.n, args.m
    rows = []
    passed = True
    if args.direction in ("forward", "roundtrip"):
        for pi in patterns.enumerate_star_pairings(n, m, ceiling=args.ceiling):
            chain = bijection.phi_map(pi)
            back = bijection.q_map(chain)
            ok = back.pairing == pi.pairing
            passed &= ok
            rows.append({"direction": "forward", "pairing": pi.pairing.to_text(),
                         "chain": " <= ".join(chain.to_text()), "identity": ok})
    if args.direction in ("backward", "roundtrip"):
        for chain in partitions.enumerate_multichains(n, m, ceiling=args.ceiling):
            pi = bijection.q_map(chain)
            ok = bijection.phi_map(pi) == chain
            passed &= ok
            rows.append({"direction": "backward", "chain": " <= ".join(chain.to_text()),
                         "pairing": pi.pairing.to_text(), "identity": ok})
    fwd = sum(1 for r in rows if r["direction"] == "forward")
    bwd = sum(1 for r in rows if r["direction"] == "backward")
    if args.direction == "roundtrip":
        passed &= fwd == bwd == partitions.fuss_catalan(n, m)
    payload = {"kind": "bijection", "n": n, "m": m, "direction": args.direction,
               "pairings": str(fwd), "multichains": str(bwd),
               "verdict": "pass" if passed else "fail", "rows": rows}
    lines = []
    for r in rows:
        if r["direction"] == "forward":
            lines.append(f"{r['pairing']} -> {r['chain']}")
        else:
            lines.append(f"{r['chain']} -> {r['pairing']}")
    if args.direction == "roundtrip":
        lines = [f"{fwd} pairings, {bwd} multichains, "
                 f"{'all identity round trips' if passed else 'ROUND TRIP FAILURE'}"]
    _emit(args, payload, lines, rows)
    return _exit_for(passed)


def _moment_annotation(model: models.RDiagonalModel, n: int, m: int, value: Fraction) -> str | None:
    if model.name == "circular" and value == partitions.fuss_catalan(n, m):
        return f"{format_rational(value)} = C^{{({n})}}_{m}"
    if model.name == "haar" and value == 1:
        return "1 = trace of the identity (unitary)"
    return None


def cmd_moment(args) -> int:
    model = load_model_arg(args.model, args.k_max)
    if args.word:
        w = parse_word(args.word)
        value = cumulants.mixed_moment(model.seq, w)
        payload = {"kind": "mixed_moment", "model": model.name, "word": word_text(w),
                   "value": format_rational(value)}
        lines = [format_rational(value)]
        passed = True
        if model.name == "haar":
            oracle = models.free_group_moment_oracle(w)
            passed = value == oracle
            payload["free_group_oracle"] = str(oracle)
            payload["verdict"] = "pass" if passed else "fail"
        _emit(args, payload, lines)
        return _exit_for(passed)
    if args.tensor:
        T = load_tensor_arg(args.tensor)
        if args.m is None:
            raise InputError("--m is required")
        value = cumulants.particle_moment(model.seq, T, args.m, jobs=args.jobs, ceiling=args.ceiling)
        payload = {"kind": "particle_moment", "model": model.name, "n": T.n, "m": args.m,
                   "value": format_rational(value),
                   "norm_2m_float": haagerup.root_float(value, 2 * args.m),
                   "two_norm_sq": format_rational(cumulants.two_norm(model.seq, T))}
        _emit(args, payload, [format_rational(value)])
        return EXIT_OK
    if args.n is None or args.m is None:
        raise InputError("moment needs --word, --tensor with --m, or --n and --m")
    value = cumulants.moment_from_cumulants(model.seq, args.n, args.m, jobs=args.jobs,
                                           ceiling=args.ceiling)
    note = _moment_annotation(model, args.n, args.m, value)
    payload = {"kind": "moment", "model": model.name, "n": args.n, "m": args.m,
               "value": format_rational(value)}
    if note:
        payload["annotation"] = note
    _emit(args, payload, [format_rational(value)] + ([note] if note else []))
    return EXIT_OK


def _tensors(args) -> list[cumulants.ParticleTensor]:
    if args.tensor:
        return [load_tensor_arg(args.tensor)]
    rng = random.Random(args.seed)
    n_max = args.n or 3
    return [haagerup.random_tensor(rng, 1 + i % n_max) for i in range(args.random)]


def cmd_haagerup(args) -> int:
    model = load_model_arg(args.model, args.k_max)
    reports = []
    for T in _tensors(args):
        if args.check in ("main-lemma", "both"):
            reports.append(haagerup.verify_main_lemma(model, T, args.m_max, jobs=args.jobs,
                                                      ceiling=args.ceiling))
        if args.check in ("strong", "both"):
            reports.append(haagerup.verify_strong_haagerup(model, T, args.m_max, jobs=args.jobs,
                                                           ceiling=args.ceiling))
    passed = all(r.passed for r in reports)
    payload = {"kind": "haagerup", "model": model.name, "seed": args.seed,
               "constant": haagerup.haagerup_constant(model).to_json(),
               "verdict": "pass" if passed else "fail",
               "reports": [r.to_json() for r in reports]}
    csv_rows = []
    for i, r in enumerate(reports):
        for row in r.csv_rows():
            csv_rows.append({"tensor": i // (2 if args.check == "both" else 1),
                             "check": r.kind, **row})
    lines = [f"{r.kind} n={r.n}: {r.verdict}" for r in reports] + [f"overall: {payload['verdict']}"]
    _emit(args, payload, lines, csv_rows)
    return _exit_for(passed)


def cmd_sharpness(args) -> int:
    reports = [haagerup.sharpness_haar(k, args.m_max, jobs=args.jobs, ceiling=args.ceiling)
               for k in args.k]
    passed = all(r.passed for r in reports)
    payload = {"kind": "sharpness", "sqrt_e_float": haagerup.SQRT_E,
               "verdict": "pass" if passed else "fail", "reports": [r.to_json() for r in reports]}
    rows, lines = [], []
    for r in reports:
        for m, (p, x) in enumerate(zip(r.powers, r.norms), start=1):
            rows.append({"k": r.k, "m": m, "moment": format_rational(p), "norm_float": x,
                         "target_float": r.target})
        lines.append(f"k={r.k}: ||T||_2m = {', '.join(f'{x:.6f}' for x in r.norms)}; "
                     f"target {r.target:.6f}; ratio {r.ratio_target:.6f}"
                     f"{' > sqrt(e)' if r.ratio_exceeds_sqrt_e else ''}; {'pass' if r.passed else 'fail'}")
    _emit(args, payload, lines, rows)
    return _exit_for(passed)


def cmd_ultra(args) -> int:
    grid = spectral.parse_grid(args.t_grid) if args.t_grid else None
    rep = spectral.verify_ultracontractivity(args.Ca, grid)
    payload = rep.to_json()
    lines = [f"sup t*k(t) = {rep.sup_scaled!r} at t={rep.argsup:g}; decreasing={rep.decreasing}; "
             f"bound holds={rep.bound_holds}; {payload['verdict']}"]
    _emit(args, payload, lines)
    return _exit_for(rep.passed)


def _density(args) -> spectral.RadialDensity:
    if args.density == "disc":
        return spectral.uniform_disc(args.radius)
    if args.density == "annulus":
        return spectral.annulus(args.inner, args.radius)
    if not args.file:
        raise InputError("--density file needs --file")
    try:
        return spectral.load_density_csv(args.file)
    except (OSError, ValueError, IndexError) as exc:
        raise InputError(f"bad density file {args.file}: {exc}") from exc


def cmd_brown(args) -> int:
    nu = _density(args)
    try:
        nu.check()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.fit:
        lo, hi = (int(x) for x in args.fit.split(":"))
        fit = spectral.sqrt_fit(nu, range(lo, hi + 1))
        passed = fit.within(4.0)
        payload = {"kind": "brown_fit", "density": nu.name, **fit.to_json(),
                   "verdict": "pass" if passed else "fail"}
        lines = [f"n={n}: {x:.10f} ({c:.6f} sqrt(n))"
                 for n, x, c in zip(fit.ns, fit.ratios, fit.constants)]
        lines.append(f"spread {fit.spread:.6f}: {payload['verdict']}")
        _emit(args, payload, lines, fit.to_json()["rows"])
        return _exit_for(passed)
    value = spectral.brown_ratio(nu, args.n)
    payload = {"kind": "brown", "density": nu.name, "n": args.n, "ratio_float": value,
               "ratio_over_sqrt_n_float": value / math.sqrt(args.n)}
    _emit(args, payload, [repr(value)])
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.word:
        w = parse_word(args.word)
        value = models.free_group_moment_oracle(w)
        payload = {"kind": "free_group_oracle", "word": word_text(w), "value": str(value)}
        _emit(args, payload, [str(value)])
        return EXIT_OK
    if args.n is None or args.m is None:
        raise InputError("oracle needs --word or --n and --m")
    value = models.chebyshev_moment_oracle(args.n, args.m)
    payload = {"kind": "chebyshev_oracle", "n": args.n, "m": args.m, "value": format_rational(value),
               "root_float": haagerup.root_float(value, 2 * args.m) if args.m else 1.0}
    _emit(args, payload, [format_rational(value)])
    return EXIT_OK


def run_suite(seed: int, jobs: int = 1, corpus: int = 12, ceiling: int | None = None) -> dict:
    """A compact deterministic run across every module; the JSON is independent of ``jobs``."""
    sections: dict[str, Any] = {}
    sections["counts"] = [
        {"n": n, "m": m, "star_pairings": str(sum(1 for _ in patterns.enumerate_star_pairings(n, m))),
         "fuss_catalan": str(partitions.fuss_catalan(n, m))}
        for n in range(1, 5) for m in range(1, 5) if 2 * n * m <= 12]
    mods = [models.circular(), models.haar_unitary(), models.b_model(1, 1)]
    sections["moments"] = [
        {"model": a.name, "n": n, "m": m,
         "value": format_rational(cumulants.moment_from_cumulants(a.seq, n, m, jobs=jobs,
                                                                  ceiling=ceiling))}
        for a in mods for n in range(1, 4) for m in range(1, 4) if 2 * n * m <= 12]
    tensors = haagerup.tensor_corpus(seed, corpus)
    reports = []
    for a in mods:
        for T in tensors:
            reports.append(haagerup.verify_main_lemma(a, T, 2, jobs=jobs, ceiling=ceiling).to_json())
            reports.append(haagerup.verify_strong_haagerup(a, T, 2, jobs=jobs,
                                                           ceiling=ceiling).to_json())
    sections["tensors"] = [T.to_json() for T in tensors]
    sections["inequalities"] = reports
    sections["sharpness"] = [haagerup.sharpness_haar(k, 3, jobs=jobs).to_json() for k in (2, 3, 4, 5)]
    sections["ultracontractivity"] = spectral.verify_ultracontractivity(1.0).to_json()
    sections["brown"] = spectral.sqrt_fit(spectral.annulus(0.5, 1.0), range(5, 41)).to_json()
    verdicts = [r["verdict"] for r in reports] + [s["verdict"] for s in sections["sharpness"]]
    verdicts.append(sections["ultracontractivity"]["verdict"])
    ok = all(v == "pass" for v in verdicts)
    ok &= all(c["star_pairings"] == c["fuss_catalan"] for c in sections["counts"])
    return {"kind": "suite", "seed": seed, "verdict": "pass" if ok else "fail", **sections}


def cmd_suite(args) -> int:
    payload = run_suite(args.seed, args.jobs, args.corpus, args.ceiling)
    _emit(args, payload, [f"suite seed={args.seed}: {payload['verdict']}"])
    return _exit_for(payload["verdict"] == "pass")


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json",
                     help="emit a JSON report")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv",
                     help="emit CSV rows")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for exact sums")
    common.add_argument("--seed", type=int, default=0, help="seed for random tensors")
    common.add_argument("--ceiling", type=int, default=None,
                        help="enumeration size ceiling (default: $FREEHAAG_CEILING or built-in)")
    common.add_argument("--k-max", type=int, default=models.DEFAULT_K_MAX,
                        help="truncation order for built-in models")

    p = argparse.ArgumentParser(prog="freehaag", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="Catalan, Fuss-Catalan and family counts")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--catalan", dest="family", action="store_const", const="catalan")
    g.add_argument("--fuss-catalan", dest="family", action="store_const", const="fuss-catalan")
    g.add_argument("--nc", dest="family", action="store_const", const="nc")
    g.add_argument("--star-pairings", dest="family", action="store_const", const="star-pairings")
    g.add_argument("--alternating", dest="family", action="store_const", const="alternating")
    g.add_argument("--no-intrablock", dest="family", action="store_const", const="no-intrablock")
    g.add_argument("--multichains", dest="family", action="store_const", const="multichains")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("enumerate", parents=[common], help="stream a partition family")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("bijection", parents=[common], help="star pairings <-> multichains")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--direction", choices=("forward", "backward", "roundtrip"), default="roundtrip")
    s.set_defaults(func=cmd_bijection)

    s = sub.add_parser("moment", parents=[common], help="pattern, particle and mixed moments")
    s.add_argument("--model", default="circular", help="circular, haar, b11, b(g,l) or a JSON file")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--tensor", help="ParticleTensor JSON file")
    s.add_argument("--word", help="star word such as '1,2*,1,2*'")
    s.set_defaults(func=cmd_moment)

    s = sub.add_parser("haagerup", parents=[common], help="main-lemma and strong Haagerup checks")
    s.add_argument("--model", default="circular")
    s.add_argument("--tensor", help="ParticleTensor JSON file")
    s.add_argument("--random", type=int, default=10, help="number of seeded random tensors")
    s.add_argument("--n", type=int, help="largest word length for random tensors")
    s.add_argument("--m-max", type=int, default=3)
    s.add_argument("--check", choices=("main-lemma", "strong", "both"), default="both")
    s.set_defaults(func=cmd_haagerup)

    s = sub.add_parser("sharpness", parents=[common], help="u1+...+uk against 2 sqrt(k-1)")
    s.add_argument("--k", type=int, nargs="+", default=[2, 3, 4, 5])
    s.add_argument("--m-max", type=int, default=3)
    s.set_defaults(func=cmd_sharpness)

    s = sub.add_parser("ultra", parents=[common], help="ultracontractivity kernel check")
    s.add_argument("--Ca", type=float, default=1.0)
    s.add_argument("--t-grid", help="'lo:hi:count' (log spaced) or comma list")
    s.set_defaults(func=cmd_ultra)

    s = sub.add_parser("brown", parents=[common], help="radial Brown-measure norm ratios")
    s.add_argument("--density", choices=("disc", "annulus", "file"), default="disc")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("--inner", type=float, default=0.5)
    s.add_argument("--file", help="CSV of r,f(r) rows")
    s.add_argument("--fit", help="'lo:hi' range of n for the sqrt(n) fit")
    s.set_defaults(func=cmd_brown)

    s = sub.add_parser("oracle", parents=[common], help="free-group and Chebyshev oracles")
    s.add_argument("--word")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("suite", parents=[common], help="deterministic run over every module")
    s.add_argument("--corpus", type=int, default=12)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "text"
    try:
        return args.func(args)
    except (SizeError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (InputError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
