"""Command-line front end.

Exit codes: 0 success, 1 malformed input (unreadable JSON, syntax errors),
2 invalid input (inadmissible presentation, bad (d, e), operation not
applicable), 3 a guard of the normalization loop failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .classify import recognize, uniqueness_check
from .deriv import (
    DEFAULT_LND_BOUND,
    DerivationError,
    NormalizationError,
    PolyDerivation,
    bracket,
    conjugate,
    exp_auto,
    is_lnd,
    jordan_chevalley,
    normalize_semisimple,
)
from .divisor import pairs_equivalent
from .dpd import DEFAULT_DEGREE_CAP, DpdPresentation, PresentationError, validate
from .exactmath import ParseError
from .toric import (
    ToricData,
    ToricDataError,
    extract_dpd,
    format_monomial,
    invariant_basis,
    recognize_toric,
    vde_isomorphic,
)

log = logging.getLogger("cstar")

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _configure_logging():
    level = os.environ.get("CSTAR_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _weights(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}") from None
    return a, b


def _toric(text: str) -> ToricData:
    try:
        return ToricData.parse(text)
    except ToricDataError as err:
        raise CliError(EXIT_INVALID, str(err)) from None
    except ValueError as err:
        raise CliError(EXIT_MALFORMED, str(err)) from None


def _derivation(text: str) -> PolyDerivation:
    try:
        return PolyDerivation.parse(text)
    except ParseError as err:
        raise CliError(EXIT_MALFORMED, f"cannot parse {text!r}: {err}") from None


def _load_presentation(path: str) -> DpdPresentation:
    try:
        raw = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        doc = json.loads(raw)
    except OSError as err:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise CliError(EXIT_MALFORMED, f"{path}: malformed JSON: {err}") from None
    try:
        return DpdPresentation.from_json(doc)
    except ValueError as err:
        raise CliError(EXIT_MALFORMED, f"{path}: {err}") from None


# classify


def _classify_one(path: str) -> dict:
    pres = _load_presentation(path)
    report = validate(pres)
    if not report.valid:
        raise CliError(EXIT_INVALID, "; ".join(report.violations), report.to_json())
    return recognize(pres).to_json()


def cmd_classify(args) -> tuple[int, str]:
    target = Path(args.input)
    if args.input != "-" and target.is_dir():
        results, code = [], EXIT_OK
        for path in sorted(target.glob("*.json")):
            try:
                results.append({"file": path.name, "status": "ok", "report": _classify_one(str(path))})
            except CliError as err:
                code = max(code, err.code)
                entry = {"file": path.name, "status": "invalid" if err.code == EXIT_INVALID
                         else "malformed", "error": str(err)}
                if err.payload:
                    entry["validation"] = err.payload
                results.append(entry)
        return code, _dump({"results": results})
    try:
        return EXIT_OK, _dump(_classify_one(args.input))
    except CliError as err:
        if err.payload is not None:
            return err.code, _dump(err.payload)
        raise


# toric


def cmd_toric(args) -> tuple[int, str]:
    op = args.toric_command
    if op == "isom":
        a, b = _toric(args.first), _toric(args.second)
        result = vde_isomorphic(a, b)
        if args.json:
            return EXIT_OK, _dump({"first": str(a), "second": str(b), "isomorphic": result})
        return EXIT_OK, ("true" if result else "false") + "\n"
    if op == "basis":
        t = _toric(args.data)
        basis = invariant_basis(t)
        if args.json:
            return EXIT_OK, _dump({"data": str(t), "basis": [list(m) for m in basis]})
        return EXIT_OK, ", ".join(format_monomial(a, b) for a, b in basis) + "\n"
    if op == "extract":
        t = _toric(args.data)
        try:
            pres = extract_dpd(t, args.weights, args.degree_cap)
        except ValueError as err:
            raise CliError(EXIT_INVALID, str(err)) from None
        if args.json:
            return EXIT_OK, _dump(pres.to_json())
        return EXIT_OK, f"{pres.pair}\n"
    # recognize
    pres = _load_presentation(args.input)
    check = validate(pres)
    if not check.valid:
        return EXIT_INVALID, _dump(check.to_json())
    t = recognize_toric(pres)
    if args.json:
        return EXIT_OK, _dump({"toric": None if t is None else {"d": t.d, "e": t.e}})
    return EXIT_OK, (str(t) if t is not None else "not toric") + "\n"


# derivations


def cmd_deriv(args) -> tuple[int, str]:
    op = args.deriv_command
    try:
        if op == "bracket":
            result = bracket(_derivation(args.first), _derivation(args.second))
            return EXIT_OK, _emit_derivation(result, args.json)
        if op == "lnd":
            verdict = is_lnd(_derivation(args.derivation), args.lnd_bound)
            if args.json:
                return EXIT_OK, _dump({"nilpotent": verdict.nilpotent, "order": verdict.order,
                                       "bound": verdict.bound, "verdict": str(verdict)})
            return EXIT_OK, f"{verdict}\n"
        if op == "exp":
            phi = exp_auto(_derivation(args.derivation), args.lnd_bound)
            if args.json:
                return EXIT_OK, _dump(phi.to_json())
            return EXIT_OK, f"{phi}\n"
        if op == "conj":
            result = conjugate(_derivation(args.delta), _derivation(args.derivation), args.lnd_bound)
            return EXIT_OK, _emit_derivation(result, args.json)
        if op == "jordan":
            parts = jordan_chevalley(_derivation(args.derivation))
            if args.json:
                return EXIT_OK, _dump({"semisimple": str(parts.semisimple),
                                       "nilpotent": str(parts.nilpotent),
                                       "eigenvalues": [str(v) for v in parts.eigenvalues]})
            return EXIT_OK, f"semisimple: {parts.semisimple}\nnilpotent: {parts.nilpotent}\n"
        # normalize
        delta = _derivation(args.derivation)
        try:
            result = normalize_semisimple(delta, args.weights, args.degree_cap, args.lnd_bound)
        except NormalizationError as err:
            doc = {"error": err.reason, "message": str(err), "iterations": err.iterations}
            return EXIT_GUARD, _dump(doc) if args.json else f"guard failure: {err}\n"
        if args.json:
            return EXIT_OK, _dump(result.to_json())
        chain = ", ".join(str(d) for d in result.conjugators) or "(empty)"
        c = "none" if result.c is None else str(result.c)
        return EXIT_OK, f"c = {c}\nconjugators: {chain}\nresidual: {result.residual}\n"
    except NormalizationError:
        raise
    except DerivationError as err:
        raise CliError(EXIT_INVALID, str(err)) from None


def _emit_derivation(d: PolyDerivation, as_json: bool) -> str:
    return _dump(d.to_json()) if as_json else f"{d}\n"


# equivalence


def cmd_equiv(args) -> tuple[int, str]:
    p, q = _load_presentation(args.first), _load_presentation(args.second)
    for pres in (p, q):
        check = validate(pres)
        if not check.valid:
            return EXIT_INVALID, _dump(check.to_json())
    try:
        if args.uniqueness:
            report = uniqueness_check(p, q)
            if args.json:
                return EXIT_OK, _dump(report.to_json())
            return EXIT_OK, f"{report.verdict.value}: {report.detail}\n"
        w = pairs_equivalent(p.pair, q.pair, allow_swap=not args.no_swap)
    except (PresentationError, ValueError) as err:
        raise CliError(EXIT_INVALID, str(err)) from None
    if args.json:
        return EXIT_OK, _dump({"equivalent": w is not None,
                               "witness": None if w is None else w.to_json()})
    return EXIT_OK, (f"equivalent: {w}" if w is not None else "not equivalent") + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP,
                        help="degree window for extraction; iteration cap for normalize")
    common.add_argument("--lnd-bound", type=int, default=DEFAULT_LND_BOUND,
                        help="nilpotency search bound")
    common.add_argument("--weights", type=_weights, default=(1, -1),
                        help="grading weights 'a,b' (use --weights=-1,2 for a leading minus)")

    parser = argparse.ArgumentParser(prog="cstar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a presentation file or directory")
    p.add_argument("input", help="presentation JSON file, a directory of them, or - for stdin")
    p.set_defaults(handler=cmd_classify)

    t = sub.add_parser("toric", help="affine toric surfaces V_{d,e}")
    tsub = t.add_subparsers(dest="toric_command", required=True)
    q = tsub.add_parser("isom", parents=[common])
    q.add_argument("first")
    q.add_argument("second")
    q = tsub.add_parser("basis", parents=[common])
    q.add_argument("data")
    q = tsub.add_parser("extract", parents=[common])
    q.add_argument("data")
    q = tsub.add_parser("recognize", parents=[common])
    q.add_argument("input")
    t.set_defaults(handler=cmd_toric)

    d = sub.add_parser("deriv", help="derivations of Q[x,y] and Q[t,u,1/u]")
    dsub = d.add_subparsers(dest="deriv_command", required=True)
    q = dsub.add_parser("bracket", parents=[common])
    q.add_argument("first")
    q.add_argument("second")
    for name in ("lnd", "exp", "jordan", "normalize"):
        q = dsub.add_parser(name, parents=[common])
        q.add_argument("derivation")
    q = dsub.add_parser("conj", parents=[common])
    q.add_argument("delta")
    q.add_argument("derivation")
    d.set_defaults(handler=cmd_deriv)

    e = sub.add_parser("equiv", parents=[common], help="equivalence of two hyperbolic pairs")
    e.add_argument("first")
    e.add_argument("second")
    e.add_argument("--no-swap", action="store_true", help="do not exchange D+ and D-")
    e.add_argument("--uniqueness", action="store_true", help="run the uniqueness report")
    e.set_defaults(handler=cmd_equiv)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_MALFORMED if exit_.code else EXIT_OK
    log.debug("arguments: %s", vars(args))
    try:
        code, text = args.handler(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except PresentationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code
