"""``tablecount`` command line.

Every subcommand prints one JSON document (or CSV with ``--format csv``)
to stdout.  Exit status: 0 success, 1 usage error, 2 size guard exceeded,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import asdict
from fractions import Fraction

from . import asymptotics, exact, margins as margins_mod, pairing, report, switching
from .errors import GuardExceeded, TableCountError

EXIT_USAGE = 1
EXIT_GUARD = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    pass


class InvariantFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def payload_json(payload) -> str:
    return json.dumps(_jsonable(payload))


def _csv(payload) -> str:
    buf = io.StringIO()
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        records = rows
    else:
        records = [payload]
    records = [{k: json.dumps(_jsonable(v)) if isinstance(v, (dict, list)) else _jsonable(v)
                for k, v in r.items()} for r in records]
    writer = csv.DictWriter(buf, fieldnames=list(records[0]))
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


# -- payload builders; the CLI only serializes these ---------------------------

def moments_payload(mp) -> dict:
    d = asdict(margins_mod.central_moments(mp))
    d["S"] = mp.total
    return d


def classify_payload(mp) -> dict:
    return asdict(margins_mod.classify_regime(mp))


def count_payload(mp, alphabet, method="dp") -> dict:
    if method == "dp":
        counter = exact.TableCounter(mp, alphabet)
        return {"count": str(counter.count()), "states_visited": counter.states_visited,
                "alphabet": str(alphabet)}
    c = exact.count_bruteforce(mp, alphabet)
    return {"count": str(c), "states_visited": c, "alphabet": str(alphabet)}


def composition_payload(m, n, S) -> dict:
    e = exact.expected_moments(m, n, S)
    return {
        "m": m, "n": n, "S": S,
        "distribution": [exact.row_sum_distribution(m, n, S, k) for k in range(S + 1)],
        "expected_moments": dict(zip(("mu2", "nu2", "mu3", "nu3"), e)),
    }


def pairing_moments_payload(mp) -> dict:
    dm = pairing.doublet_moments(mp)
    out = {"b": list(dm.b), "b_truncated": list(dm.truncated)}
    if mp.total >= 4:
        cp = pairing.class_probabilities(mp)
        out["p"] = list(cp.p)
        out["p_truncated"] = list(cp.truncated)
    if mp.total <= pairing.PAIRING_MAX_TOTAL or exact.guards_lifted():
        out["exhaustive_b"] = pairing.exhaustive_doublet_moments(mp)
        out["exhaustive_p"] = pairing.exhaustive_class_probabilities(mp)
    return out


def pairing_identity_payload(mp) -> dict:
    lhs_all, rhs_all = pairing.verify_weight_identity(mp, lambda a: True)
    lhs_01, rhs_01 = pairing.verify_weight_identity(mp, lambda a: not a)
    return {"all": {"lhs": str(lhs_all), "rhs": rhs_all},
            "zero_one": {"lhs": str(lhs_01), "rhs": rhs_01},
            "ok": lhs_all == rhs_all and lhs_01 == rhs_01}


def verify_payload() -> dict:
    """Small exhaustive cross-checks of the exact routes."""
    checks = {}
    alphabets = [exact.ALL, exact.EntryAlphabet.zero_one(), exact.EntryAlphabet.finite([0, 1, 3])]
    oracle_ok = True
    for rows, cols in [([2, 2], [2, 2]), ([3, 1], [2, 1, 1]), ([2, 1, 1], [1, 2, 1]), ([3, 2], [1, 2, 2])]:
        mp = margins_mod.validate_margins(rows, cols)
        for a in alphabets:
            oracle_ok &= exact.count_exact(mp, a) == exact.count_bruteforce(mp, a)
    checks["oracle_equivalence"] = oracle_ok
    weight_ok = True
    b1_ok = True
    for rows, cols in [([2, 1], [2, 1]), ([2, 2], [2, 2]), ([3, 1], [1, 1, 2])]:
        mp = margins_mod.validate_margins(rows, cols)
        weight_ok &= pairing_identity_payload(mp)["ok"]
        b1_ok &= pairing.doublet_moments(mp).b[1] == pairing.exhaustive_doublet_moments(mp, 1)[1]
    checks["weight_identity"] = weight_ok
    checks["doublet_b1"] = b1_ok
    return {"checks": checks, "ok": all(checks.values())}


# -- argument handling ----------------------------------------------------------

def _margins(args):
    if getattr(args, "margins", None):
        return margins_mod.load_margins(args.margins)
    if args.rows is None or args.cols is None:
        raise UsageError("need --rows and --cols (or --margins FILE)")
    return margins_mod.validate_margins(margins_mod.parse_int_list(args.rows),
                                        margins_mod.parse_int_list(args.cols))


def _add_margin_args(p):
    p.add_argument("--rows", help="comma-separated row sums")
    p.add_argument("--cols", help="comma-separated column sums")
    p.add_argument("--margins", help='JSON file {"rows": [...], "cols": [...]}')


def _load_matrix(path):
    with open(path) as fh:
        return exact.TableMatrix.from_entries(json.load(fh)["entries"])


def _parse_site(text, D):
    cells = [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    return switching.SwitchingSite(D, tuple(cells))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tablecount",
                     description="Count and estimate tables with prescribed row and column sums.")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name):
        return sub.add_parser(name, parents=[fmt])

    for name in ("moments", "classify"):
        _add_margin_args(cmd(name))

    for name in ("count-exact", "count-bruteforce"):
        p = cmd(name)
        _add_margin_args(p)
        p.add_argument("--allowed", help="entry alphabet, e.g. 0,1,3 (default: all)")

    p = cmd("sample-matrix")
    _add_margin_args(p)
    p.add_argument("--allowed")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=1)

    p = cmd("composition-law")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--S", type=int, required=True)

    for name in ("estimate", "compare"):
        p = cmd(name)
        _add_margin_args(p)
        p.add_argument("--formula", default="main",
                       choices=("main", "01", "semiregular", "moments", "nearreg", "restricted", "cm"))
        p.add_argument("--allowed")
        p.add_argument("--delta", type=float, default=0.0)
        for flag in ("--m", "--s", "--n", "--t"):
            p.add_argument(flag, type=int)

    p = cmd("convergence")
    p.add_argument("--family", default="regular", choices=("regular",))
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--sizes", default="4,8,16")
    p.add_argument("--formula", default="main", choices=("main", "moments", "nearreg", "semiregular"))

    p = cmd("pairing")
    _add_margin_args(p)
    p.add_argument("--mode", required=True, choices=("enumerate", "sample", "moments", "identity"))
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=1)

    p = cmd("switch")
    p.add_argument("--matrix", required=True, help='JSON file {"entries": [[...], ...]}')
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--mode", required=True, choices=("apply", "reverse", "enumerate", "bounds"))
    p.add_argument("--site", help="positions as 'i0,j0;i1,j1;...' (default: first available)")
    p.add_argument("--restricted", action="store_true")

    cmd("verify")
    return parser


def _estimate(args):
    alphabet = exact.EntryAlphabet.parse(args.allowed) if args.allowed else None
    spec = None
    if None not in (args.m, args.s, args.n, args.t):
        spec = asymptotics.SemiregularSpec(args.m, args.s, args.n, args.t)
    mp = spec.margins() if spec and args.rows is None and not args.margins else None
    if mp is None and (args.rows is not None or args.margins):
        mp = _margins(args)
    if mp is None and spec is None:
        raise UsageError("need margins or --m/--s/--n/--t")
    return mp, spec, alphabet


def dispatch(args) -> dict:
    cmd = args.command
    if cmd == "moments":
        return moments_payload(_margins(args))
    if cmd == "classify":
        return classify_payload(_margins(args))
    if cmd in ("count-exact", "count-bruteforce"):
        return count_payload(_margins(args), exact.EntryAlphabet.parse(args.allowed),
                             "dp" if cmd == "count-exact" else "bruteforce")
    if cmd == "sample-matrix":
        counter = exact.TableCounter(_margins(args), exact.EntryAlphabet.parse(args.allowed))
        rng = random.Random(args.seed)
        return {"samples": [counter.sample(rng).to_dict()["entries"] for _ in range(args.samples)]}
    if cmd == "composition-law":
        return composition_payload(args.m, args.n, args.S)
    if cmd == "estimate":
        mp, spec, alphabet = _estimate(args)
        return asymptotics.estimate(args.formula, mp, spec=spec, alphabet=alphabet,
                                    delta=args.delta).to_dict()
    if cmd == "compare":
        mp, spec, alphabet = _estimate(args)
        if mp is None:
            mp = spec.margins()
        return report.compare_estimate(mp, args.formula, alphabet=alphabet, delta=args.delta).to_dict()
    if cmd == "convergence":
        sizes = margins_mod.parse_int_list(args.sizes)
        return {"rows": [r.to_dict() for r in report.convergence_report(args.s, args.t, sizes, args.formula)]}
    if cmd == "pairing":
        mp = _margins(args)
        if args.mode == "enumerate":
            ps = list(pairing.enumerate_pairings(mp))
            return {"count": len(ps),
                    "pairings": [{"image": list(p.image),
                                  "entries": pairing.pairing_to_matrix(p).to_dict()["entries"],
                                  "weight": pairing.multiplicity_and_weight(p)[1]} for p in ps]}
        if args.mode == "sample":
            if args.seed is None:
                raise UsageError("--seed is required for --mode sample")
            seeds = [args.seed + i for i in range(args.samples)]
            out = []
            for sd in seeds:
                p = pairing.random_pairing(mp, sd)
                out.append({"seed": sd, "image": list(p.image),
                            "entries": pairing.pairing_to_matrix(p).to_dict()["entries"]})
            return {"samples": out}
        if args.mode == "moments":
            return pairing_moments_payload(mp)
        payload = pairing_identity_payload(mp)
        if not payload["ok"]:
            raise InvariantFailure(payload_json(payload))
        return payload
    if cmd == "switch":
        Q = _load_matrix(args.matrix)
        if args.mode == "bounds":
            lower, upper = switching.switching_bounds(Q, args.D)
            return {"lower": str(lower), "upper_reverse": str(upper),
                    "forward_count": switching.count_switchings(Q, args.D),
                    "reverse_count": switching.count_reverse_switchings(Q, args.D)}
        if args.mode == "enumerate":
            sites = list(switching.enumerate_switchings(Q, args.D, args.restricted))
            return {"count": len(sites), "sites": [s.to_dict()["positions"] for s in sites]}
        if args.site:
            site = _parse_site(args.site, args.D)
        else:
            it = (switching.enumerate_switchings(Q, args.D, args.restricted) if args.mode == "apply"
                  else switching.enumerate_reverse_switchings(Q, args.D))
            site = next(it, None)
            if site is None:
                raise UsageError(f"no {args.mode} {args.D}-switching applies to this matrix")
        fn = switching.apply_switching if args.mode == "apply" else switching.apply_reverse_switching
        R = fn(Q, site)
        if R.margins != Q.margins:
            raise InvariantFailure("switching changed the margins")
        return {"site": site.to_dict()["positions"], "entries": R.to_dict()["entries"]}
    if cmd == "verify":
        payload = verify_payload()
        if not payload["ok"]:
            raise InvariantFailure(payload_json(payload))
        return payload
    raise UsageError(f"unknown command {cmd}")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = dispatch(args)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvariantFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, TableCountError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stdout.write(_csv(payload) if args.format == "csv" else payload_json(payload) + "\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
