"""Command-line front end.

Reports go to stdout as JSON (or flat text), diagnostics to stderr.  Index
sets in reports and on the command line are 1-based.

Exit codes: 0 success, 2 input error, 3 cross-check mismatch, 4 not a frame,
5 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from itertools import combinations

import numpy as np

from . import frame as fr
from . import lengths as ln
from . import robustness as rb
from . import surgery as sg
from .errors import ContractError, DimensionError, NotAFrameError, ResourceLimitError
from .numerics import Tolerance, hermitian_eigenvalues, orthogonal_complement_basis, rank

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_NOT_FRAME, EXIT_CAP = 0, 2, 3, 4, 5
SIG_DIGITS = 12


class InputError(Exception):
    pass


class MismatchError(Exception):
    pass


def load_frame_file(path):
    """Parse a frame JSON document; returns (Frame, raw bytes)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        doc = json.loads(raw.decode("utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read frame file {path}: {exc}") from exc
    return parse_frame_doc(doc), raw


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def parse_frame_doc(doc) -> fr.Frame:
    if not isinstance(doc, dict):
        raise InputError("frame file must be a JSON object")
    field = doc.get("field")
    dim = doc.get("dim")
    rows = doc.get("vectors")
    if field not in fr.FIELDS:
        raise InputError(f"'field' must be 'real' or 'complex', got {field!r}")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"'dim' must be a positive integer, got {dim!r}")
    if not isinstance(rows, list) or not rows:
        raise InputError("'vectors' must be a nonempty list")
    out = []
    for i, row in enumerate(rows, 1):
        if not isinstance(row, list) or len(row) != dim:
            raise InputError(f"vector {i} must have {dim} entries")
        if field == "real":
            if not all(_is_number(x) for x in row):
                raise InputError(f"vector {i} has non-numeric entries")
            out.append([float(x) for x in row])
        else:
            if not all(isinstance(x, list) and len(x) == 2 and all(_is_number(t) for t in x) for x in row):
                raise InputError(f"vector {i}: complex entries must be [re, im] pairs")
            out.append([complex(x[0], x[1]) for x in row])
    return fr.Frame(np.array(out), field)


def _clean(obj):
    """Convert to JSON-ready values with floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        v = float(f"{float(obj):.{SIG_DIGITS}g}")
        return 0.0 if v == 0 else v
    return obj


def _snap(values, tol):
    """Zero out entries that are roundoff relative to the largest one."""
    v = np.array(values)
    scale = np.abs(v).max() if v.size else 0.0
    v[np.abs(v) <= tol.threshold(scale * max(v.size, 1))] = 0
    return v


def _one_based(indices):
    return [int(i) + 1 for i in indices]


def _vector_out(v, field):
    v = np.asarray(v)
    if field == "real":
        return np.real(v)
    return [complex(x) for x in v]


def cmd_analyze(F, args, tol, warnings):
    S = fr.frame_operator(F)
    G = fr.gramian(F)
    res = {
        "field": F.field,
        "n": F.n,
        "k": F.k,
        "is_frame": fr.is_frame(F, tol),
        "rank": rank(F.vectors, tol),
        "unit_norm": fr.is_unit_norm(F, tol),
        "frame_operator_spectrum": _snap(hermitian_eigenvalues(S, tol), tol),
        "gramian_spectrum": _snap(hermitian_eigenvalues(G, tol), tol),
    }
    try:
        rep = fr.tightness_report(F, tol)
        res["tightness"] = {"is_tight": rep.is_tight, "lambda": rep.lam, "conditions": rep.per_condition}
        if not rep.consistent:
            warnings.append("tightness conditions disagree; inputs are near the tolerance boundary")
    except ContractError as exc:
        res["tightness"] = {"is_tight": False, "lambda": None, "conditions": {}}
        warnings.append(f"tightness not evaluated: {exc}")
    return res


def cmd_robustness(F, args, tol, warnings):
    cap = args.cap or rb.DEFAULT_ENUM_CAP
    methods = ("brute", "nonspanning", "supports") if args.method == "all" else (args.method,)
    values = {}
    rob_ns, i0 = rb.rob_max_nonspanning(F, tol)
    for m in methods:
        if m == "brute":
            values[m] = rb.rob_bruteforce(F, tol, cap)
        elif m == "nonspanning":
            values[m] = rob_ns
        else:
            if F.k > cap:
                raise ResourceLimitError(f"support enumeration over k={F.k} exceeds cap {cap}")
            values[m] = rb.rob_supports(F, tol)
    if len(set(values.values())) != 1 or rob_ns not in values.values():
        raise MismatchError(f"robustness methods disagree: {values} (nonspanning search {rob_ns})")
    y = orthogonal_complement_basis(F.vectors[list(i0)], F.n, tol)[0]
    res = {
        "rob": rob_ns,
        "methods": values,
        "max_nonspanning": _one_based(i0),
        "witness_y": _vector_out(_snap(y, tol), F.field),
        "witness_inner_products": _vector_out(_snap(rb.witness_inner_products(F, y), tol), F.field),
        "witness_nonzero_count": int(rb.nonzero_inner_products(F, y, tol).sum()),
    }
    if args.bounds:
        r_minus, r_plus = rb.redundancy_bounds(F, tol)
        count, log2_bound = rb.spanning_subset_count(F, tol, cap)
        lower, upper = rb.rob_bounds(F, tol, cap)
        res["bounds"] = {
            "lower": lower,
            "upper": upper,
            "log2_spanning": log2_bound,
            "k_minus_n": F.k - F.n,
            "spanning_subsets": count,
            "redundancy": [r_minus, r_plus],
        }
        if not lower <= rob_ns <= upper:
            raise MismatchError(f"rob={rob_ns} outside bounds [{lower}, {upper}]")
    return res


def cmd_subframes(F, args, tol, warnings):
    cap = args.cap or sg.DEFAULT_SUBSET_CAP
    found = sg.tight_subframes(F, tol, cap)
    tight = F.k >= F.n and np.any(F.vectors) and fr.check_tight(F, "direct", tol)
    if tight and F.k < 2 * F.n:
        warnings.append(f"a tight frame with k={F.k} < 2n={2 * F.n} has no tight subframes")
    return {
        "is_tight": bool(tight),
        "count": len(found),
        "subframes": [{"indices": _one_based(idx), "lambda": lam} for idx, lam in found.subframes],
    }


def _parse_indices(text, k):
    try:
        idx = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad index list {text!r}") from exc
    if len(set(idx)) != len(idx) or any(i < 1 or i > k for i in idx):
        raise InputError(f"indices must be distinct and within 1..{k}")
    return sorted(i - 1 for i in idx)


def cmd_surgery(F, args, tol, warnings):
    cap = args.cap or sg.DEFAULT_SUBSET_CAP
    p, q = args.p, args.q
    if p < 0 or q < 0 or p >= F.k:
        raise InputError(f"need 0 <= p < k={F.k} and q >= 0")
    removed = None
    if args.removed is not None:
        removed = _parse_indices(args.removed, F.k)
        if len(removed) != p:
            raise InputError(f"--removed lists {len(removed)} indices but p={p}")
    ok, wit = sg.pq_surgery_feasible_unrestricted(F, p, q, tol, cap, nonzero=args.nonzero)
    res = {"p": p, "q": q, "unrestricted": {"feasible": ok}}
    if ok:
        res["unrestricted"].update(
            removed=_one_based(wit.removed),
            added=[_vector_out(g, F.field) for g in wit.added],
            **{"lambda": wit.lam},
        )
    if args.unit_norm:
        sets = [removed] if removed is not None else [list(c) for c in combinations(range(F.k), p)]
        if len(sets) > 1 and F.k > cap:
            raise ResourceLimitError(f"removal sets over k={F.k} exceed cap {cap}")
        res["unit_norm"] = {
            "necessary": [
                {"removed": _one_based(s), "passes": sg.pq_surgery_necessary(F, s, q, tol)} for s in sets
            ]
        }
        if args.search:
            status, uw = sg.unit_norm_surgery_search(F, p, q, seed=args.seed, tol=tol, cap=cap)
            entry = {"status": status}
            if uw is not None:
                entry.update(removed=_one_based(uw.removed), added=[_vector_out(g, F.field) for g in uw.added])
            res["unit_norm"]["search"] = entry
    return res


def _parse_lengths(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad length list {text!r}") from exc
    if not vals or any(not math.isfinite(v) or v <= 0 for v in vals):
        raise InputError("lengths must be positive numbers")
    return vals


def cmd_lengths(args, tol, warnings):
    if args.n < 1:
        raise InputError("--n must be at least 1")
    vals = _parse_lengths(args.lengths)
    res = {"n": args.n, "lengths": vals, "action": args.action}
    if args.action == "check":
        res["tight_frame_set"] = ln.tight_frame_set_check(vals, args.n, tol)
    elif args.action == "replace-one":
        lo, hi = ln.replace_one_interval(vals, args.n)
        res["b_squared"] = [lo, hi]
        res["b"] = [math.sqrt(lo), math.sqrt(hi)]
    else:
        if args.p < 0 or args.q < 0 or args.p > len(vals):
            raise InputError(f"need 0 <= p <= {len(vals)} and q >= 0")
        ok, kept = ln.length_surgery_feasible(vals, args.n, args.p, args.q, tol)
        res.update(p=args.p, q=args.q, feasible=ok, kept=_one_based(kept) if ok else None)
    return res


FRAME_COMMANDS = {
    "analyze": cmd_analyze,
    "robustness": cmd_robustness,
    "subframes": cmd_subframes,
    "surgery": cmd_surgery,
}


def _common_options(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol-rel", type=float, default=d(None), help="relative tolerance (default 1e-10)")
    parser.add_argument("--tol-abs", type=float, default=d(None), help="absolute floor (default 1e-12)")
    parser.add_argument("--cap", type=int, default=d(None), help="enumeration cap on k")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized searches")
    parser.add_argument("--format", choices=("json", "text"), default=d("json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framekit", description="Analyze finite frames.")
    _common_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="operators, spectra and tightness")
    p.add_argument("path")

    p = sub.add_parser("robustness", parents=[common], help="maximum robustness to erasures")
    p.add_argument("path")
    p.add_argument("--method", choices=("brute", "nonspanning", "supports", "all"), default="all")
    p.add_argument("--bounds", action="store_true", help="also report the redundancy/log2 bounds")

    p = sub.add_parser("subframes", parents=[common], help="enumerate tight subframes")
    p.add_argument("path")

    p = sub.add_parser("surgery", parents=[common], help="(p, q)-surgery feasibility")
    p.add_argument("path")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--unit-norm", action="store_true")
    p.add_argument("--removed", help="comma-separated 1-based indices to remove")
    p.add_argument("--nonzero", action="store_true", help="added vectors must be nonzero")
    p.add_argument("--search", action="store_true", help="randomized unit-norm witness search")

    p = sub.add_parser("lengths", parents=[common], help="length-surgery questions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lengths", required=True, help="comma-separated positive lengths")
    acts = p.add_subparsers(dest="action", required=True)
    acts.add_parser("check", parents=[common])
    acts.add_parser("replace-one", parents=[common])
    s = acts.add_parser("surgery", parents=[common])
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    return parser


def _tolerance(args) -> Tolerance:
    rel = args.tol_rel if args.tol_rel is not None else os.environ.get("FRAMEKIT_TOL_REL")
    ab = args.tol_abs if args.tol_abs is not None else os.environ.get("FRAMEKIT_TOL_ABS")
    try:
        return Tolerance(
            rel_eps=float(rel) if rel is not None else Tolerance.rel_eps,
            abs_floor=float(ab) if ab is not None else Tolerance.abs_floor,
        )
    except ValueError as exc:
        raise InputError(f"bad tolerance: {exc}") from exc


def _text(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _text(v, f"{prefix}{k}.")
    else:
        yield f"{prefix[:-1]}: {json.dumps(obj)}"


def render(report, fmt) -> str:
    if fmt == "text":
        return "\n".join(_text(report)) + "\n"
    return json.dumps(report, indent=2) + "\n"


def run(argv=None):
    """Parse arguments and execute; returns (exit code, stdout text)."""
    args = build_parser().parse_args(argv)
    warnings = []
    try:
        tol = _tolerance(args)
        if args.command == "lengths":
            digest_src = f"lengths|n={args.n}|lengths={args.lengths}|action={args.action}"
            if args.action == "surgery":
                digest_src += f"|p={args.p}|q={args.q}"
            digest = hashlib.sha256(digest_src.encode()).hexdigest()
            results = cmd_lengths(args, tol, warnings)
        else:
            F, raw = load_frame_file(args.path)
            digest = hashlib.sha256(raw).hexdigest()
            results = FRAME_COMMANDS[args.command](F, args, tol, warnings)
    except InputError as exc:
        return EXIT_INPUT, str(exc)
    except NotAFrameError as exc:
        return EXIT_NOT_FRAME, str(exc)
    except (ContractError, DimensionError) as exc:
        return EXIT_INPUT, str(exc)
    except ResourceLimitError as exc:
        return EXIT_CAP, str(exc)
    except MismatchError as exc:
        return EXIT_MISMATCH, str(exc)
    report = {
        "command": args.command,
        "inputs_digest": digest,
        "results": results,
        "tolerances": {"rel_eps": tol.rel_eps, "abs_floor": tol.abs_floor},
        "warnings": warnings,
    }
    return EXIT_OK, render(_clean(report), args.format)


def main(argv=None) -> int:
    code, out = run(argv)
    if code == EXIT_OK:
        sys.stdout.write(out)
    else:
        print(f"framekit: error: {out}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
