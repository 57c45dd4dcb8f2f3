"""Command-line front end: products, canonical bases, relation checks, corpus.

Exit codes: 0 success, 2 domain error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from .canonical import CanonicalError, canonical_basis
from .iqg import IqgError, check_all
from .matrices import CodedMatrix, MatrixError, enumerate_banded
from .ring import RingError, WeightFunction
from .schur import SchurElement, SchurError, mul_formula, mul_oracle, to_standard
from .special_forms import (
    mul_chevalley,
    mul_one_param_xy_form,
    mul_type_d,
)
from .stab import StabError, stab_canonical, stab_mul, stab_mul_symbolic, variant_filter
from .weyl import WeylElement, WeylError


class UsageError(Exception):
    pass


def corpus_dir() -> str:
    return os.environ.get("CSCHUR_CORPUS_DIR", os.path.join(os.getcwd(), "corpus"))


def _matrix_arg(text: str) -> CodedMatrix:
    try:
        return CodedMatrix.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(
            f"matrix must be JSON like "
            f'{{"r":1,"kind":"xi","entries":[[0,0,1],[2,2,3]]}}: {exc}'
        )


def _emit(payload, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    elif fmt == "latex":
        print(_latexify(payload))
    else:
        print(_textify(payload))


def _scalar_latex(data) -> str:
    bits = []
    for e0, e1, e, c in data:
        mono = []
        for sym, ex in (("q_0", e0), ("q_1", e1), ("q", e)):
            if ex == 0:
                continue
            if ex == 2:
                mono.append(sym)
            elif ex % 2 == 0:
                mono.append(f"{sym}^{{{ex // 2}}}")
            else:
                mono.append(f"{sym}^{{{ex}/2}}")
        coeff = "" if (c == 1 and mono) else str(c)
        bits.append(coeff + " ".join(mono))
    return " + ".join(bits) if bits else "0"


def _latexify(payload) -> str:
    if isinstance(payload, dict) and "terms" in payload:
        name = "e" if payload.get("basis") == "e" else ""
        bits = []
        for term in payload["terms"]:
            entries = term["matrix"]["entries"]
            mat = ",".join(f"a_{{{i},{j}}}={v}" for i, j, v in entries)
            scal = _scalar_latex(term["scalar"])
            if name:
                bits.append(f"({scal})\\, e_{{[{mat}]}}")
            else:
                bits.append(f"({scal})\\, [{mat}]")
        return " + ".join(bits) if bits else "0"
    return json.dumps(payload)


def _textify(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=1)


def cmd_weyl_length(args) -> int:
    word = [int(x) for x in args.word.split(",") if x != ""] if args.word else []
    g = WeylElement.from_word(args.d, word)
    ell, l0, ld, la = g.lengths()
    _emit({"lengths": [ell, l0, ld, la], "window": list(g.window)}, args.format)
    return 0


def cmd_schur_mul(args) -> int:
    b = _matrix_arg(args.left)
    a = _matrix_arg(args.right)
    engines = {
        "oracle": mul_oracle,
        "formula": mul_formula,
        "chevalley": mul_chevalley,
        "fl19": mul_one_param_xy_form,
        "typeD": mul_type_d,
    }
    out = engines[args.method](b, a)
    if args.basis == "standard":
        from .schur import standard_monomial

        out = to_standard(out.scale(standard_monomial(b) * standard_monomial(a)))
    if args.diff:
        other = engines[args.diff](b, a)
        if args.basis == "standard":
            from .schur import standard_monomial

            other = to_standard(other.scale(standard_monomial(b) * standard_monomial(a)))
        same = out == other
        _emit({"methods": [args.method, args.diff], "identical": same}, args.format)
        return 0 if same else 2
    _emit(out.to_json(), args.format)
    return 0


def cmd_canonical(args) -> int:
    L = WeightFunction(args.L0, args.L1, args.Ld)
    a = _matrix_arg(args.matrix)
    out = canonical_basis(a, L)
    _emit(out.to_json(), args.format)
    return 0


def cmd_stab_mul(args) -> int:
    b = _matrix_arg(args.left)
    a = _matrix_arg(args.right)
    variant = {"jj": "jj", "ji": "ji", "ij": "ij", "ii": "ii"}[args.variant]
    if args.pi == "symbolic":
        sym = stab_mul_symbolic(b, a, variant)
        payload = {
            "terms": [
                {"matrix": k.to_json(), "coefficient": c.to_json()}
                for k, c in sorted(sym.items(), key=lambda kv: kv[0]._key)
            ]
        }
        _emit(payload, args.format)
        return 0
    out = stab_mul(b, a, variant)
    if args.variant != "jj":
        variant_filter(out, variant)
    _emit(out.to_json(), args.format)
    return 0


def cmd_stab_canonical(args) -> int:
    L = WeightFunction(args.L0, args.L1, args.Ld)
    a = _matrix_arg(args.matrix)
    out = stab_canonical(a, L, p_budget=args.p_budget, variant=args.variant)
    payload = {
        "terms": [
            {"matrix": k.to_json(), "scalar": v.to_json()}
            for k, v in sorted(out.items(), key=lambda kv: kv[0]._key)
        ]
    }
    _emit(payload, args.format)
    return 0


def cmd_iqg_check(args) -> int:
    rep = check_all(args.type, args.r, args.window)
    ok = rep.get("ok", False)
    summary = {
        "kind": rep["kind"],
        "r": rep["r"],
        "relations": rep["relations"],
        "weights": rep["weights"],
        "checked": rep["checked"],
        "ok": ok,
        "failures": rep["failures"][:20],
    }
    if rep.get("anomaly"):
        summary["anomaly"] = rep["anomaly"]
    if rep.get("warning"):
        summary["warning"] = rep["warning"]
    _emit(summary, args.format)
    if rep.get("warning"):
        print("warning: no weights tested", file=sys.stderr)
    return 0 if ok else 2


def _corpus_payload(r: int, d: int, band: int):
    fam = enumerate_banded(r, d, band)
    tris = [b for b in fam if b.is_tridiagonal()]
    entries = []
    for b in tris:
        for a in fam:
            if b.col_margins() != a.row_margins():
                continue
            prod = mul_oracle(b, a)
            entries.append(
                {"left": b.to_json(), "right": a.to_json(), "product": prod.to_json()}
            )
    return {"r": r, "d": d, "band": band, "products": entries}


def cmd_corpus(args) -> int:
    os.makedirs(corpus_dir(), exist_ok=True)
    name = f"oracle-r{args.r}-d{args.d}-band{args.band}.json"
    path = os.path.join(corpus_dir(), name)
    if args.action == "generate":
        payload = _corpus_payload(args.r, args.d, args.band)
        blob = json.dumps(payload, sort_keys=True)
        digest = hashlib.sha256(blob.encode()).hexdigest()
        with open(path, "w") as fh:
            json.dump({"sha256": digest, "data": payload}, fh, sort_keys=True)
        print(f"wrote {path} ({len(payload['products'])} products, sha256 {digest[:16]}...)")
        if not payload["products"]:
            print("warning: empty corpus", file=sys.stderr)
        return 0
    with open(path) as fh:
        stored = json.load(fh)
    blob = json.dumps(stored["data"], sort_keys=True)
    digest = hashlib.sha256(blob.encode()).hexdigest()
    if digest != stored["sha256"]:
        print("hash mismatch: corpus file is corrupt", file=sys.stderr)
        return 2
    bad = 0
    for item in stored["data"]["products"]:
        b = CodedMatrix.from_json(item["left"])
        a = CodedMatrix.from_json(item["right"])
        want = SchurElement.from_json(item["product"])
        if mul_formula(b, a) != want:
            bad += 1
            print(
                f"diff: left={item['left']['entries']} right={item['right']['entries']}",
                file=sys.stderr,
            )
    print(f"verified {len(stored['data']['products'])} products, {bad} mismatches")
    return 0 if bad == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="cschur", description=__doc__)
    top.add_argument("--format", choices=["json", "latex", "text"], default="json")
    sub = top.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weyl", help="Weyl group utilities")
    wsub = w.add_subparsers(dest="weyl_command", required=True)
    wl = wsub.add_parser("length", help="length statistics of a word")
    wl.add_argument("--d", type=int, required=True)
    wl.add_argument("--word", default="")
    wl.set_defaults(func=cmd_weyl_length)

    sm = sub.add_parser("schur-mul", help="products in the finite-level algebra")
    sm.add_argument("--method", choices=["oracle", "formula", "chevalley", "fl19", "typeD"], default="formula")
    sm.add_argument("--basis", choices=["e", "standard"], default="e")
    sm.add_argument("--left", required=True)
    sm.add_argument("--right", required=True)
    sm.add_argument("--diff", choices=["oracle", "formula", "chevalley", "fl19", "typeD"])
    sm.set_defaults(func=cmd_schur_mul)

    ca = sub.add_parser("canonical", help="canonical basis element at a weight function")
    ca.add_argument("--r", type=int)
    ca.add_argument("--d", type=int)
    ca.add_argument("--L0", type=int, required=True)
    ca.add_argument("--L1", type=int, required=True)
    ca.add_argument("--Ld", type=int, required=True)
    ca.add_argument("--matrix", required=True)
    ca.set_defaults(func=cmd_canonical)

    st = sub.add_parser("stab-mul", help="products in the stabilized algebra")
    st.add_argument("--left", required=True)
    st.add_argument("--right", required=True)
    st.add_argument("--variant", choices=["jj", "ji", "ij", "ii"], default="jj")
    st.add_argument("--pi", choices=["at_one", "symbolic"], default="at_one")
    st.set_defaults(func=cmd_stab_mul)

    sc = sub.add_parser("stab-canonical", help="stably canonical element")
    sc.add_argument("--L0", type=int, required=True)
    sc.add_argument("--L1", type=int, required=True)
    sc.add_argument("--Ld", type=int, required=True)
    sc.add_argument("--matrix", required=True)
    sc.add_argument("--variant", choices=["jj", "ji", "ij", "ii"], default="jj")
    sc.add_argument("--p-budget", type=int, default=20)
    sc.set_defaults(func=cmd_stab_canonical)

    iq = sub.add_parser("iqg-check", help="verify a modified presentation")
    iq.add_argument("--type", choices=["jj", "ji", "ij", "ii"], required=True)
    iq.add_argument("--r", type=int, required=True)
    iq.add_argument("--window", type=int, required=True)
    iq.set_defaults(func=cmd_iqg_check)

    co = sub.add_parser("corpus", help="golden oracle corpus management")
    co.add_argument("action", choices=["generate", "verify"])
    co.add_argument("--r", type=int, default=1)
    co.add_argument("--d", type=int, default=2)
    co.add_argument("--band", type=int, default=2)
    co.set_defaults(func=cmd_corpus)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (MatrixError, SchurError, WeylError, RingError, IqgError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except CanonicalError as exc:
        msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 3 if "cap" in msg else 2
    except StabError as exc:
        msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 3 if "budget" in msg or "cap" in msg else 2
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
