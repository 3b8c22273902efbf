"""Command-line front end: ``tidyscale {scale,tidy,decompose,verify,entropy}``.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 computation error,
4 formula not applicable.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from . import finite as fin
from . import shift as sh
from . import theorems as th
from .core import DEFAULT_L_MAX, GroupInstance, NotApplicable, TidyError, displacement_index
from .padic import backend as pb
from .padic.arith import rational_row_basis
from .padic.subspace import PrecisionError

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_PARSE = 2
EXIT_COMPUTE = 3
EXIT_NOT_APPLICABLE = 4


class ParseError(Exception):
    pass


# -- schemas ------------------------------------------------------------------


def load_schema(name: str) -> dict:
    """``instance`` or ``report``."""
    text = resources.files("tidyscale").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(report: dict) -> None:
    jsonschema.validate(report, load_schema("report"))


# -- instance files -------------------------------------------------------------


@dataclass
class LoadedInstance:
    inst: GroupInstance
    H: Any = None
    U: Any = None
    H_payload: Any = None


def _rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"rationals must be integers or fraction strings, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {x!r}: {e}") from None


def _rows(rows) -> list[list[Fraction]]:
    return [[_rational(x) for x in r] for r in rows]


def _finite_subgroup(G: fin.FiniteGroup, payload) -> int:
    try:
        mask = fin.parse_mask(G, list(payload["elements"]))
    except ValueError as e:
        raise ParseError(str(e)) from None
    if mask >> G.order or not G.is_subgroup(mask):
        raise ParseError(f"elements {payload['elements']} do not form a subgroup")
    return mask


def _finite_map(G: fin.FiniteGroup, images) -> list[int]:
    idx = {l: i for i, l in enumerate(G.labels)}

    def one(x):
        if isinstance(x, int):
            if not 0 <= x < G.order:
                raise ParseError(f"element index {x} out of range")
            return x
        if str(x) not in idx:
            raise ParseError(f"unknown element {x!r}")
        return idx[str(x)]

    if isinstance(images, dict):
        missing = [l for l in G.labels if l not in images]
        if missing:
            raise ParseError(f"no image given for {missing}")
        return [one(images[l]) for l in G.labels]
    if len(images) != G.order:
        raise ParseError(f"need {G.order} images, got {len(images)}")
    return [one(x) for x in images]


def _load_finite(doc: dict) -> LoadedInstance:
    try:
        G = fin.build_group(doc["group"])
    except ValueError as e:
        raise ParseError(f"group: {e}") from None
    alpha = _finite_map(G, doc["endomorphism"]["images"])
    if not fin.is_endomorphism(G, alpha):
        raise ParseError("the given map is not an endomorphism")
    inst = fin.FiniteInstance(G, alpha, doc.get("name", ""))
    subs = doc.get("subgroups", {})
    H = _finite_subgroup(G, subs["H"]) if "H" in subs else None
    U = _finite_subgroup(G, subs["U"]) if "U" in subs else None
    return LoadedInstance(inst, H, U, subs.get("H"))


def _load_padic(doc: dict, precision: int | None) -> LoadedInstance:
    p = doc["group"]["prime"]
    A = _rows(doc["endomorphism"]["matrix"])
    n = len(A)
    if any(len(r) != n for r in A):
        raise ParseError("matrix must be square")
    if doc["group"].get("dim", n) != n:
        raise ParseError(f"dim {doc['group']['dim']} does not match a {n}x{n} matrix")
    try:
        inst = pb.PadicInstance(p, A, doc.get("name", ""), precision=precision)
    except ValueError as e:
        raise ParseError(str(e)) from None
    subs = doc.get("subgroups", {})
    H = U = None
    if "H" in subs:
        rows = _rows(subs["H"]["span"])
        if any(len(r) != n for r in rows):
            raise ParseError("H span vectors have the wrong length")
        H = tuple(tuple(r) for r in rational_row_basis(rows))
    if "U" in subs:
        rows = _rows(subs["U"]["lattice"])
        if any(len(r) != n for r in rows):
            raise ParseError("U lattice vectors have the wrong length")
        U = inst.lattice(rows)
        if not U.is_open:
            raise ParseError("U must be a full-rank lattice (compact open)")
    return LoadedInstance(inst, H, U, subs.get("H"))


def _load_shift(doc: dict) -> LoadedInstance:
    try:
        F = fin.build_group(doc["group"]["structure_group"])
    except ValueError as e:
        raise ParseError(f"structure group: {e}") from None
    inst = sh.ShiftInstance(F, doc["group"]["index_set"])
    subs = doc.get("subgroups", {})
    U = None
    if "U" in subs:
        try:
            U = sh.parse_windowed(inst, subs["U"])
        except (ValueError, KeyError, TidyError) as e:
            raise ParseError(f"U: {e}") from None
    return LoadedInstance(inst, subs.get("H"), U, subs.get("H"))


def load_instance(doc: dict, precision: int | None = None) -> LoadedInstance:
    """Validate an instance document against the schema and build it."""
    try:
        jsonschema.validate(doc, load_schema("instance"))
    except jsonschema.ValidationError as e:
        where = "/".join(map(str, e.absolute_path)) or "<root>"
        raise ParseError(f"schema violation at {where}: {e.message}") from None
    backend = doc["backend"]
    if backend == "finite":
        return _load_finite(doc)
    if backend == "padic":
        return _load_padic(doc, precision)
    return _load_shift(doc)


def read_instance(path: str, precision: int | None = None) -> LoadedInstance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from None
    return load_instance(doc, precision)


# -- symbolic logarithms --------------------------------------------------------


def _factor(s: int) -> list[tuple[int, int]]:
    out = []
    q = 2
    while q * q <= s:
        k = 0
        while s % q == 0:
            s //= q
            k += 1
        if k:
            out.append((q, k))
        q += 1
    if s > 1:
        out.append((s, 1))
    return out


def log_expr(s: int) -> str:
    """ln s as an exact sum over prime factors: 25 -> '2·ln 5', 1 -> '0'."""
    if s < 1:
        raise ValueError("scale must be positive")
    terms = [f"ln {q}" if k == 1 else f"{k}·ln {q}" for q, k in _factor(s)]
    return " + ".join(terms) or "0"


def sum_expr(*ss: int) -> str:
    """ln a + ln b written termwise with repeated primes expanded."""
    parts = []
    for s in ss:
        parts.append(" + ".join(f"ln {q}" for q, k in _factor(s) for _ in range(k)) or "0")
    return " + ".join(parts)


# -- commands -------------------------------------------------------------------


def _sub(inst: GroupInstance, U) -> Any:
    return inst.describe_subgroup(U)


def cmd_scale(li: LoadedInstance, l_max: int = DEFAULT_L_MAX) -> tuple[int, dict]:
    inst = li.inst
    res = inst.scale_result(l_max=l_max)
    return EXIT_OK, {
        "command": "scale",
        "status": "ok",
        "instance": inst.describe(),
        "scale": res.value,
        "method": res.method,
        "certificate": {"subgroup": _sub(inst, res.subgroup), "displacement": res.displacement},
        "details": {k: v for k, v in res.details},
    }


def cmd_tidy(li: LoadedInstance, l_max: int = DEFAULT_L_MAX) -> tuple[int, dict]:
    inst = li.inst
    s = inst.scale_result(l_max=l_max).value
    if li.U is None:
        if isinstance(inst, pb.PadicInstance):
            W = pb.adapted_tidy_lattice(inst).lattice
            route = "adapted lattice from the slope blocks"
        else:
            W = inst.tidying_procedure(inst.whole(), l_max=l_max)
            route = "tidying procedure from the whole group"
    else:
        W = inst.tidying_procedure(li.U, l_max=l_max)
        route = "tidying procedure from U"
    d = displacement_index(inst, W)
    if d != s:
        raise TidyError(f"tidy candidate has displacement {d}, scale is {s}")
    return EXIT_OK, {
        "command": "tidy",
        "status": "ok",
        "instance": inst.describe(),
        "input": None if li.U is None else _sub(inst, li.U),
        "input_displacement": None if li.U is None else displacement_index(inst, li.U),
        "tidy_subgroup": _sub(inst, W),
        "displacement": d,
        "scale": s,
        "route": route,
    }


def _descriptor_json(inst: GroupInstance, d) -> dict:
    out = {"status": d.status, "kind": d.kind, "closed": d.closed, "note": d.note}
    if d.payload is None:
        return out
    if d.kind == "elements":
        out["payload"] = inst.describe_subgroup(d.payload)
    elif d.kind == "symbolic":
        out["payload"] = {"tag": d.payload}
    else:
        out["payload"] = d.payload
    return out


def cmd_decompose(li: LoadedInstance) -> tuple[int, dict]:
    inst = li.inst
    dec = inst.decompose()
    return EXIT_OK, {
        "command": "decompose",
        "status": "ok",
        "instance": inst.describe(),
        "decomposition": {name: _descriptor_json(inst, d) for name, d in dec.items()},
    }


def _verify_payload(reports, seed, n_instances) -> tuple[int, dict]:
    failures = sum(1 for r in reports if r.status == th.FAIL)
    return (EXIT_FAILURES if failures else EXIT_OK), {
        "command": "verify",
        "status": "failures" if failures else "ok",
        "seed": seed,
        "instances": n_instances,
        "failures": failures,
        "summary": th.summarize(reports),
        "reports": [r.to_json() for r in reports],
    }


def cmd_verify(li: LoadedInstance | None, tags=th.TAGS, seed: int = 0, jobs: int = 1) -> tuple[int, dict]:
    tags = tuple(t for t in th.TAGS if t in set(tags))
    if li is None:
        instances = th.generate_instances(seed)
        return _verify_payload(th.run_suite(instances, tags, jobs), seed, len(instances))
    inst = li.inst
    if li.H is None:
        reports = th.run_suite([inst], tags, 1)
    else:
        reports = [r for t in tags for r in th.check_theorem(t, inst, li.H)]
        reports.sort(key=th._order)
    return _verify_payload(reports, None, 1)


def _scale_value(inst: GroupInstance, l_max: int) -> int:
    return inst.scale_result(l_max=l_max).value


def _entropy_parts(li: LoadedInstance, l_max: int) -> tuple[int, int]:
    inst = li.inst
    if isinstance(inst, fin.FiniteInstance):
        H = li.H
        if inst.image(H) & ~H or not inst.G.is_normal(H):
            raise NotApplicable("H must be a normal α-invariant subgroup")
        return _scale_value(fin.restrict(inst, H), l_max), _scale_value(fin.quotient(inst, H), l_max)
    if isinstance(inst, pb.PadicInstance):
        if not pb.is_invariant_subspace(inst.A, li.H):
            raise NotApplicable("H must be an α-invariant subspace")
        sp = pb.split_by_subspace(inst.A, li.H)
        return (
            _scale_value(pb.PadicInstance(inst.p, sp.A_H), l_max),
            _scale_value(pb.PadicInstance(inst.p, sp.A_Q), l_max),
        )
    raise NotApplicable("no restriction rule for this backend")


def cmd_entropy(li: LoadedInstance, l_max: int = DEFAULT_L_MAX) -> tuple[int, dict]:
    inst = li.inst
    con = inst.decompose().con
    s = _scale_value(inst, l_max)
    if not con.computed or not con.closed:
        out = {
            "command": "entropy",
            "status": "not-applicable",
            "instance": inst.describe(),
            "scale": s,
            "h": None,
            "reason": "con(α) not closed" if con.computed else "con(α) not computed",
        }
        if isinstance(inst, sh.ShiftInstance):
            # reported separately so it cannot be mistaken for ln s
            out["h_top"] = f"ln {sh.topological_entropy_exponent(inst)}"
        return EXIT_NOT_APPLICABLE, out
    out = {"command": "entropy", "status": "ok", "instance": inst.describe(), "scale": s, "h": log_expr(s)}
    if li.H is not None:
        sH, sQ = _entropy_parts(li, l_max)
        out["addition"] = {
            "scale_H": sH,
            "scale_quotient": sQ,
            "h_H": log_expr(sH),
            "h_quotient": log_expr(sQ),
            "sum": sum_expr(sH, sQ),
            "holds": sH * sQ == s,
        }
    return EXIT_OK, out


# -- output ---------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(y) for y in x), key=repr)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(report, sort_keys=True, separators=(",", ":"), default=_jsonable, ensure_ascii=False)
    return json.dumps(report, sort_keys=True, indent=2, default=_jsonable, ensure_ascii=False)


def _fmt_sub(x) -> str:
    if isinstance(x, dict):
        if "elements" in x:
            return "{" + ", ".join(x["elements"]) + "}"
        if "lattice_basis" in x:
            return "span_Zp" + json.dumps(x["lattice_basis"])
        if "window" in x:
            if x["window"] is None:
                return "G"
            a, b = x["window"]
            return f"{{x : (x_{a}..x_{b}) in {json.dumps(x['constraint'])}}}"
    return json.dumps(x, default=_jsonable)


def render_text(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if "instance" in report:
        lines.append(f"instance: {json.dumps(report['instance'], sort_keys=True)}")
    if cmd == "scale":
        lines.append(f"s = {report['scale']}, method = {report['method']}")
        cert = report["certificate"]
        lines.append(f"certificate: {_fmt_sub(cert['subgroup'])} with displacement {cert['displacement']}")
    elif cmd == "tidy":
        if report["input"] is not None:
            lines.append(f"input U = {_fmt_sub(report['input'])}, displacement {report['input_displacement']}")
        lines.append(f"tidy subgroup: {_fmt_sub(report['tidy_subgroup'])}")
        lines.append(f"displacement = {report['displacement']} = s ({report['route']})")
    elif cmd == "decompose":
        for name, d in report["decomposition"].items():
            state = d["status"]
            if d["status"] == "computed":
                state = f"{d['kind']}" + ("" if d["closed"] is None else (", closed" if d["closed"] else ", not closed"))
            body = ""
            pl = d.get("payload")
            if isinstance(pl, dict) and "basis" in pl:
                body = f" basis {json.dumps(pl['basis'])}"
            elif isinstance(pl, dict) and "elements" in pl:
                body = " {" + ", ".join(pl["elements"]) + "}"
            elif isinstance(pl, dict) and "tag" in pl:
                body = f" {pl['tag']}"
            note = f"  ({d['note']})" if d["note"] else ""
            lines.append(f"  {name:<10} {state}{body}{note}")
    elif cmd == "verify":
        lines.append(f"{'theorem':<18}{'pass':>8}{'fail':>8}{'skipped':>9}")
        for tag, row in report["summary"].items():
            lines.append(f"{tag:<18}{row['pass']:>8}{row['fail']:>8}{row['skipped']:>9}")
        fails = [r for r in report["reports"] if r["status"] == "fail"]
        for r in fails[:20]:
            lines.append(f"FAIL {r['theorem']} {r['instance']} H={json.dumps(r['subgroup'], default=_jsonable)}")
            lines.append(f"     counterexample: {json.dumps(r['counterexample'], default=_jsonable)}")
        if len(fails) > 20:
            lines.append(f"... {len(fails) - 20} more failures")
        lines.append(f"{len(report['reports'])} checks, {report['failures']} failures")
    elif cmd == "entropy":
        s = report["scale"]
        if report["status"] == "not-applicable":
            lines.append(f"s = {s}; h = ln s not applicable: {report['reason']}")
            if "h_top" in report:
                lines.append(f"(topological entropy of the shift is {report['h_top']}, which is not ln s)")
        else:
            h = report["h"]
            lines.append(f"s = {s}, h = {h}" if s == 1 or h == f"ln {s}" else f"s = {s}, h = ln {s} = {h}")
            add = report.get("addition")
            if add:
                lines.append(
                    f"s_H = {add['scale_H']}, s_G/H = {add['scale_quotient']}: "
                    f"h = {h} = {add['sum']}" + ("" if add["holds"] else "  (ADDITION FAILS)")
                )
    return "\n".join(lines)


# -- argument handling ------------------------------------------------------------


def _tags(arg: str | None) -> tuple[str, ...]:
    if not arg:
        return th.TAGS
    tags = tuple(t.strip() for t in arg.split(",") if t.strip())
    bad = [t for t in tags if t not in th.TAGS]
    if bad:
        raise ParseError(f"unknown theorem tag(s) {bad}; known: {', '.join(th.TAGS)}")
    return tags


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--l-max", type=int, default=DEFAULT_L_MAX, help="stage budget for tidy-above searches")
    common.add_argument("--precision", type=int, default=None, help="starting p-adic precision N0")
    ap = argparse.ArgumentParser(prog="tidyscale", description="Scale functions and tidy subgroups of endomorphisms.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, hlp in (
        ("scale", "scale s(α) with a tidy certificate"),
        ("tidy", "tidy subgroup, optionally from the file's U"),
        ("decompose", "con, con⁻, par, par⁻, lev, nub, bik and the big cell"),
        ("entropy", "h = ln s when con(α) is closed; addition over the file's H"),
    ):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("file")
    v = sub.add_parser("verify", parents=[common], help="run theorem checks on a file or the generated corpus")
    v.add_argument("file", nargs="?")
    v.add_argument("--all", action="store_true", help="check every generated instance")
    v.add_argument("--theorem", default=None, help="comma-separated theorem tags")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    return ap


def execute(args: argparse.Namespace) -> tuple[int, dict | None, str | None]:
    """Run a parsed command and return (exit code, report, diagnostic)."""
    try:
        if args.command == "verify":
            tags = _tags(args.theorem)
            if args.all == (args.file is not None):
                raise ParseError("verify needs exactly one of FILE or --all")
            li = None if args.all else read_instance(args.file, args.precision)
            code, rep = cmd_verify(li, tags, args.seed, max(1, args.jobs))
        else:
            li = read_instance(args.file, args.precision)
            if args.command == "scale":
                code, rep = cmd_scale(li, args.l_max)
            elif args.command == "tidy":
                code, rep = cmd_tidy(li, args.l_max)
            elif args.command == "decompose":
                code, rep = cmd_decompose(li)
            else:
                code, rep = cmd_entropy(li, args.l_max)
    except ParseError as e:
        return EXIT_PARSE, None, f"parse error: {e}"
    except NotApplicable as e:
        return EXIT_NOT_APPLICABLE, None, f"not applicable: {e}"
    except (TidyError, PrecisionError) as e:
        return EXIT_COMPUTE, None, f"computation error: {e}"
    diag = f"not applicable: {rep['reason']}" if code == EXIT_NOT_APPLICABLE else None
    return code, rep, diag


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code, rep, diag = execute(args)
    if rep is not None:
        if args.json:
            sys.stdout.write(dumps(rep, compact=rep["command"] == "verify") + "\n")
        else:
            sys.stdout.write(render_text(rep) + "\n")
    if diag:
        print(diag, file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
