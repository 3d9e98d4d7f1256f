"""JSON documents and the command line front end.

Problem document::

    {"lattice_rank": 3,
     "rays": [[1,0,0], [0,1,0], [0,0,1]],
     "maximal_cones": [[0,1,2]],
     "charts": [{"binomials": [{"alpha": [2,0,0], "beta": [0,1,1], "gamma": []}],
                 "torus_relations": []}],
     "mode": "hypersurface"}

A chart may also give "slots" (its variable order, default the cone's list)
and "completion" (lattice vectors for the y-variables, default a Smith-form
completion). A missing term is written as null and makes a monomial.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .binomial_charts import (Chart, ChartBinomial, ChartIdeal, EmbeddingState, Monomial,
                              TorusRelation, check_gluing, make_ideal, normalize)
from .blowup_transform import TransformRecord, blow_up_global
from .errors import IncomparableMaxima, NonTermination, ToricResError
from .lattice_fan import RegularCone, RegularFan, is_regular
from .intmat import complete_basis

EXIT_OK, EXIT_INVALID, EXIT_STUCK = 0, 2, 3


class DocumentError(Exception):
    def __init__(self, path: str, kind: str, message: str):
        super().__init__(f"{path}: {kind}: {message}")
        self.path, self.kind, self.message = path, kind, message

    def as_dict(self) -> Dict[str, str]:
        return {"path": self.path, "error": self.kind, "message": self.message}


@dataclass
class ProblemDocument:
    state: EmbeddingState
    mode: str = "hypersurface"


# ---------------------------------------------------------------- parsing

def _int_list(v, path: str, allow_none: bool = False):
    if v is None and allow_none:
        return None
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise DocumentError(path, "InvalidInput", "expected a list of integers")
    return [int(x) for x in v]


def _field(obj: dict, key: str, path: str, default=...):
    if not isinstance(obj, dict):
        raise DocumentError(path, "InvalidInput", "expected an object")
    if key not in obj:
        if default is ...:
            raise DocumentError(f"{path}/{key}", "InvalidInput", "missing field")
        return default
    return obj[key]


def parse_problem(obj: Any) -> ProblemDocument:
    n = _field(obj, "lattice_rank", "")
    if not isinstance(n, int) or n < 0:
        raise DocumentError("/lattice_rank", "InvalidInput", "expected a nonnegative integer")
    rays = _field(obj, "rays", "")
    if not isinstance(rays, list):
        raise DocumentError("/rays", "InvalidInput", "expected a list")
    rays = [_int_list(r, f"/rays/{i}") for i, r in enumerate(rays)]
    cones = _field(obj, "maximal_cones", "")
    if not isinstance(cones, list):
        raise DocumentError("/maximal_cones", "InvalidInput", "expected a list")
    cones = [_int_list(c, f"/maximal_cones/{i}") for i, c in enumerate(cones)]
    try:
        fan = RegularFan(n, tuple(map(tuple, rays)), tuple(RegularCone(tuple(c)) for c in cones))
    except ToricResError as e:
        raise DocumentError("/maximal_cones", type(e).__name__, str(e)) from None
    charts = _field(obj, "charts", "")
    if not isinstance(charts, list) or len(charts) != len(cones):
        raise DocumentError("/charts", "InvalidInput", "need one chart per maximal cone")
    ideals = []
    for k, ch in enumerate(charts):
        base = f"/charts/{k}"
        slots = _int_list(_field(ch, "slots", base, cones[k]), f"{base}/slots")
        if sorted(slots) != sorted(cones[k]) or len(set(slots)) != len(slots):
            raise DocumentError(f"{base}/slots", "InvalidInput", "slots must list the cone's rays")
        comp = _field(ch, "completion", base, None)
        if comp is None:
            comp = complete_basis([list(rays[i]) for i in slots], n) if len(slots) < n or slots else []
        else:
            comp = [_int_list(v, f"{base}/completion/{i}") for i, v in enumerate(comp)]
        chart = Chart(tuple(slots), tuple(map(tuple, comp)))
        basis = chart.basis(fan)
        if len(basis) != n or not is_regular(basis):
            raise DocumentError(f"{base}/completion", "InvalidInput",
                                "slot rays and completion must form a lattice basis")
        r, m = len(slots), n - len(slots)
        items, torus = [], []
        bins = _field(ch, "binomials", base, [])
        if not isinstance(bins, list):
            raise DocumentError(f"{base}/binomials", "InvalidInput", "expected a list")
        for j, b in enumerate(bins):
            p = f"{base}/binomials/{j}"
            a = _int_list(_field(b, "alpha", p), f"{p}/alpha", allow_none=True)
            bb = _int_list(_field(b, "beta", p), f"{p}/beta", allow_none=True)
            g = _int_list(_field(b, "gamma", p, []), f"{p}/gamma")
            for name, v, ln in (("alpha", a, r), ("beta", bb, r), ("gamma", g, m)):
                if v is not None and len(v) != ln:
                    raise DocumentError(f"{p}/{name}", "InvalidInput", f"expected length {ln}")
            try:
                out = normalize(a, bb, g)
            except ToricResError as e:
                raise DocumentError(p, type(e).__name__, str(e)) from None
            if isinstance(out, Monomial):
                raise DocumentError(p, "Monomial", "monomial generator: embedding must be unpointed")
            items.append(out)
        tr = _field(ch, "torus_relations", base, [])
        if not isinstance(tr, list):
            raise DocumentError(f"{base}/torus_relations", "InvalidInput", "expected a list")
        for j, g in enumerate(tr):
            g = _int_list(g, f"{base}/torus_relations/{j}")
            if len(g) != m or not any(g):
                raise DocumentError(f"{base}/torus_relations/{j}", "InvalidInput",
                                    f"expected a nonzero vector of length {m}")
            torus.append(tuple(g))
        ideals.append(make_ideal(items, torus, chart))
    try:
        state = EmbeddingState(fan, tuple(ideals))
    except ToricResError as e:
        raise DocumentError("/charts", type(e).__name__, str(e)) from None
    mode = _field(obj, "mode", "", "hypersurface")
    if mode not in ("hypersurface", "general"):
        raise DocumentError("/mode", "InvalidInput", "mode must be hypersurface or general")
    return ProblemDocument(state, mode)


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno} column {e.colno}", "ParseError", e.msg) from None


# ---------------------------------------------------------------- serialization

def binomial_dict(f) -> Dict[str, Any]:
    if isinstance(f, TorusRelation):
        return {"torus_relation": list(f.gamma)}
    return {"alpha": list(f.alpha), "beta": list(f.beta), "gamma": list(f.gamma)}


def chart_dict(I: ChartIdeal) -> Dict[str, Any]:
    return {
        "slots": list(I.chart.slots),
        "completion": [list(v) for v in I.chart.completion],
        "binomials": [binomial_dict(f) for f in I.binomials],
        "torus_relations": [list(g) for g in I.torus.gammas],
    }


def problem_dict(doc: ProblemDocument) -> Dict[str, Any]:
    st = doc.state
    return {
        "lattice_rank": st.fan.rank,
        "rays": [list(r) for r in st.fan.rays],
        "maximal_cones": [list(c.ray_ids) for c in st.fan.maximal_cones],
        "charts": [chart_dict(I) for I in st.ideals],
        "mode": doc.mode,
    }


def _fmt(obj: Any, ind: int) -> str:
    flat = json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))
    if not isinstance(obj, (dict, list)) or len(flat) + ind <= 88 or \
            (isinstance(obj, list) and all(not isinstance(x, (dict, list)) for x in obj)):
        return flat
    pad = " " * (ind + 2)
    if isinstance(obj, dict):
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_fmt(v, ind + 2)}" for k, v in obj.items())
        return "{\n" + body + "\n" + " " * ind + "}"
    body = ",\n".join(pad + _fmt(v, ind + 2) for v in obj)
    return "[\n" + body + "\n" + " " * ind + "]"


def dumps(obj: Any) -> str:
    """Canonical text: fixed field order, short containers kept on one line."""
    return _fmt(obj, 0) + "\n"


def record_dict(rec: TransformRecord) -> Dict[str, Any]:
    return {
        "parent_chart": rec.parent,
        "chart": rec.chart,
        "chart_index": rec.chart_index,
        "before": binomial_dict(rec.before),
        "total": {"alpha": list(rec.total.alpha), "beta": list(rec.total.beta),
                  "gamma": list(rec.total.gamma)},
        "strict": binomial_dict(rec.strict),
    }


def trace_dict(trace, doc: ProblemDocument, seed: Optional[int] = None) -> Dict[str, Any]:
    from .standard_basis_hs import is_smooth_chart
    final = ProblemDocument(trace.final_state, doc.mode)
    invs = [_inv_json(s.invariant) for s in trace.steps] + [_inv_json(trace.final_invariant)]
    return {
        "mode": trace.mode,
        "experimental": trace.mode == "general",
        "seed": seed,
        "input": problem_dict(doc),
        "steps": [{
            "center": [list(v) for v in s.center_rays],
            "center_ray_ids": list(s.center.ray_ids),
            "invariant_before": invs[j],
            "invariant_after": invs[j + 1],
            "transforms": [record_dict(r) for r in s.transforms],
        } for j, s in enumerate(trace.steps)],
        "final_invariant": list(trace.final_invariant),
        "final": problem_dict(final),
        "smooth": [is_smooth_chart(I) for I in trace.final_state.ideals],
    }


def _inv_json(inv) -> List:
    return [list(x) if isinstance(x, tuple) else x for x in inv]


def replay(trace_obj: Dict[str, Any]) -> Tuple[bool, EmbeddingState]:
    """Apply the recorded centres to the input and compare with the recorded final charts."""
    doc = parse_problem(trace_obj["input"])
    state = doc.state
    for step in trace_obj["steps"]:
        ids = tuple(state.fan.ray_id(v) for v in step["center"])
        state, _ = blow_up_global(state, RegularCone(ids))
    got = problem_dict(ProblemDocument(state, doc.mode))
    return got == trace_obj["final"], state


# ---------------------------------------------------------------- commands

def cmd_validate(doc: ProblemDocument) -> Dict[str, Any]:
    from .binomial_charts import torus_lattice
    from .errors import TorsionError
    ok, bad = check_gluing(doc.state)
    errors = [{"path": f"/charts/{v.cone_a}", "error": "GluingViolation",
               "message": f"charts {v.cone_a} and {v.cone_b} disagree on face {list(v.face)}"}
              for v in bad]
    for k, I in enumerate(doc.state.ideals):
        try:
            torus_lattice(I)
        except TorsionError as e:
            errors.append({"path": f"/charts/{k}", "error": "TorsionError", "message": str(e)})
        if doc.mode == "hypersurface" and len(I.binomials) != 1:
            errors.append({"path": f"/charts/{k}/binomials", "error": "InvalidInput",
                           "message": "hypersurface mode needs exactly one binomial per chart"})
    return {"valid": not errors, "errors": errors, "charts": len(doc.state.ideals)}


def cmd_resolve(doc: ProblemDocument, mode: str, max_steps: int, seed: Optional[int]):
    from .hasse_hypersurface import resolve_hypersurface
    from .marked_monomial_general import resolve_general
    if mode == "hypersurface":
        trace = resolve_hypersurface(doc.state, max_steps=max_steps)
    else:
        trace = resolve_general(doc.state, max_steps=max_steps)
    return trace_dict(trace, ProblemDocument(doc.state, mode), seed)


def cmd_hasse_locus(doc: ProblemDocument) -> Dict[str, Any]:
    from .hasse_hypersurface import global_invariant, hasse_locus_components
    out = []
    for k, I in enumerate(doc.state.ideals):
        f = I.binomials[0]
        comps = hasse_locus_components(f) if f.d >= 2 else []
        out.append({"chart": k, "d": f.d,
                    "components": [{"positions": list(S),
                                    "ray_ids": sorted(I.chart.slots[i] for i in S)} for S in comps]})
    inv = global_invariant(doc.state)
    return {"charts": out,
            "invariant": list(inv.triple.as_tuple()),
            "v_min": [list(c.ray_ids) for c in inv.v_min],
            "w_sigma": [list(c.ray_ids) for c in inv.w_sigma]}


def cmd_standard_basis(doc: ProblemDocument, chart: int) -> Dict[str, Any]:
    from .standard_basis_hs import standard_basis
    sb = standard_basis(doc.state.ideals[chart])
    return {
        "chart": chart,
        "unit": binomial_dict(sb.unit) if sb.unit is not None else None,
        "nonlinear": [binomial_dict(f) for f in sb.nonlinear],
        "linear": [binomial_dict(f) for f in sb.linear],
        "torus_relations": [list(g) for g in sb.torus.gammas],
        "vertices": [list(v) for v in sb.diagram.vertices],
        "t": sb.t, "s": sb.s, "nu": sb.nu,
    }


def cmd_hilbert_samuel(doc: ProblemDocument, chart: int, lmax: int) -> Dict[str, Any]:
    from .standard_basis_hs import hs_at_distinguished
    h = hs_at_distinguished(doc.state.ideals[chart])
    return {"chart": chart, "vertices": [list(v) for v in h.vertices], "nu": h.nu,
            "free_dims": h.free, "on_x": not h.empty, "values": list(h.values(lmax))}


def cmd_fiber_check(doc: ProblemDocument, primes: Sequence[int]) -> Dict[str, Any]:
    from .fibers import fiber_report
    return fiber_report(doc.state, primes)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricres", description="Toric resolution of binomial embeddings.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("resolve")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["hypersurface", "general"], default=None)
    p.add_argument("--trace", default=None, help="write the trace here (default stdout)")
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p = sub.add_parser("validate")
    p.add_argument("--input", required=True)
    p = sub.add_parser("hasse-locus")
    p.add_argument("--input", required=True)
    p = sub.add_parser("standard-basis")
    p.add_argument("--input", required=True)
    p.add_argument("--chart", type=int, default=0)
    p = sub.add_parser("hilbert-samuel")
    p.add_argument("--input", required=True)
    p.add_argument("--chart", type=int, default=0)
    p.add_argument("--lmax", type=int, default=6)
    p = sub.add_parser("fiber-check")
    p.add_argument("--input", required=True)
    p.add_argument("--primes", default="2,3,5")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        doc = parse_problem(load_json(args.input))
        if args.command == "validate":
            rep = cmd_validate(doc)
            out.write(dumps(rep))
            return EXIT_OK if rep["valid"] else EXIT_INVALID
        if args.command == "resolve":
            mode = args.mode or doc.mode
            res = cmd_resolve(doc, mode, args.max_steps, args.seed)
            if args.trace:
                with open(args.trace, "w", encoding="utf-8") as fh:
                    fh.write(dumps(res))
                summary = {"steps": len(res["steps"]), "smooth": all(res["smooth"]),
                           "mode": mode, "experimental": res["experimental"], "trace": args.trace}
                out.write(dumps(summary))
            else:
                out.write(dumps(res))
            return EXIT_OK
        if args.command == "hasse-locus":
            res = cmd_hasse_locus(doc)
        elif args.command == "standard-basis":
            res = cmd_standard_basis(doc, _chart_arg(doc, args.chart))
        elif args.command == "hilbert-samuel":
            res = cmd_hilbert_samuel(doc, _chart_arg(doc, args.chart), args.lmax)
        else:
            primes = [int(p) for p in args.primes.split(",") if p.strip()]
            res = cmd_fiber_check(doc, primes)
            out.write(dumps(res))
            return EXIT_OK if res["ok"] else EXIT_INVALID
        out.write(dumps(res))
        return EXIT_OK
    except DocumentError as e:
        (out if args.command == "validate" else sys.stderr).write(dumps({"valid": False, "errors": [e.as_dict()]}))
        return EXIT_INVALID
    except (IncomparableMaxima, NonTermination) as e:
        sys.stderr.write(dumps({"error": type(e).__name__, "message": str(e)}))
        return EXIT_STUCK
    except ToricResError as e:
        sys.stderr.write(dumps({"error": type(e).__name__, "message": str(e)}))
        return EXIT_INVALID
    except OSError as e:
        sys.stderr.write(dumps({"error": "IOError", "message": str(e)}))
        return EXIT_INVALID


def _chart_arg(doc: ProblemDocument, k: int) -> int:
    if not 0 <= k < len(doc.state.ideals):
        raise DocumentError("/charts", "InvalidInput", f"no chart {k}")
    return k


def main_exit() -> None:
    sys.exit(main())
