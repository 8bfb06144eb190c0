"""Command-line entry point: ``surgerygon <group> <command> [options]``.

Every common flag can also be set through an environment variable named
``SURGERYGON_<FLAG>`` (for example ``SURGERYGON_WINDOW=3``); explicit flags
win.  Exit status is 0 exactly when every check in the report passes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import List, Optional, Sequence, Tuple

from .weightlattice import format_rational, parse_rational

ENV_PREFIX = "SURGERYGON_"
BUILTIN_PREFIX = "builtin:"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: Tuple[str, str]
    inputs: List[str] = field(default_factory=list)
    format: str = "text"
    seed: int = 0
    window: int = 2
    tolerance: float = 1e-6
    samples: int = 100

    def validate(self) -> "RunConfig":
        if self.format not in ("text", "json"):
            raise UsageError("--format must be text or json")
        if self.window < 0:
            raise UsageError("--window must be non-negative")
        if self.samples < 1:
            raise UsageError("--samples must be positive")
        if not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        return self


_COMMON = {
    "format": (str, "text"),
    "seed": (int, 0),
    "window": (int, 2),
    "tolerance": (float, 1e-6),
    "samples": (int, 100),
}


def _env_default(name: str):
    typ, default = _COMMON[name]
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return typ(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{name.upper()}={raw!r} is not a valid {typ.__name__}")


def _ints(s: str) -> Tuple[int, ...]:
    s = s.strip().strip("()[]")
    return tuple(int(x) for x in s.split(",") if x.strip()) if s else ()


def _rationals(s: str) -> Tuple[Fraction, ...]:
    s = s.strip().strip("()[]")
    return tuple(parse_rational(x) for x in s.split(",") if x.strip())


def _load_json(path: str):
    if path.startswith(BUILTIN_PREFIX):
        name = path[len(BUILTIN_PREFIX):]
        try:
            text = resources.files("surgerygon.data").joinpath(name + ".json").read_text()
        except FileNotFoundError:
            raise UsageError(f"no builtin input named {name!r}")
        return json.loads(text)
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}")


# handlers: each returns (ok, json report, text lines) -------------------------------

Result = Tuple[bool, dict, List[str]]


def _ngon(args, cfg) -> Result:
    from .exactpolygon import ExactNGon, euler_check, total_complex, verify_ngon

    G = ExactNGon.from_json(_load_json(args.path))
    rep = verify_ngon(G)
    out = {"n": G.n, "identities": rep.to_json()}
    lines = [f"{G.n}-gon: {rep.to_json()['checked']} identities, {len(rep.failures)} failing"]
    ok = rep.ok
    if rep.ok:
        tc = total_complex(G)
        H = tc.complex.homology()
        acyclic = tc.complex.is_acyclic()
        out["total_homology"] = {str(k): v for k, v in H.items()}
        out["acyclic"] = acyclic
        lines.append(f"total complex dimension {sum(tc.sizes)}, acyclic: {acyclic}")
        ok = ok and acyclic
        if args.action == "verify":
            try:
                e = euler_check(G)
            except Exception as exc:  # wrong map degrees
                e, out["euler_error"] = False, str(exc)
            out["euler_check"] = e
            lines.append(f"euler check: {e}")
            ok = ok and e
    out["ok"] = ok
    return ok, out, lines


def _cube(args, cfg) -> Result:
    from .exactpolygon import ExactNCube, cube_to_polygon, total_complex, verify_cube, verify_ngon

    Q = ExactNCube.from_json(_load_json(args.path))
    rep = verify_cube(Q)
    out = {"cube": rep.to_json()}
    lines = [f"{Q.n}-cube: {rep.checked} equations, {len(rep.failures)} failing"]
    ok = rep.ok
    if ok:
        G = cube_to_polygon(Q)
        prep = verify_ngon(G)
        acyclic = prep.ok and total_complex(G).complex.is_acyclic()
        out.update(polygon=G.to_json(), polygon_ok=prep.ok, acyclic=acyclic)
        lines.append(f"assembled {G.n}-gon: identities hold: {prep.ok}, total complex acyclic: {acyclic}")
        ok = prep.ok and acyclic
    out["ok"] = ok
    return ok, out, lines


def _assoc(args, cfg) -> Result:
    from .associahedron import Arrangement, KPoint, face_lattice, glue_arrangements, forgetful

    if args.action == "faces":
        L = face_lattice(args.n)
        out = L.to_json(list_faces=args.list)
        euler = L.euler_characteristic()
        ok = euler == 1
        lines = [
            f"K_{args.n}: dimension {L.dimension}, f-vector {list(L.f_vector())}",
            f"vertices {len(L.vertices())}, facets {len(L.facets())}, euler characteristic {euler}",
        ]
        if args.list:
            lines += [f"  {json.dumps(t.to_json())}" for t in L.faces]
        return ok, out, lines
    p = KPoint.from_json(_load_json(args.path))
    q = glue_arrangements(p, section=args.section)
    w = forgetful(p)
    out = {"glued": q.to_json(), "forgetful": w.to_json()}
    kind = "arrangement" if isinstance(q, Arrangement) else "face point"
    lines = [f"glued {kind}: {json.dumps(q.to_json())}", f"forgetful image: {json.dumps(w.to_json())}"]
    out["ok"] = True
    return True, out, lines


def _lattice(args, cfg) -> Result:
    from .weightlattice import (
        LensFlatConnection, brute_force_reduce, h0_lens, h0_s1s2, normalize, r_coords, reduce_to_fundamental_domain,
    )

    if args.action == "reduce":
        t = _rationals(args.t)
        if args.N is not None and len(t) != args.N:
            raise UsageError(f"--t has {len(t)} entries, expected {args.N}")
        if args.normalize:
            t = normalize(t)
        elif sum(t) != 0:
            raise UsageError("--t must sum to zero (use --normalize to project)")
        red = reduce_to_fundamental_domain(t)
        out = red.to_json()
        ok = all(x >= 0 for x in r_coords(red.point))
        lines = [f"point {[format_rational(x) for x in red.point]}", f"r {out['r']}", f"tau {out['tau']} k {out['k']}"]
        if args.oracle is not None:
            hits = {r.point for r in brute_force_reduce(t, args.oracle)}
            agree = red.point in hits and len(hits) == 1
            out["oracle_agrees"] = agree
            lines.append(f"brute-force oracle (bound {args.oracle}) agrees: {agree}")
            ok = ok and agree
        out["ok"] = ok
        return ok, out, lines
    if args.lens is not None:
        chi = LensFlatConnection(args.lens, _ints(args.exponents or ""))
        h = h0_lens(chi)
    elif args.torus is not None:
        h = h0_s1s2(_rationals(args.torus))
    else:
        raise UsageError("lattice h0 needs --lens P --exponents ... or --torus T")
    return True, {"h0": h, "ok": True}, [f"h0 = {h}"]


def _index(args, cfg) -> Result:
    from .instantonindex import format_text, nice_decomposition_search, regenerate, to_json

    if args.action == "tables":
        tables = list(_ints(args.tables)) if args.tables else None
        results, secs = regenerate(window=cfg.window, tables=tables)
        out = to_json(results, secs)
        ok = out["all_ok"]
        lines = format_text(results).splitlines()
        lines.append(f"{sum(r.ok for r in results)}/{len(results)} rows match, {secs:.2f} s")
        return ok, out, lines
    row = nice_decomposition_search(_ints(args.v), _ints(args.s), args.k, window=cfg.window)
    out = row.to_json()
    out["ok"] = True
    w = " ".join("(" + ",".join(map(str, x)) + ")" for x in row.ensemble.vectors)
    return True, out, [f"w = {w}", f"kappa = {format_rational(row.kappa)}", f"ind+h0 = {row.ind_plus_h0}"]


def _hol(args, cfg) -> Result:
    from .holonomy import (
        BiPermutation, barycenter_discrepancy, build_H, degree_mod2, vertex_report,
    )

    if args.action == "vertices":
        N = args.N
        l = args.l if args.l is not None else len(_ints(args.tau or ""))
        sigma = _ints(args.sigma) if args.sigma else tuple(range(N - l))
        tau = _ints(args.tau) if args.tau else tuple(range(N - l, N))
        b = BiPermutation(N, sigma, tau)
        if b.l != l:
            raise UsageError("--l disagrees with the length of --tau")
        rep = [v.to_json() for v in vertex_report(b)]
        ok = all(all(parse_rational(x) >= 0 for x in v["r"]) for v in rep)
        lines = [f"u_{v['k']}: hol {v['hol']}  r {v['r']}  vertex: {v['is_vertex']}" for v in rep]
        out = {"N": N, "sigma": list(sigma), "tau": list(tau), "vertices": rep, "ok": ok}
        if (N, l) == (2, 0):
            out["discrepancy"] = barycenter_discrepancy()
        return ok, out, lines
    if args.action == "discrepancy":
        d = barycenter_discrepancy(args.N, args.l or 0, args.k)
        return True, dict(d, ok=True), [f"{k}: {v}" for k, v in d.items()]
    N, l = args.N, args.l or 0
    S = _ints(args.S) if args.S is not None else tuple(range(N - l))
    if len(S) != N - l:
        raise UsageError("--S must have N - l elements")
    ts = _rationals(args.t) if args.t else (Fraction(0),)
    reports, lines = [], []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for t in ts:
            m = build_H(N, S, "Ht", t, convention=args.convention)
            rep = degree_mod2(m)
            reports.append(dict(rep.to_json(), t=format_rational(t), well_defined=m.well_defined))
            lines.append(
                f"t={format_rational(t)}: degree mod 2 = {rep.degree}, degenerate cells {len(rep.degenerate_cells)},"
                f" well defined {m.well_defined}"
            )
    ok = all(r["degree_mod2"] == 1 for r in reports)
    out = {"N": N, "S": list(S), "convention": args.convention, "samples": reports,
           "warnings": [str(w.message) for w in caught], "ok": ok}
    return ok, out, lines


def _gh(args, cfg) -> Result:
    import numpy as np

    from .gibbonshawking import MonopoleConfig, check_report, random_config

    if args.config:
        cfgs = [MonopoleConfig.from_json(_load_json(args.config))]
    else:
        rng = np.random.default_rng(cfg.seed)
        cfgs = [random_config(rng) for _ in range(args.configs)]
    reps = [check_report(c, samples=cfg.samples, h=args.h, seed=cfg.seed + i) for i, c in enumerate(cfgs)]
    ok = all(r["ok"] for r in reps)
    lines = []
    for r in reps:
        orders = ", ".join(f"{k} {r[k]['order']:.3f}" for k in ("laplacian", "monopole_equation", "closed_alpha",
                                                               "alpha_is_star_du"))
        lines.append(f"m={r['config']['m']} x={[round(x, 4) for x in r['config']['centers']]}: orders {orders};"
                     f" min R {r['R_min']:.3g}; ok {r['ok']}")
    return ok, {"reports": reps, "ok": ok}, lines


# parser -------------------------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--window", type=int, default=argparse.SUPPRESS, help="search box half-width")
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="surgerygon", parents=[common], allow_abbrev=False, description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name, help):
        g = groups.add_parser(name, help=help, parents=[common], allow_abbrev=False)
        return g.add_subparsers(dest="action", required=True)

    ng = group("ngon", "exact polygons of F2 complexes")
    for a in ("verify", "total"):
        c = ng.add_parser(a, parents=[common], allow_abbrev=False)
        c.add_argument("path", help="polygon JSON file or builtin:four_gon")
        c.set_defaults(handler=_ngon)

    cb = group("cube", "exact cubes")
    c = cb.add_parser("assemble", parents=[common], allow_abbrev=False)
    c.add_argument("path")
    c.set_defaults(handler=_cube)

    asc = group("assoc", "associahedron faces and gluing")
    c = asc.add_parser("faces", parents=[common], allow_abbrev=False)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--list", action="store_true", help="list every face")
    c.set_defaults(handler=_assoc)
    c = asc.add_parser("glue", parents=[common], allow_abbrev=False)
    c.add_argument("path", help="point JSON: tree, arrangements, rhos")
    c.add_argument("--section", choices=("induced", "formula"), default="induced")
    c.set_defaults(handler=_assoc)

    lat = group("lattice", "fundamental domain and centralizers")
    c = lat.add_parser("reduce", parents=[common], allow_abbrev=False)
    c.add_argument("--N", type=int)
    c.add_argument("--t", required=True, help="comma-separated rationals")
    c.add_argument("--normalize", action="store_true", help="project onto the zero-sum plane first")
    c.add_argument("--oracle", type=int, metavar="BOUND", help="compare with the bounded brute-force search")
    c.set_defaults(handler=_lattice)
    c = lat.add_parser("h0", parents=[common], allow_abbrev=False)
    c.add_argument("--lens", type=int, metavar="P")
    c.add_argument("--exponents")
    c.add_argument("--torus", metavar="T")
    c.set_defaults(handler=_lattice)

    ix = group("index", "decomposition tables and search")
    c = ix.add_parser("tables", parents=[common], allow_abbrev=False)
    c.add_argument("--tables", help="comma-separated table numbers (default all)")
    c.set_defaults(handler=_index)
    c = ix.add_parser("search", parents=[common], allow_abbrev=False)
    c.add_argument("--v", required=True)
    c.add_argument("--s", required=True)
    c.add_argument("--k", type=int)
    c.set_defaults(handler=_index)

    hl = group("hol", "vertex holonomies and degrees")
    c = hl.add_parser("vertices", parents=[common], allow_abbrev=False)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--l", type=int)
    c.add_argument("--sigma")
    c.add_argument("--tau")
    c.set_defaults(handler=_hol)
    c = hl.add_parser("degree", parents=[common], allow_abbrev=False)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--l", type=int)
    c.add_argument("--S", help="image set of sigma (default 0..N-l-1)")
    c.add_argument("--t", help="comma-separated homotopy parameters (default 0)")
    c.add_argument("--convention", choices=("compose", "inverse"), default="compose")
    c.set_defaults(handler=_hol)
    c = hl.add_parser("discrepancy", parents=[common], allow_abbrev=False)
    c.add_argument("--N", type=int, default=2)
    c.add_argument("--l", type=int, default=0)
    c.add_argument("--k", type=int, default=0)
    c.set_defaults(handler=_hol)

    gh = group("gh", "Gibbons-Hawking numerics")
    c = gh.add_parser("check", parents=[common], allow_abbrev=False)
    c.add_argument("--config", help="JSON with m and centers (default: random configs)")
    c.add_argument("--configs", type=int, default=5, help="number of random configs without --config")
    c.add_argument("--h", type=float, default=0.04)
    c.set_defaults(handler=_gh)
    return parser


def _config(args) -> RunConfig:
    vals = {name: getattr(args, name, None) for name in _COMMON}
    for name, v in vals.items():
        if v is None:
            vals[name] = _env_default(name)
    inputs = [args.path] if getattr(args, "path", None) else []
    return RunConfig((args.group, args.action), inputs, **vals).validate()


def dispatch(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    fmt = getattr(args, "format", None) or os.environ.get(ENV_PREFIX + "FORMAT", "text")
    try:
        cfg = _config(args)
        ok, report, lines = args.handler(args, cfg)
    except (UsageError, ValueError, KeyError, TypeError) as e:
        err = {"ok": False, "error": type(e).__name__, "message": str(e)}
        if fmt == "json":
            print(json.dumps(err, indent=2), file=stdout)
        else:
            print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.format == "json":
        print(json.dumps(report, indent=2, default=str), file=stdout)
    else:
        print("\n".join(lines), file=stdout)
    return 0 if ok else 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
