"""Command line interface: ``catmod <group> <command> ...``.

Reports go to stdout as JSON, a one-line summary to stderr. Exit status is
0 on success, 1 when the answer is a negative verdict, 2 on usage or input
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from catmod import config
from catmod.errors import CatmodError
from catmod.structures.core import FinStructure, Theory, freeze, thaw

BUILTIN_SIGS = ("group", "lcat", "lhomo", "lhomo+", "empty", "unaryP")


class UsageError(Exception):
    pass


# -- input helpers -----------------------------------------------------------------

def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def load_signature(spec):
    from catmod.logic import GROUP_SIG, L_CAT, L_HOMO, L_HOMO_ISO, Signature, one_sorted

    builtin = {
        "group": GROUP_SIG, "lcat": L_CAT, "lhomo": L_HOMO, "lhomo+": L_HOMO_ISO,
        "empty": one_sorted("s"), "unaryP": one_sorted("s", relations={"P": 1}),
    }
    if spec in builtin:
        return builtin[spec]
    data = _read_json(spec)
    return Signature.from_json(data.get("sig", data))


def load_structure(path) -> FinStructure:
    return FinStructure.from_json(_read_json(path))


def load_theory(path) -> Theory:
    return Theory.from_json(_read_json(path))


def load_category(spec):
    """A category JSON file, a bundle directory, or ``fixture:<name>``."""
    from catmod.fincat import FinCategory

    if spec.startswith("fixture:"):
        from catmod.fixtures import corpus

        name = spec.split(":", 1)[1]
        for C in corpus():
            if C.name == name:
                return C
        raise UsageError(f"no fixture named {name!r}; known: {', '.join(C.name for C in corpus())}")
    if os.path.isdir(spec):
        spec = os.path.join(spec, "category.json")
    return FinCategory.from_json(_read_json(spec))


def load_bundle(path):
    from catmod.modcat import ModelCategory

    if not os.path.isdir(path):
        raise UsageError(f"{path} is not a bundle directory")
    return ModelCategory.load(path)


def pick(items, token, what="item"):
    """The member of ``items`` whose JSON form or str() matches ``token``."""
    for x in items:
        if str(x) == token or json.dumps(thaw(x)) == token:
            return x
    try:
        wanted = freeze(json.loads(token))
    except json.JSONDecodeError:
        wanted = None
    if wanted is not None and wanted in items:
        return wanted
    raise UsageError(f"unknown {what} {token!r}")


def load_filter(args, n):
    from catmod.ultra import FilterOnX, principal

    X = tuple(range(n))
    if getattr(args, "ultra_at", None) is not None:
        return principal(X, pick(X, args.ultra_at, "index"))
    if getattr(args, "filter", None):
        return FilterOnX.from_json(_read_json(args.filter))
    raise UsageError("give --filter FILE or --ultra-at X")


def diagram_from_args(C, args):
    from catmod.fincat import Diagram, discrete_diagram, empty_diagram, parallel_diagram

    chosen = [a for a in ("pair", "parallel", "empty", "diagram") if getattr(args, a, None)]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --pair A B, --parallel f g, --empty, --diagram FILE")
    if args.pair:
        return discrete_diagram(C, [pick(C.objects, t, "object") for t in args.pair])
    if args.parallel:
        f, g = (pick(C.morphisms, t, "morphism") for t in args.parallel)
        if (C.dom[f], C.cod[f]) != (C.dom[g], C.cod[g]):
            raise UsageError("--parallel needs two morphisms with the same ends")
        return parallel_diagram(C, f, g)
    if args.empty:
        return empty_diagram(C)
    return Diagram.from_json(_read_json(args.diagram), C)


# -- output ----------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(thaw(k)) if not isinstance(k, str) else k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    return x


def emit(args, report: dict, summary: str, verdict: bool = True) -> int:
    report = _jsonable(report)
    if args.format == "text":
        print(summary)
        for k, v in report.items():
            if not isinstance(v, (dict, list)):
                print(f"  {k}: {v}")
    else:
        json.dump(report, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
        print(summary, file=sys.stderr)
    return 0 if verdict else 1


# -- logic -----------------------------------------------------------------------

def cmd_logic_parse(args):
    from catmod.logic.parser import parse_formula
    from catmod.logic.syntax import formula_size, free_vars, quantifier_depth, to_text

    sig = load_signature(args.sig)
    phi = parse_formula(args.formula, sig, homotopic=args.homotopic)
    rep = {"text": to_text(phi), "depth": quantifier_depth(phi), "size": formula_size(phi),
           "free": free_vars(phi), "sentence": not free_vars(phi)}
    return emit(args, rep, f"parsed: {rep['text']}")


def _env(M, pairs, phi):
    from catmod.logic.syntax import free_vars

    fv = free_vars(phi)
    env = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--env expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        if name not in fv:
            raise UsageError(f"{name!r} is not free in the formula")
        env[name] = pick(M.carriers[fv[name]], value, f"element of sort {fv[name]}")
    return env


def cmd_logic_eval(args):
    from catmod.logic.parser import parse_formula
    from catmod.logic.semantics import eval_formula

    M = load_structure(args.structure)
    phi = parse_formula(args.formula, M.sig, homotopic=args.homotopic)
    value = eval_formula(M, phi, _env(M, args.env, phi))
    return emit(args, {"value": value}, f"value: {value}", value)


def cmd_logic_sentences(args):
    from catmod.logic.enumerate import count_sentences, enumerate_sentences, sample_sentences
    from catmod.logic.syntax import to_text

    sig = load_signature(args.sig)
    total = count_sentences(sig, args.depth, args.size, args.homotopic)
    if args.sample:
        chosen = sample_sentences(sig, args.sample, args.depth, args.size, args.homotopic, seed=args.seed)
    else:
        chosen = []
        for phi in enumerate_sentences(sig, args.depth, args.size, args.homotopic):
            if len(chosen) >= args.limit:
                break
            chosen.append(phi)
    rep = {"count": total, "seed": args.seed if args.sample else None, "sentences": [to_text(p) for p in chosen]}
    return emit(args, rep, f"{total} sentences with depth <= {args.depth}, size <= {args.size}")


# -- struct ----------------------------------------------------------------------

def cmd_struct_validate(args):
    from catmod.logic.semantics import eval_formula
    from catmod.logic.syntax import to_text
    from catmod.structures.core import validate_structure

    M = load_structure(args.structure)
    problems = validate_structure(M)
    failing = []
    if args.theory and not problems:
        T = load_theory(args.theory)
        failing = [to_text(s) for s in T.sentences if not eval_formula(M, s)]
    ok = not problems and not failing
    return emit(args, {"ok": ok, "violations": problems, "theory_failures": failing},
                "valid" if ok else f"{len(problems)} violation(s), {len(failing)} failing axiom(s)", ok)


def cmd_struct_homs(args):
    from catmod.structures.homs import enumerate_homomorphisms

    A, B = load_structure(args.source), load_structure(args.target)
    hs = enumerate_homomorphisms(A, B, args.strong)
    rep = {"count": len(hs), "homs": [] if args.count_only else [h.maps_json() for h in hs]}
    return emit(args, rep, f"{len(hs)} {'strong ' if args.strong else ''}homomorphism(s)")


def cmd_struct_iso(args):
    from catmod.structures.homs import are_isomorphic

    h = are_isomorphic(load_structure(args.left), load_structure(args.right))
    rep = {"isomorphic": h is not None, "map": h.maps_json() if h is not None else None}
    return emit(args, rep, "isomorphic" if h else "not isomorphic", h is not None)


def cmd_struct_ef(args):
    from catmod.structures.ef import ef_equivalent

    v = ef_equivalent(load_structure(args.left), load_structure(args.right), args.rounds)
    return emit(args, {"rounds": args.rounds, "equivalent": v},
                f"Duplicator {'wins' if v else 'loses'} the {args.rounds}-round game", v)


def cmd_struct_models(args):
    from catmod.structures.models import enumerate_models

    ms = enumerate_models(load_theory(args.theory), args.max_size)
    rep = {"count": len(ms), "models": [] if args.count_only else [M.to_json() for M in ms]}
    return emit(args, rep, f"{len(ms)} model(s) up to isomorphism with at most {args.max_size} elements")


def cmd_struct_termalg(args):
    from catmod.structures.termalg import term_algebra

    T = term_algebra(load_signature(args.sig), args.var_sort)
    size = sum(len(c) for c in T.carriers.values())
    return emit(args, T.to_json(), f"term algebra with {size} element(s)")


def cmd_struct_pullback(args):
    from catmod.structures.termalg import pullback_structure

    M, N = load_structure(args.model), load_structure(args.reduct)
    raw = _read_json(args.map)
    maps = {s: {freeze(a): freeze(b) for a, b in pairs} for s, pairs in raw.items()}
    P = pullback_structure(maps, M, N)
    return emit(args, P.to_json(), "pulled-back structure")


# -- cat -------------------------------------------------------------------------

def cmd_cat_validate(args):
    from catmod.fincat import primary_axiom, validate_category

    path = args.category
    if path.startswith("fixture:"):
        raw = load_category(path)
    else:
        raw = _read_json(os.path.join(path, "category.json") if os.path.isdir(path) else path)
    report = validate_category(raw)
    ax = primary_axiom(report)
    ok = not report
    rep = {"ok": ok, "primary_axiom": ax, "violations": [v.to_json() for v in report]}
    return emit(args, rep, "valid category" if ok else f"invalid: axiom {ax} ({report[0].message})", ok)


def _cone_json(cone):
    return None if cone is None else cone.to_json()


def cmd_cat_limit(args, colimit=False):
    from catmod.fincat import limit_of

    C = load_category(args.category)
    D = diagram_from_args(C, args)
    cone = limit_of(C, D, colimit=colimit)
    kind = "colimit" if colimit else "limit"
    return emit(args, {"exists": cone is not None, "cone": _cone_json(cone)},
                f"{kind} {'found' if cone else 'does not exist'}", cone is not None)


def cmd_cat_skeleton(args):
    from catmod.fincat import skeleton

    C = load_category(args.category)
    S, G = skeleton(C)
    return emit(args, {"skeleton": S.to_json(), "functor": G.to_json(), "flags": G.flags()},
                f"skeleton with {len(S.objects)} object(s), {len(S.morphisms)} morphism(s)")


def cmd_cat_equiv(args):
    from catmod.fincat import are_equivalent

    E = are_equivalent(load_category(args.left), load_category(args.right))
    rep = {"equivalent": E is not None, "witness": E.to_json() if E is not None else None}
    return emit(args, rep, "equivalent" if E else "not equivalent", E is not None)


def cmd_cat_generators(args):
    from catmod.fincat import find_generators, generating_families

    C = load_category(args.category)
    gens = find_generators(C)
    fams = generating_families(C, args.families) if args.families else []
    return emit(args, {"generators": gens, "families": fams}, f"{len(gens)} generator(s)")


def cmd_cat_homcount(args):
    C = load_category(args.category)
    if (args.source is None) != (args.target is None):
        raise UsageError("give both --from and --to, or neither")
    if args.source is None:
        n = len(C.morphisms)
    else:
        n = len(C.hom(pick(C.objects, args.source, "object"), pick(C.objects, args.target, "object")))
    return emit(args, {"count": n}, str(n))


# -- mod -------------------------------------------------------------------------

def cmd_mod_build(args):
    from catmod.modcat import build_model_category

    mc = build_model_category(load_theory(args.theory), args.max_size, args.strong)
    mc.save(args.out)
    C = mc.category
    rep = {"out": args.out, "objects": len(C.objects), "morphisms": len(C.morphisms)}
    return emit(args, rep, f"wrote {args.out}: {len(C.objects)} object(s), {len(C.morphisms)} morphism(s)")


def cmd_mod_coeq(args):
    from catmod.modcat import coequalizer, verify_coequalizer

    mc = load_bundle(args.bundle)
    f = mc.hom_of(pick(mc.category.morphisms, args.f, "morphism"))
    g = mc.hom_of(pick(mc.category.morphisms, args.g, "morphism"))
    Q, p = coequalizer(f, g)
    problems = verify_coequalizer(f, g, Q, p, list(mc.models.values()))
    from catmod.structures.core import hom_violations

    strong = not hom_violations(p.source, p.target, p.maps, strong=True)
    rep = {"quotient": Q.to_json(), "p": p.maps_json(), "p_strong": strong, "problems": problems}
    return emit(args, rep, f"quotient with {sum(len(c) for c in Q.carriers.values())} element(s)", not problems)


def cmd_mod_coprod(args):
    from catmod.modcat import coproduct_unary

    S, inj = coproduct_unary([load_structure(p) for p in args.structures])
    return emit(args, {"coproduct": S.to_json(), "injections": [h.maps_json() for h in inj]},
                f"coproduct of {len(args.structures)} structure(s)")


def cmd_mod_theta(args):
    from catmod.modcat import theta_family, theta_locally_unique, theta_points

    theta = theta_family(load_signature(args.sig))
    rep = {"members": [J.to_json() for J in theta]}
    verdict = True
    if args.model:
        M = load_structure(args.model)
        rep["points"] = theta_points(theta, M)
        rep["locally_unique"] = verdict = theta_locally_unique(theta, M)
    return emit(args, rep, f"{len(theta)} member(s)", verdict)


# -- ultra -----------------------------------------------------------------------

def cmd_ultra_filters(args):
    from catmod.ultra import enumerate_ultrafilters

    X = tuple(range(args.n))
    us = enumerate_ultrafilters(X)
    return emit(args, {"X": list(X), "ultrafilters": [U.to_json() for U in us]}, f"{len(us)} ultrafilter(s)")


def cmd_ultra_rprod(args):
    from catmod.ultra import canonical_iso, reduced_product

    Ms = [load_structure(p) for p in args.structures]
    F = load_filter(args, len(Ms))
    rp = reduced_product(Ms, F)
    rep = {"structure": rp.structure.to_json(), "ultra": F.ultra}
    if F.ultra:
        rep["canonical_iso"] = canonical_iso(rp).maps_json()
    return emit(args, rep, f"reduced product with {sum(len(c) for c in rp.structure.carriers.values())} element(s)")


def cmd_ultra_los(args):
    from catmod.logic.parser import parse_formula
    from catmod.ultra import los_verify

    Ms = [load_structure(p) for p in args.structures]
    U = load_filter(args, len(Ms))
    phi = parse_formula(args.sentence, Ms[0].sig)
    res = los_verify(Ms, U, phi)
    return emit(args, res, "Los holds" if res["ok"] else "Los FAILS", res["ok"])


def cmd_ultra_diag(args):
    from catmod.ultra import diagonal_embedding

    M = load_structure(args.structure)
    U = load_filter(args, args.copies)
    h = diagonal_embedding(M, U)
    return emit(args, {"map": h.maps_json(), "injective": h.is_injective()}, "diagonal embedding")


def cmd_ultra_embed(args):
    from catmod.ultra import ultrapower_embedding

    mc = load_bundle(args.bundle)
    U = load_filter(args, args.copies)
    E = ultrapower_embedding(mc, U)
    flags = {
        "injective_on_objects": E.is_injective_on_objects(), "faithful": E.is_faithful(),
        "functor": E.is_functor(), "triangle": E.triangle_commutes(),
    }
    ok = all(flags.values())
    return emit(args, {**E.functor_data(), **flags}, "embedding checks pass" if ok else "embedding check failed", ok)


# -- homotopic -------------------------------------------------------------------

def _isograph(C, path):
    from catmod.homotopic import IsoGraph, build_isograph

    if not path:
        return build_isograph(C)
    rows = _read_json(path)
    i = IsoGraph(C, {(freeze(a), freeze(b)): freeze(m) for a, b, m in rows})
    bad = i.violations()
    if bad:
        raise UsageError("not an iso-graph: " + "; ".join(bad[:3]))
    return i


def cmd_homotopic_eval(args):
    from catmod.homotopic import HomotopicModel
    from catmod.logic import L_HOMO_ISO
    from catmod.logic.parser import parse_formula

    C = load_category(args.category)
    phi = parse_formula(args.formula, L_HOMO_ISO, homotopic=True)
    m = HomotopicModel(C, _isograph(C, args.isograph))
    env = {}
    for item in args.env or []:
        name, value = item.split("=", 1)
        env[name] = pick(C.morphisms, value, "morphism")
    v = m.eval(phi, env)
    return emit(args, {"value": v}, f"value: {v}", v)


def cmd_homotopic_qlim(args):
    from catmod.fincat import has_limit
    from catmod.homotopic import qlim_holds

    C = load_category(args.category)
    D = diagram_from_args(C, args)
    q = qlim_holds(C, _isograph(C, args.isograph), D, colimit=args.colimit)
    rep = {"qlim": q}
    if args.compare:
        rep["limit_exists"] = has_limit(C, D, colimit=args.colimit)
    return emit(args, rep, f"qlim {'holds' if q else 'fails'}", q)


def cmd_homotopic_agree(args):
    from catmod.homotopic import agreement_test

    C, D = load_category(args.left), load_category(args.right)
    r = agreement_test(C, D, args.depth, args.budget, args.seed, args.size)
    return emit(args, r.to_json(), f"{r.mode}: {r.checked} sentence(s), {len(r.disagreements)} disagreement(s)",
                r.agree)


def cmd_homotopic_translate(args):
    from catmod.homotopic import expand_definitions, translate_lcat
    from catmod.logic import L_CAT
    from catmod.logic.parser import parse_formula
    from catmod.logic.syntax import to_text

    psi = translate_lcat(parse_formula(args.formula, L_CAT))
    rep = {"translation": to_text(psi), "expanded": to_text(expand_definitions(psi))}
    return emit(args, rep, rep["translation"])


def cmd_homotopic_isograph(args):
    from catmod.homotopic import build_isograph, count_isographs, enumerate_isographs, extend_isograph

    C = load_category(args.category)
    if args.extend:
        d = [pick(C.morphisms, t, "morphism") for t in args.extend]
        i = extend_isograph(C, d)
        rep = {"extends": i is not None, "isograph": i.to_json() if i else None}
        return emit(args, rep, "extends" if i else "does not extend", i is not None)
    rep = {"count": count_isographs(C), "isograph": build_isograph(C).to_json()}
    if args.all:
        rep["all"] = [i.to_json() for i in enumerate_isographs(C)]
    return emit(args, rep, f"{rep['count']} iso-graph(s)")


# -- ab --------------------------------------------------------------------------

def cmd_ab_check(args):
    from catmod.abcheck import check_ab

    r = check_ab(load_category(args.category))
    failed = [k for k, v in r.axioms.items() if not v["pass"]]
    return emit(args, r.to_json(), "AB holds" if r.ok else f"fails: {', '.join(failed)}", r.ok)


def cmd_ab_extract(args):
    from catmod.abcheck import extract_groups

    C = load_category(args.category)
    E = extract_groups(C, pick(C.objects, args.generator, "object"))
    rep = {
        "generator": E.generator,
        "groups": {str(G): g.to_json() for G, g in E.groups.items()},
        "maps": {str(f): h.maps_json() for f, h in E.maps.items()},
        "faithful": E.is_faithful(),
    }
    return emit(args, rep, f"{len(E.groups)} group(s) extracted", not E.violations())


def cmd_ab_arrows(args):
    from catmod.abcheck import concrete_group_arrows, group_arrows

    if args.group:
        ops = concrete_group_arrows(load_structure(args.group))
        rep = {"count": len(ops), "operations": [[[*map(thaw, k), thaw(v)] for k, v in op.items()] for op in ops]}
        return emit(args, rep, f"{len(ops)} additive monoidal operation(s)")
    if not (args.category and args.object):
        raise UsageError("give --group FILE, or a category with --object G")
    C = load_category(args.category)
    mus = group_arrows(C, pick(C.objects, args.object, "object"), associativity=args.associativity)
    return emit(args, {"count": len(mus), "group_arrows": mus}, f"{len(mus)} group arrow(s)", bool(mus))


# -- parser ----------------------------------------------------------------------

def _diagram_opts(p):
    p.add_argument("--pair", nargs=2, metavar=("A", "B"), help="binary (co)product of two objects")
    p.add_argument("--parallel", nargs=2, metavar=("F", "G"), help="(co)equalizer of a parallel pair")
    p.add_argument("--empty", action="store_true", help="terminal (initial) object")
    p.add_argument("--diagram", metavar="FILE", help="diagram JSON")


def _filter_opts(p):
    p.add_argument("--filter", metavar="FILE", help='filter JSON {"X": [...], "members": [[...], ...]}')
    p.add_argument("--ultra-at", metavar="X", help="principal ultrafilter at index X")


def build_parser() -> argparse.ArgumentParser:
    def globals_(suppress):
        # flags accepted both before and after the subcommand; only the top
        # level sets defaults so a later copy never clobbers an earlier value
        p = argparse.ArgumentParser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--format", choices=("json", "text"), default=d("json"))
        p.add_argument("--config", metavar="FILE", default=d(None), help=f"caps JSON (default: ${config.ENV_VAR})")
        p.add_argument("--seed", type=int, default=d(None), help="RNG seed (default: caps.seed)")
        return p

    common = globals_(True)
    ap = argparse.ArgumentParser(prog="catmod", description=__doc__.splitlines()[0], parents=[globals_(False)])
    groups = ap.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help_):
        p = group.add_parser(name, help=help_, parents=[common])
        p.set_defaults(fn=fn)
        return p

    g = groups.add_parser("logic", help="formulas and sentences").add_subparsers(dest="cmd", required=True)
    p = sub(g, "parse", cmd_logic_parse, "parse and normalise a formula")
    p.add_argument("sig", help=f"signature JSON or one of {', '.join(BUILTIN_SIGS)}")
    p.add_argument("formula")
    p.add_argument("--homotopic", action="store_true", help="forbid equality")
    p = sub(g, "eval", cmd_logic_eval, "evaluate a formula in a structure")
    p.add_argument("structure")
    p.add_argument("formula")
    p.add_argument("--env", nargs="*", metavar="NAME=VALUE")
    p.add_argument("--homotopic", action="store_true")
    p = sub(g, "sentences", cmd_logic_sentences, "count, list or sample sentences")
    p.add_argument("sig")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--homotopic", action="store_true")
    p.add_argument("--sample", type=int, default=0, metavar="N")
    p.add_argument("--limit", type=int, default=1000, help="list at most this many")

    g = groups.add_parser("struct", help="finite structures").add_subparsers(dest="cmd", required=True)
    p = sub(g, "validate", cmd_struct_validate, "check a structure (and optionally a theory)")
    p.add_argument("structure")
    p.add_argument("--theory")
    p = sub(g, "homs", cmd_struct_homs, "enumerate homomorphisms")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--strong", action="store_true")
    p.add_argument("--count-only", action="store_true")
    p = sub(g, "iso", cmd_struct_iso, "isomorphism test")
    p.add_argument("left")
    p.add_argument("right")
    p = sub(g, "ef", cmd_struct_ef, "Ehrenfeucht-Fraisse game")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--rounds", type=int, required=True)
    p = sub(g, "models", cmd_struct_models, "models of a theory up to isomorphism")
    p.add_argument("theory")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p = sub(g, "termalg", cmd_struct_termalg, "one-variable term algebra")
    p.add_argument("sig")
    p.add_argument("--var-sort")
    p = sub(g, "pullback", cmd_struct_pullback, "pull relations back along a reduct map")
    p.add_argument("--map", required=True, help='JSON {sort: [[a, f(a)], ...]}')
    p.add_argument("model", help="target structure M")
    p.add_argument("reduct", help="structure N over the function reduct")

    g = groups.add_parser("cat", help="finite categories").add_subparsers(dest="cmd", required=True)
    p = sub(g, "validate", cmd_cat_validate, "check the category axioms")
    p.add_argument("category")
    for name, colim in (("limit", False), ("colimit", True)):
        p = sub(g, name, lambda a, c=colim: cmd_cat_limit(a, c), f"find a {name}")
        p.add_argument("category")
        _diagram_opts(p)
    p = sub(g, "skeleton", cmd_cat_skeleton, "skeleton and the functor onto it")
    p.add_argument("category")
    p = sub(g, "equiv", cmd_cat_equiv, "equivalence test")
    p.add_argument("left")
    p.add_argument("right")
    p = sub(g, "generators", cmd_cat_generators, "generators and generating families")
    p.add_argument("category")
    p.add_argument("--families", type=int, default=0, metavar="K")
    p = sub(g, "homcount", cmd_cat_homcount, "number of morphisms (or of one hom-set)")
    p.add_argument("category")
    p.add_argument("--from", dest="source")
    p.add_argument("--to", dest="target")

    g = groups.add_parser("mod", help="categories of models").add_subparsers(dest="cmd", required=True)
    p = sub(g, "build", cmd_mod_build, "build a model-category bundle")
    p.add_argument("--theory", required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strong", action="store_true")
    p = sub(g, "coeq", cmd_mod_coeq, "coequalizer of two bundle morphisms")
    p.add_argument("bundle")
    p.add_argument("f")
    p.add_argument("g")
    p = sub(g, "coprod", cmd_mod_coprod, "coproduct of structures over a unary signature")
    p.add_argument("structures", nargs="+")
    p = sub(g, "theta", cmd_mod_theta, "the Theta family of a signature")
    p.add_argument("sig")
    p.add_argument("--model")

    g = groups.add_parser("ultra", help="filters and reduced products").add_subparsers(dest="cmd", required=True)
    p = sub(g, "filters", cmd_ultra_filters, "ultrafilters on {0..n-1}")
    p.add_argument("n", type=int)
    p = sub(g, "rprod", cmd_ultra_rprod, "reduced product of structures indexed 0..n-1")
    p.add_argument("structures", nargs="+")
    _filter_opts(p)
    p = sub(g, "los", cmd_ultra_los, "check Los for one sentence")
    p.add_argument("structures", nargs="+")
    p.add_argument("--sentence", required=True)
    _filter_opts(p)
    p = sub(g, "diag", cmd_ultra_diag, "diagonal embedding into an ultrapower")
    p.add_argument("structure")
    p.add_argument("--copies", type=int, default=2)
    _filter_opts(p)
    p = sub(g, "embed", cmd_ultra_embed, "embed the ultrapower of a bundle's category")
    p.add_argument("bundle")
    p.add_argument("--copies", type=int, default=2)
    _filter_opts(p)

    g = groups.add_parser("homotopic", help="equality-free logic over QC").add_subparsers(dest="cmd", required=True)
    p = sub(g, "eval", cmd_homotopic_eval, "evaluate a homotopic formula")
    p.add_argument("category")
    p.add_argument("formula")
    p.add_argument("--isograph", metavar="FILE")
    p.add_argument("--env", nargs="*", metavar="NAME=MORPHISM")
    p = sub(g, "qlim", cmd_homotopic_qlim, "quasi-limit condition")
    p.add_argument("category")
    _diagram_opts(p)
    p.add_argument("--colimit", action="store_true")
    p.add_argument("--compare", action="store_true", help="also report limit existence")
    p.add_argument("--isograph", metavar="FILE")
    p = sub(g, "agree", cmd_homotopic_agree, "compare two categories on homotopic sentences")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--size", type=int, default=9)
    p.add_argument("--budget", type=int, default=5000)
    p = sub(g, "translate", cmd_homotopic_translate, "translate an L_cat formula")
    p.add_argument("formula")
    p = sub(g, "isograph", cmd_homotopic_isograph, "iso-graphs of a category")
    p.add_argument("category")
    p.add_argument("--all", action="store_true")
    p.add_argument("--extend", nargs="+", metavar="MORPHISM")

    g = groups.add_parser("ab", help="group arrows and the AB axioms").add_subparsers(dest="cmd", required=True)
    p = sub(g, "check", cmd_ab_check, "per-axiom AB report")
    p.add_argument("category")
    p = sub(g, "extract", cmd_ab_extract, "groups Hom(I, -) from a generator")
    p.add_argument("category")
    p.add_argument("--generator", required=True)
    p = sub(g, "arrows", cmd_ab_arrows, "group arrows on an object, or additive operations on a group")
    p.add_argument("category", nargs="?")
    p.add_argument("--object")
    p.add_argument("--group", metavar="FILE")
    p.add_argument("--associativity", choices=("auto", "triple", "elements"), default="auto")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        config.set_caps(config.load_caps(args.config) if args.config else None)
        if args.seed is None:
            args.seed = config.get_caps().seed
        return args.fn(args)
    except (UsageError, CatmodError, ValueError, KeyError, OSError) as e:
        json.dump({"error": type(e).__name__, "message": str(e)}, sys.stdout)
        sys.stdout.write("\n")
        print(f"error: {e}", file=sys.stderr)
        return 2
    finally:
        config.set_caps(None)


if __name__ == "__main__":
    sys.exit(main())
