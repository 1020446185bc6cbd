"""Batch front end: instance I/O, constructions, and statement verifiers.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 a size bound was exceeded.
"""

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import (actions, billhardt, congruences, core, fixtures, morphisms,
               products, trhull)
from .core import TooLarge


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None


@dataclass
class Report:
    command: list
    digests: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return _jsonable({
            "command": self.command,
            "digests": self.digests,
            "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness}
                       for c in self.checks],
            "extra": self.extra,
            "elapsed_s": round(self.elapsed, 3),
            "passed": self.passed,
        })

    def render_text(self):
        lines = []
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            tail = "" if c.witness is None else f"  witness={_jsonable(c.witness)}"
            lines.append(f"{mark}  {c.name.ljust(width)}{tail}")
        for k in sorted(self.extra):
            lines.append(f"{k}: {json.dumps(_jsonable(self.extra[k]), sort_keys=True)}")
        lines.append(f"{'ok' if self.passed else 'FAILED'} "
                     f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks, "
                     f"{self.elapsed:.2f}s)")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_instance(path):
    return core.from_dict(_load_json(path))


def _emit(report, args, stream=None):
    if stream is None:
        stream = sys.stdout
    if getattr(args, "json", False):
        stream.write(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    else:
        stream.write(report.render_text() + "\n")


# ---------------------------------------------------------------- subcommands

def cmd_validate(args):
    report = Report(command=["validate", args.instance])
    report.digests[args.instance] = _digest(args.instance)
    try:
        S = _load_instance(args.instance)
    except core.NotAssociative as exc:
        report.checks.append(Check("associative", False, exc.witness))
        return report
    except core.NotRegular as exc:
        report.checks.append(Check("every-element-has-inverse", False, exc.witness))
        return report
    except core.IdempotentsDontCommute as exc:
        report.checks.append(Check("idempotents-commute", False, exc.witness))
        return report
    except ValueError as exc:
        report.checks.append(Check("well-formed", False, str(exc)))
        return report
    report.checks += [
        Check("well-formed", True),
        Check("associative", True),
        Check("every-element-has-inverse", True),
        Check("idempotents-commute", True),
    ]
    report.extra["order"] = S.order
    report.extra["idempotents"] = list(S.idempotents)
    report.extra["inv"] = S.inv.tolist()
    return report


def cmd_congruences(args):
    report = Report(command=["congruences", args.instance])
    report.digests[args.instance] = _digest(args.instance)
    S = _load_instance(args.instance)
    found = congruences.enumerate_congruences(S, method=args.method)
    listing = []
    for th in found:
        kern = congruences.kernel(th)
        tr = congruences.trace(th)
        listing.append({
            "class_of": th.class_of.tolist(),
            "classes": th.class_count,
            "kernel": sorted(kern.members),
            "trace_class_of": tr.class_of.tolist(),
        })
    report.extra["count"] = len(found)
    report.extra["congruences"] = listing
    report.checks.append(Check("enumerated", True))
    return report


def _action_from_file(path, T, K):
    data = _load_json(path)
    return actions.validate_action(T, K, np.asarray(data["act"], dtype=np.int64))


def _eps_from_file(path, K, T):
    data = _load_json(path)
    return actions.validate_eps(K, T, np.asarray(data["map"], dtype=np.int64))


def cmd_product(args):
    report = Report(command=["product", args.kind])
    K = _load_instance(args.k)
    T = _load_instance(args.t)
    report.digests[args.k] = _digest(args.k)
    report.digests[args.t] = _digest(args.t)
    if args.kind in ("lsd", "rsd"):
        if not args.action:
            raise UsageError(f"product {args.kind} requires --action")
        action = _action_from_file(args.action, T, K)
        report.digests[args.action] = _digest(args.action)
    if args.kind == "lsd":
        P = products.build_lsd(K, T, action)
    elif args.kind == "rsd":
        if not args.eps:
            raise UsageError("product rsd requires --eps")
        eps = _eps_from_file(args.eps, K, T)
        report.digests[args.eps] = _digest(args.eps)
        P = products.build_rsd(K, T, action, eps)
    elif args.kind == "hwr":
        P = products.build_hwr(K, T)
    elif args.kind == "hwr-eta":
        if not args.eta:
            raise UsageError("product hwr-eta requires --eta")
        data = _load_json(args.eta)
        report.digests[args.eta] = _digest(args.eta)
        triple = morphisms.make_triple(K, T, np.asarray(data["map"], dtype=np.int64))
        P = products.build_hwr_eta(triple)
    else:
        P = products.build_lwr(K, T)
    out = core.as_dict(P.sg)
    out["elements"] = [list(p) for p in P.elements]
    out["provenance"] = {
        "construction": args.kind,
        "k": report.digests[args.k],
        "t": report.digests[args.t],
        "k_order": K.order,
        "t_order": T.order,
    }
    text = json.dumps(_jsonable(out), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    report.checks.append(Check("validated", True))
    report.extra["order"] = P.sg.order
    return report


def cmd_trhull(args):
    report = Report(command=["trhull", args.instance])
    report.digests[args.instance] = _digest(args.instance)
    S = _load_instance(args.instance)
    hull = trhull.enumerate_hull(S, bound=args.bound)
    ids = trhull.hull_identities(hull)
    for k, v in sorted(ids.items()):
        report.checks.append(Check(f"identity:{k}", bool(v)))
    report.checks.append(Check("inner-part-is-ideal", trhull.inner_is_ideal(hull)))
    report.extra["hull_order"] = hull.sg.order
    report.extra["inner_order"] = S.order
    outer = [i for i in range(hull.sg.order) if i not in set(hull.inner_of.tolist())]
    report.extra["non_inner"] = [
        {"left": hull.elements[i].left.tolist(), "right": hull.elements[i].right.tolist()}
        for i in outer]
    if args.congruence:
        report.digests[args.congruence] = _digest(args.congruence)
        labels = _load_json(args.congruence)["class_of"]
        theta = congruences.is_congruence(S, labels)
        respecting = sum(trhull.respects(w, theta) for w in hull.elements)
        report.extra["respecting_order"] = respecting
        report.checks.append(Check("all-pairs-respect", respecting == hull.sg.order))
        he = trhull.hull_of_extension(S, theta, hull=hull)
        report.extra["extension_hull_order"] = len(he.members)
        report.extra["identified_classes"] = he.omega.class_count
        chk = trhull.prop35_check(he)
        for k, v in sorted(chk.items()):
            report.checks.append(Check(f"quotient-map:{k}", bool(v)))
    return report


def cmd_check_afr(args):
    report = Report(command=["check-afr", args.action, args.eps])
    K = _load_instance(args.k)
    T = _load_instance(args.t)
    for p in (args.action, args.eps, args.k, args.t):
        report.digests[p] = _digest(p)
    action = _action_from_file(args.action, T, K)
    eps = _eps_from_file(args.eps, K, T)
    ok, w = actions.check_AFR(action, eps)
    report.checks.append(Check("fixed-range-axiom", ok, w))
    ok2, w2 = actions.check_AE7_AE8(action, eps)
    report.checks.append(Check("classwise-equivalent", ok == ok2, w2))
    if ok:
        ssl = actions.strong_semilattice(action, eps)
        rebuilt = actions.rebuild_from_structure(ssl)
        report.checks.append(Check("structure-maps-rebuild-product",
                                   bool(np.array_equal(rebuilt, K.table))))
    return report


def cmd_check_solution(args):
    report = Report(command=["check-solution", args.triple, args.solution])
    report.digests[args.triple] = _digest(args.triple)
    report.digests[args.solution] = _digest(args.solution)
    tdata = _load_json(args.triple)
    K = core.from_dict(tdata["k"])
    T = core.from_dict(tdata["t"])
    triple = morphisms.make_triple(K, T, np.asarray(tdata["eta"], dtype=np.int64))
    sdata = _load_json(args.solution)
    S = core.from_dict(sdata["s"])
    theta = congruences.is_congruence(S, sdata["theta"]["class_of"])
    sol = morphisms.ExtensionSolution(S, theta)
    ok, witness = morphisms.solves(triple, sol)
    report.checks.append(Check("solves", ok, witness))
    return report


def _transversal_descriptor(tr):
    he = tr.he
    out = []
    for t in range(he.Q.order):
        w = tr.xi_pair(t)
        out.append({"class": t, "left": w.left.tolist(), "right": w.right.tolist()})
    return out


def cmd_billhardt(args):
    report = Report(command=["billhardt", args.mode, args.instance, args.congruence])
    report.digests[args.instance] = _digest(args.instance)
    report.digests[args.congruence] = _digest(args.congruence)
    S = _load_instance(args.instance)
    labels = _load_json(args.congruence)["class_of"]
    theta = congruences.is_congruence(S, labels)
    he = trhull.hull_of_extension(S, theta)
    tr = billhardt.find_transversal(S, theta, want_split=args.split, he=he)
    if tr is None:
        report.checks.append(Check("transversal-exists", False))
        return report
    report.checks.append(Check("transversal-exists", True))
    record = billhardt.validate_transversal(tr)
    for k, v in sorted(record.items()):
        report.checks.append(Check(f"axiom:{k}", bool(v)))
    report.extra["certificate"] = {
        "xi": _transversal_descriptor(tr),
        "axioms": record,
        "classification": billhardt.classify_classical(tr),
    }
    if tr.split:
        closure = billhardt.split_closure_check(tr)
        for k, v in sorted(closure.items()):
            report.checks.append(Check(f"closure:{k}", bool(v)))
    if args.mode == "embed":
        emb = billhardt.thm42_embedding(S, theta, tr)
        report.checks.append(Check("embedding-injective", emb.psi.injective))
        if emb.route_consistent is not None:
            report.checks.append(Check("total-map-route-agrees", emb.route_consistent))
        out = core.as_dict(emb.hwr_eta.sg)
        report.extra["wreath_instance"] = out
        report.extra["psi_map"] = emb.psi.map.tolist()
    return report


# ------------------------------------------------------------------ verifiers

def _run_tasks(tasks, jobs=1):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [(name, pool.submit(fn)) for name, fn in tasks]
            return [Check(name, *_normalize(f.result())) for name, f in futures]
    return [Check(name, *_normalize(fn())) for name, fn in tasks]


def _normalize(result):
    if isinstance(result, tuple):
        ok, witness = result
        return bool(ok), witness
    return bool(result), None


def _catalog_upto(max_order):
    cat = fixtures.catalog()
    return [(n, cat[n]) for n in fixtures.sweep_names(max_order)]


def verify_lemma_2_1(max_order=24, jobs=1):
    tasks = []
    for label, P in fixtures.lsd_fixtures():
        if P.sg.order > max_order:
            continue

        def fn(P=P):
            psi, rsd, _ = products.psi_lemma21(P)
            sol_l = morphisms.ExtensionSolution(P.sg, products.pi2_congruence(P))
            sol_r = morphisms.ExtensionSolution(rsd.sg, products.pi2_congruence(rsd))
            return morphisms.solution_embedding(psi, sol_l, sol_r, iso=True)

        tasks.append((f"pair-product-restricts:{label}", fn))
    return _run_tasks(tasks, jobs)


def verify_prop_2_2(max_order=24, jobs=1):
    tasks = []
    for label, P in fixtures.lsd_fixtures():
        if P.sg.order > max_order:
            continue

        def fn(P=P):
            psi, rsd, _ = products.psi_lemma21(P)
            back = np.empty(rsd.sg.order, dtype=np.int64)
            back[psi.map] = np.arange(P.sg.order)
            phi = morphisms.is_homomorphism(back, rsd.sg, P.sg)
            sol_l = morphisms.ExtensionSolution(P.sg, products.pi2_congruence(P))
            sol_r = morphisms.ExtensionSolution(rsd.sg, products.pi2_congruence(rsd))
            return (morphisms.solution_embedding(psi, sol_l, sol_r, iso=True)
                    and morphisms.solution_embedding(phi, sol_r, sol_l, iso=True))

        tasks.append((f"embeddings-transfer-both-ways:{label}", fn))
    return _run_tasks(tasks, jobs)


def _eps_decomposition(eps):
    E, elems = core.idempotent_semilattice(eps.T)
    pos = {int(t): i for i, t in enumerate(elems)}
    vals = [pos[int(v)] for v in eps.map]
    eta = morphisms.is_homomorphism(vals, eps.K, E)
    return congruences.decomposition_along(eta, embed=elems)


def verify_prop_3_1(max_order=3, jobs=1):
    pairs = [(kn, K, tn, T) for kn, K in _catalog_upto(max_order)
             for tn, T in _catalog_upto(max_order)]
    tasks = []
    for kn, K, tn, T in pairs:

        def fn(K=K, T=T):
            for action in actions.enumerate_actions(T, K):
                for eps in actions.enumerate_surjective_eps(K, T):
                    afr, w = actions.check_AFR(action, eps)
                    ae, w2 = actions.check_AE7_AE8(action, eps)
                    mod, w3 = actions.check_modified(action, _eps_decomposition(eps))
                    if not (afr == ae == mod):
                        return False, {"afr": (afr, w), "elementwise": (ae, w2),
                                       "classwise": (mod, w3)}
            return True, None

        tasks.append((f"three-forms-agree:{kn}|{tn}", fn))
    return _run_tasks(tasks, jobs)


def verify_cor_3_4(max_order=4, jobs=1):
    tasks = []
    for kn, tn, action, eps in fixtures.afr_sweep(max_order):

        def fn(action=action, eps=eps):
            ssl = actions.strong_semilattice(action, eps)
            rebuilt = actions.rebuild_from_structure(ssl)
            return bool(np.array_equal(rebuilt, action.K.table))

        tasks.append((f"gluing-rebuilds-product:{kn}|{tn}", fn))
    return _run_tasks(tasks, jobs)


def verify_prop_3_5(max_order=6, jobs=1):
    tasks = []
    for name, S in _catalog_upto(max_order):

        def fn(S=S):
            hull = trhull.enumerate_hull(S)
            for th in congruences.enumerate_congruences(S):
                he = trhull.hull_of_extension(S, th, hull=hull)
                sig = trhull.omega_relation_signature(he)
                if not np.array_equal(sig, he.omega.class_of):
                    return False, "relation-mismatch"
                chk = trhull.prop35_check(he)
                if not all(chk.values()):
                    return False, chk
            return True, None

        tasks.append((f"hull-projects-onto-quotient:{name}", fn))
    return _run_tasks(tasks, jobs)


def _rsd_sweep(max_order):
    return [(label, P) for label, P in fixtures.rsd_fixtures()
            if P.sg.order <= max_order]


def verify_lemma_3_6(max_order=20, jobs=1):
    tasks = []
    for label, P in _rsd_sweep(max_order):

        def fn(P=P):
            out = trhull.shift_pairs_are_translations(P)
            return all(out.values()), out

        tasks.append((f"shifts-are-linked-pairs:{label}", fn))
    return _run_tasks(tasks, jobs)


def verify_lemma_3_7(max_order=20, jobs=1):
    tasks = []
    for label, P in _rsd_sweep(max_order):

        def fn(P=P):
            out = trhull.shift_embedding_check(P)
            return all(out.values()), out

        tasks.append((f"shift-map-embeds:{label}", fn))
    return _run_tasks(tasks, jobs)


def verify_lemma_3_8(max_order=20, jobs=1):
    tasks = []
    for label, P in _rsd_sweep(max_order):

        def fn(P=P):
            out = trhull.shift_order_and_conjugation_check(P)
            return all(out.values()), out

        tasks.append((f"shift-dominance-and-conjugation:{label}", fn))
    return _run_tasks(tasks, jobs)


def verify_prop_3_9(max_order=5, jobs=1):
    tasks = []
    for name, S in _catalog_upto(max_order):

        def fn(S=S):
            for th in congruences.enumerate_congruences(S):
                out = billhardt.prop39_check(S, th)
                if not (out["plain_equivalent"] and out["split_equivalent"]):
                    return False, out
            return True, None

        tasks.append((f"intermediate-subsemigroup-criterion:{name}", fn))
    return _run_tasks(tasks, jobs)


def verify_thm_3_10(max_order=20, jobs=1):
    tasks = []
    for label, P in _rsd_sweep(max_order):

        def fn(P=P):
            theta = congruences.congruence_from_map(P.sg, P.pi2.map)
            tr = billhardt.theorem310_forward(P)
            prod, phi = billhardt.theorem310_backward(P.sg, theta, tr)
            return phi.bijective

        tasks.append((f"round-trip:{label}", fn))
    return _run_tasks(tasks, jobs)


def verify_prop_4_1(max_order=20, jobs=1):
    tasks = []
    for label, P in _rsd_sweep(max_order):

        def fn(P=P):
            sol = morphisms.ExtensionSolution(
                P.sg, congruences.congruence_from_map(P.sg, P.pi2.map))
            peta = products.build_p_eta(sol.induced_triple)
            return peta.sg.order >= 1

        tasks.append((f"fiber-compatible-power-closed:{label}", fn))
    return _run_tasks(tasks, jobs)


def verify_thm_4_2(max_order=5, jobs=1):
    tasks = []
    embeddable = []
    for name, S in _catalog_upto(max_order):
        for i, th in enumerate(congruences.enumerate_congruences(S)):
            embeddable.append((f"{name}#cong{i}", S, th))
    for label, P in _rsd_sweep(8):
        theta = congruences.congruence_from_map(P.sg, P.pi2.map)
        embeddable.append((f"{label}", P.sg, theta))
    hits = []
    for label, S, th in embeddable:

        def fn(S=S, th=th):
            tr = billhardt.find_transversal(S, th)
            if tr is None:
                return True, "no-transversal"
            emb = billhardt.thm42_embedding(S, th, tr)
            hits.append(1)
            ok = emb.psi.injective and (emb.route_consistent in (True, None))
            return ok, None if ok else "route-divergence"

        tasks.append((f"wreath-embedding:{label}", fn))
    out = _run_tasks(tasks, jobs)
    out.append(Check("embedding-sweep-nonvacuous", len(hits) >= 2, len(hits)))
    return out


def verify_remark_4_3(max_order=4096, jobs=1):
    cat = fixtures.catalog()
    pairs = [("z2", "chain2"), ("chain2", "chain2"), ("chain2", "chain3"),
             ("z3", "z2"), ("chain2", "z2"), ("fork", "chain2")]
    tasks = []
    for kn, tn in pairs:
        K, T = cat[kn], cat[tn]
        if K.order ** T.order > max_order:
            continue

        def fn(K=K, T=T):
            lwr = products.build_lwr(K, T)
            hwr = products.build_hwr(K, T)
            psi = products.Psi_remark(lwr, hwr)
            phi = products.hbar_inverse(lwr, hwr)
            n = lwr.sg.order
            round1 = phi.map[psi.map]
            round2 = psi.map[phi.map]
            return (bool(np.array_equal(round1, np.arange(n)))
                    and bool(np.array_equal(round2, np.arange(n))))

        tasks.append((f"restriction-iso-roundtrip:{kn}|{tn}", fn))
    return _run_tasks(tasks, jobs)


VERIFIERS = {
    "prop-2.2": verify_prop_2_2,
    "lemma-2.1": verify_lemma_2_1,
    "prop-3.1": verify_prop_3_1,
    "cor-3.4": verify_cor_3_4,
    "prop-3.5": verify_prop_3_5,
    "lemma-3.6": verify_lemma_3_6,
    "lemma-3.7": verify_lemma_3_7,
    "lemma-3.8": verify_lemma_3_8,
    "prop-3.9": verify_prop_3_9,
    "thm-3.10": verify_thm_3_10,
    "prop-4.1": verify_prop_4_1,
    "thm-4.2": verify_thm_4_2,
    "remark-4.3": verify_remark_4_3,
}


def cmd_verify(args):
    report = Report(command=["verify", args.name])
    names = list(VERIFIERS) if args.name == "all" else [args.name]
    if args.seed is not None:
        report.extra["seed"] = args.seed
    for name in names:
        kwargs = {"jobs": args.jobs}
        if args.max_order is not None:
            kwargs["max_order"] = args.max_order
        for check in VERIFIERS[name](**kwargs):
            report.checks.append(Check(f"{name}:{check.name}", check.passed,
                                       check.witness))
    if args.sweep:
        report.extra["sweep_note"] = _sweep_extra(args.sweep, report)
    return report


def _sweep_extra(directory, report):
    """Extra instances: validate each and run the hull/congruence basics."""
    import pathlib
    found = sorted(pathlib.Path(directory).glob("*.json"))
    names = []
    for path in found:
        path = str(path)
        report.digests[path] = _digest(path)
        try:
            S = _load_instance(path)
        except Exception as exc:
            report.checks.append(Check(f"sweep:valid:{path}", False, str(exc)))
            continue
        report.checks.append(Check(f"sweep:valid:{path}", True))
        if S.order <= trhull.NAIVE_BOUND:
            h1 = trhull.enumerate_hull(S)
            h2 = trhull.naive_hull(S)
            same = {w.key() for w in h1.elements} == {w.key() for w in h2.elements}
            report.checks.append(Check(f"sweep:hull-engines-agree:{path}", same))
        names.append(path)
    return names


class UsageError(Exception):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit the report as JSON")
    p = argparse.ArgumentParser(
        prog="invsem",
        parents=[common],
        description="workbench for finite inverse semigroups: products, "
                    "translational hulls, congruence transversals")
    sub = p.add_subparsers(dest="cmd", required=True)

    q = sub.add_parser("validate", parents=[common], help="check a multiplication table")
    q.add_argument("instance")
    q.set_defaults(fn=cmd_validate)

    q = sub.add_parser("congruences", parents=[common], help="list all congruences of an instance")
    q.add_argument("instance")
    q.add_argument("--method", default="auto",
                   choices=["auto", "partitions", "generated"])
    q.set_defaults(fn=cmd_congruences)

    q = sub.add_parser("product", parents=[common], help="build a semidirect or wreath product")
    q.add_argument("kind", choices=["lsd", "rsd", "hwr", "hwr-eta", "lwr"])
    q.add_argument("--k", required=True, help="first-factor instance JSON")
    q.add_argument("--t", required=True, help="acting instance JSON")
    q.add_argument("--action", help='JSON {"act": [[...]]} indexed [t][a]')
    q.add_argument("--eps", help='JSON {"map": [...]} of idempotent targets')
    q.add_argument("--eta", help='JSON {"map": [...]} fiber map for hwr-eta')
    q.add_argument("--out", "-o", help="write the instance here instead of stdout")
    q.set_defaults(fn=cmd_product)

    q = sub.add_parser("trhull", parents=[common], help="enumerate the translational hull")
    q.add_argument("instance")
    q.add_argument("--congruence", help='JSON {"class_of": [...]}')
    q.add_argument("--bound", type=int, default=trhull.HULL_BOUND)
    q.set_defaults(fn=cmd_trhull)

    q = sub.add_parser("check-afr", parents=[common], help="test the fixed-range axiom")
    q.add_argument("action")
    q.add_argument("eps")
    q.add_argument("--k", required=True)
    q.add_argument("--t", required=True)
    q.set_defaults(fn=cmd_check_afr)

    q = sub.add_parser("check-solution", parents=[common],
                       help="does a congruence pair answer an extension problem")
    q.add_argument("triple", help='JSON {"k": inst, "t": inst, "eta": [...]}')
    q.add_argument("solution", help='JSON {"s": inst, "theta": {"class_of": [...]}}')
    q.set_defaults(fn=cmd_check_solution)

    q = sub.add_parser("billhardt", parents=[common], help="find or use a congruence transversal")
    q.add_argument("mode", choices=["find", "embed"])
    q.add_argument("instance")
    q.add_argument("congruence")
    q.add_argument("--split", action="store_true",
                   help="require a multiplicative transversal")
    q.set_defaults(fn=cmd_billhardt)

    q = sub.add_parser("verify", parents=[common], help="run a statement verifier suite")
    q.add_argument("name", choices=list(VERIFIERS) + ["all"])
    q.add_argument("--max-order", type=int, default=None)
    q.add_argument("--seed", type=int, default=None,
                   help="recorded for reproducibility of sampled sweeps")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--sweep", help="directory of extra instance JSONs")
    q.set_defaults(fn=cmd_verify)

    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    t0 = time.time()
    try:
        report = args.fn(args)
    except TooLarge as exc:
        report = Report(command=[args.cmd])
        report.checks.append(Check("within-bounds", False,
                                   {"what": exc.what, "size": exc.size,
                                    "bound": exc.bound}))
        report.elapsed = time.time() - t0
        _emit(report, args)
        return 3, report
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2, None
    except FileNotFoundError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2, None
    report.elapsed = time.time() - t0
    _emit(report, args)
    return (0 if report.passed else 1), report


def main(argv=None):
    sys.exit(run(argv)[0])


if __name__ == "__main__":
    main()
