"""Simulation, bisimulation, and executable law checks on finite models.

Similarity is computed by refinement from the full relation and the result is
re-verified before it is returned.  The tree-level laws (pruning shrinks
unfoldings, homomorphisms preserve similarity, term-map extension and
flattening are homomorphisms between lifted models) are checked at a finite
depth on small generator coalgebras.  Pairs whose observation trees reach a
frontier or tainted node are skipped rather than judged, so each law reports
pass, fail, or inconclusive.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .behaviour import (BOTTOM, BehaviourKind, LtsValue, Relation, StreamStep,
                        WtsValue, label_key, state_key)
from .engine import (GenCoalgebra, Model, UnfoldTree, apply_rules, gen_to_model,
                     lift_coalgebra, map_unfold, touches_frontier, unfold)
from .errors import BigsosError, CarrierMismatchError, InconsistentStreamError, \
    UnknownStateError
from .speclang import Spec
from .terms import (App, Term, UniversePolicy, Var, print_term, substitute,
                    term_key)


def _pair_key(pair):
    return (state_key(pair[0]), state_key(pair[1]))


# --- similarity and bisimilarity --------------------------------------------------


def greatest_simulation(kind: BehaviourKind, m1: Model, m2: Model) -> Relation:
    """Largest R with (s,t) in R implying rel_lift(R, m1(s), m2(t)).

    Refines the full carrier product by discarding violating pairs until
    stable; the fixed point is unique, so sweep order does not matter.
    """
    if m1.kind != kind or m2.kind != kind:
        raise CarrierMismatchError("models disagree with the requested behaviour kind")
    left = m1.carrier()
    right = m2.carrier()
    pairs = set(itertools.product(left, right))
    changed = True
    while changed:
        changed = False
        for pair in sorted(pairs, key=_pair_key):
            if not kind.rel_lift(pairs, m1.step(pair[0]), m2.step(pair[1])):
                pairs.discard(pair)
                changed = True
    for s, t in pairs:  # guard against refinement bugs
        if not kind.rel_lift(pairs, m1.step(s), m2.step(t)):
            raise BigsosError("internal: refined relation is not a simulation")
    return Relation(left, right, frozenset(pairs))


def bisimilarity_classes(kind: BehaviourKind, model: Model) -> tuple:
    """Coarsest partition whose classes have equal class-quotiented behaviour.

    Partition refinement: split by (current class, behaviour with states
    replaced by class ids) until stable.  Class ids are assigned by first
    occurrence in the canonical carrier order, so output order is stable.
    """
    if model.kind != kind:
        raise CarrierMismatchError("model disagrees with the requested behaviour kind")
    states = model.carrier()
    cls = {s: 0 for s in states}
    while True:
        fresh: dict = {}
        new_cls = {}
        for s in states:
            sig = (cls[s], kind.map_states(cls, model.step(s)))
            if sig not in fresh:
                fresh[sig] = len(fresh)
            new_cls[s] = fresh[sig]
        if new_cls == cls:
            break
        cls = new_cls
    groups: dict = {}
    for s in states:
        groups.setdefault(cls[s], []).append(s)
    return tuple(frozenset(groups[i]) for i in sorted(groups))


def depth_similarity(kind: BehaviourKind, u1: UnfoldTree, u2: UnfoldTree,
                     depth: int, require_labels: bool = True) -> bool:
    """Depth-bounded similarity on observation trees.

    With require_labels, related nodes must carry equal roots (the order on
    term-labelled trees); drop it to compare unfoldings of different terms
    for the behavioural preorder.  Depth 0 relates everything.
    """
    if depth > u1.depth or depth > u2.depth:
        raise ValueError("depth exceeds a recorded tree depth")
    if depth == 0:
        return True
    if require_labels and u1.root != u2.root:
        return False
    kids1 = sorted(kind.states(u1.step), key=state_key)
    kids2 = sorted(kind.states(u2.step), key=state_key)
    related = frozenset((a, b) for a in kids1 for b in kids2
                        if depth_similarity(kind, a, b, depth - 1, require_labels))
    return kind.rel_lift(related, u1.step, u2.step)


# --- term equivalence --------------------------------------------------------------


@dataclass(frozen=True)
class EquivResult:
    """Verdict plus a witness: the relation itself when related, else the
    smallest distinguishing observation depth found (None if none within
    the search bound)."""

    related: bool
    witness: object = None

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Relation):
            w = {"pairs": sorted([print_term(s), print_term(t)] for s, t in w.pairs)}
        return {"related": self.related, "witness": w}


def _tree_nodes(kind, tree: UnfoldTree) -> int:
    if tree.step is None:
        return 1
    return 1 + sum(_tree_nodes(kind, sub) for sub in kind.states(tree.step))


def distinguishing_depth(model: Model, t1: Term, t2: Term, relation: str = "bisim",
                         cap: Union[int, None] = None) -> Union[int, None]:
    """Least depth at which the unfoldings come apart, or None if the search
    bound (or a tree-size budget) is reached first."""
    kind = model.kind
    if cap is None:
        cap = min(len(model.carrier()) ** 2 + 1, 12)
    for d in range(1, cap + 1):
        u1 = unfold(model, t1, d)
        u2 = unfold(model, t2, d)
        if _tree_nodes(kind, u1) + _tree_nodes(kind, u2) > 2000:
            return None
        fwd = depth_similarity(kind, u1, u2, d, require_labels=False)
        if relation == "sim":
            if not fwd:
                return d
        elif not (fwd and depth_similarity(kind, u2, u1, d, require_labels=False)):
            return d
    return None


def _partition_relation(kind, model: Model, classes) -> Relation:
    carrier = model.carrier()
    pairs = frozenset((s, t) for cl in classes for s in cl for t in cl)
    for s, t in pairs:  # the witness must itself be a bisimulation
        if not (kind.rel_lift(pairs, model.step(s), model.step(t))
                and kind.rel_lift(pairs, model.step(t), model.step(s))):
            raise BigsosError("internal: partition is not a bisimulation")
    return Relation(carrier, carrier, pairs)


def check_equivalence(model: Model, t1: Term, t2: Term,
                      relation: str = "bisim") -> EquivResult:
    """Decide similarity or bisimilarity of two carrier terms in one model."""
    kind = model.kind
    carrier = set(model.carrier())
    for t in (t1, t2):
        if t not in carrier:
            raise UnknownStateError(f"term {print_term(t)} is not in the model")
    if relation == "sim":
        rel = greatest_simulation(kind, model, model)
        if (t1, t2) in rel.pairs:
            return EquivResult(True, rel)
    elif relation == "bisim":
        classes = bisimilarity_classes(kind, model)
        for cl in classes:
            if t1 in cl and t2 in cl:
                return EquivResult(True, _partition_relation(kind, model, classes))
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return EquivResult(False, distinguishing_depth(model, t1, t2, relation))


# --- congruence --------------------------------------------------------------------


@dataclass(frozen=True)
class CongruenceViolation:
    op: str
    params: tuple
    left: Term
    right: Term
    depth: Union[int, None]

    def to_json(self) -> dict:
        return {"op": self.op, "params": list(self.params),
                "left": print_term(self.left), "right": print_term(self.right),
                "depth": self.depth}


@dataclass(frozen=True)
class CongruenceReport:
    samples: int
    checked: int
    skipped: int
    violations: tuple

    def to_json(self) -> dict:
        return {"samples": self.samples, "checked": self.checked,
                "skipped": self.skipped,
                "violations": [v.to_json() for v in self.violations]}


def congruence_test(spec: Spec, model: Model, samples: int, depth: int = 3,
                    seed: int = 0) -> CongruenceReport:
    """Sample composite terms and swap arguments for bisimilar mates.

    Composites are drawn from the universe so the left term always has
    recorded behaviour; a swapped composite outside the universe is counted
    as skipped, not failed.  depth bounds the distinguishing-depth search
    attached to any violation.
    """
    kind = model.kind
    rng = random.Random(seed)
    classes = bisimilarity_classes(kind, model)
    cls_of: dict = {}
    members: dict = {}
    for i, cl in enumerate(classes):
        ordered = sorted(cl, key=term_key)
        members[i] = ordered
        for s in cl:
            cls_of[s] = i
    in_model = set(model.carrier())
    apps = [t for t in model.universe
            if isinstance(t, App) and t.args and t.op in spec.sig]
    if not apps or samples <= 0:
        return CongruenceReport(max(samples, 0), 0, 0, ())
    checked = skipped = 0
    violations = []
    for _ in range(samples):
        left = rng.choice(apps)
        mates = tuple(rng.choice(members[cls_of[a]]) for a in left.args)
        right = App(left.op, left.params, mates)
        if right not in in_model:
            skipped += 1
            continue
        checked += 1
        if cls_of[left] != cls_of[right]:
            violations.append(CongruenceViolation(
                left.op, left.params, left, right,
                distinguishing_depth(model, left, right, "bisim", cap=depth)))
    return CongruenceReport(samples, checked, skipped, tuple(violations))


# --- semantic monotonicity ---------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityViolation:
    op: str
    params: tuple
    args: tuple
    smaller_env: object  # rule bank output under the pruned environment
    larger_env: object

    def to_json(self) -> dict:
        return {"op": self.op, "params": list(self.params),
                "args": [print_term(a) for a in self.args]}


@dataclass(frozen=True)
class MonotonicityReport:
    pairs: int
    comparisons: int
    skipped: int
    violations: tuple

    def to_json(self) -> dict:
        return {"pairs": self.pairs, "comparisons": self.comparisons,
                "skipped": self.skipped,
                "violations": [v.to_json() for v in self.violations]}


def _test_labels(kind) -> list:
    if getattr(kind, "labels", None) is not None:
        return sorted(kind.labels, key=label_key)
    return [1, 2]  # natural-number stream labels: two are enough to disagree


def _env_model(kind, names, beh) -> Model:
    universe = tuple(sorted((Var(n) for n in names), key=term_key))
    return Model(kind, universe, {Var(n): beh[n] for n in names}, frozenset())


def _full_env(kind, names, labels) -> dict:
    everyone = {Var(n) for n in names}
    if kind.name == "stream":
        order = list(names)
        return {n: StreamStep(labels[0], Var(order[(i + 1) % len(order)]))
                for i, n in enumerate(order)}
    if kind.name == "lts":
        return {n: LtsValue.make({lab: everyone for lab in labels}) for n in names}
    return {n: WtsValue.make({lab: {s: 1.0 for s in everyone} for lab in labels})
            for n in names}


def _row_prunes(kind, names, labels, beh) -> list:
    """Single-state prunes of an environment: drop one state's moves on one
    label (streams: the whole step), keeping everything else."""
    out = []
    for n in names:
        if kind.name == "stream":
            if not isinstance(beh[n], StreamStep):
                continue
            smaller = dict(beh)
            smaller[n] = BOTTOM
            out.append(smaller)
            continue
        for lab in labels:
            cur = beh[n].as_dict()
            if lab not in cur:
                continue
            cur = dict(cur)
            del cur[lab]
            smaller = dict(beh)
            smaller[n] = LtsValue.make(cur) if kind.name == "lts" else WtsValue.make(cur)
            out.append(smaller)
    return out


def _random_env(kind, names, labels, rng) -> dict:
    beh = {}
    targets = [Var(n) for n in names]
    for n in names:
        if kind.name == "stream":
            beh[n] = (BOTTOM if rng.random() < 0.3 else
                      StreamStep(rng.choice(labels), rng.choice(targets)))
        elif kind.name == "lts":
            beh[n] = LtsValue.make({lab: {t for t in targets if rng.random() < 0.5}
                                    for lab in labels})
        else:
            beh[n] = WtsValue.make({lab: {t: rng.choice([0.0, 0.5, 1.0, 2.0])
                                          for t in targets}
                                    for lab in labels})
    return beh


def _random_prune(kind, beh, rng) -> dict:
    smaller = dict(beh)
    victims = [n for n in smaller
               if kind.name == "stream" and isinstance(smaller[n], StreamStep)
               or kind.name != "stream" and smaller[n].moves]
    if not victims:
        return smaller
    for n in rng.sample(victims, k=min(len(victims), rng.randint(1, 2))):
        if kind.name == "stream":
            smaller[n] = BOTTOM
            continue
        cur = smaller[n].as_dict()
        lab = rng.choice(sorted(cur, key=label_key))
        row = cur[lab]
        if kind.name == "lts":
            keep = sorted(row, key=state_key)
            del keep[rng.randrange(len(keep))]
            cur[lab] = set(keep)
        else:
            s = rng.choice(sorted(row, key=state_key))
            row = dict(row)
            row[s] = row[s] * rng.choice([0.0, 0.5])
            cur[lab] = row
        smaller[n] = LtsValue.make(cur) if kind.name == "lts" else WtsValue.make(cur)
    return smaller


def monotonicity_semantic_test(spec: Spec, trials: int, seed: int = 0,
                               states: int = 3) -> MonotonicityReport:
    """Evaluate the rule bank under environment pairs env0 below env1.

    Systematic single-row prunes of a full environment run first (these catch
    every negative-premise rule deterministically), then `trials` random
    environment/prune pairs.  A violation means some operator's output failed
    to stay below when its premises grew.
    """
    kind = spec.kind
    rng = random.Random(seed)
    names = []
    for i in range(states):
        n = f"env{i}"
        while n in spec.sig:
            n += "_"
        names.append(n)
    names = tuple(names)
    labels = _test_labels(kind)

    full = _full_env(kind, names, labels)
    cases = [(smaller, full) for smaller in _row_prunes(kind, names, labels, full)]
    for _ in range(max(trials, 0)):
        larger = _random_env(kind, names, labels, rng)
        cases.append((_random_prune(kind, larger, rng), larger))

    comparisons = skipped = 0
    violations = []
    for smaller, larger in cases:
        m0 = _env_model(kind, names, smaller)
        m1 = _env_model(kind, names, larger)
        for op in spec.sig.operators():
            params = tuple(1 for _ in range(op.param_count))
            if op.arity > 3:
                tuples = [tuple(rng.choice([Var(n) for n in names])
                                for _ in range(op.arity)) for _ in range(10)]
            else:
                tuples = list(itertools.product([Var(n) for n in names],
                                                repeat=op.arity))
            for args in tuples:
                try:
                    v0 = apply_rules(spec, m0, op.name, params, args)
                    v1 = apply_rules(spec, m1, op.name, params, args)
                except InconsistentStreamError:
                    skipped += 1
                    continue
                comparisons += 1
                if not kind.leq(v0, v1):
                    violations.append(MonotonicityViolation(op.name, params, args,
                                                            v0, v1))
    return MonotonicityReport(len(cases), comparisons, skipped, tuple(violations))


# --- the law suite -----------------------------------------------------------------


@dataclass(frozen=True)
class LawConfig:
    """Knobs for the depth-bounded law checks.

    generators supplies the small coalgebras the laws run over; empty means
    kind-appropriate defaults (a one-state loop and a two-state chain).  hom
    maps the last generator's states onto the first's; None falls back to the
    all-to-first collapse when that is a homomorphism, or to the identity
    when only one generator is given.
    """

    depth: int = 3
    policy: UniversePolicy = UniversePolicy(max_count=240, max_size=14)
    generators: tuple = ()
    hom: Union[Mapping, None] = None
    max_terms: int = 150


@dataclass(frozen=True)
class LawResult:
    law: str
    status: str  # pass | fail | inconclusive
    witness: object = None

    def to_json(self) -> dict:
        return {"law": self.law, "status": self.status, "witness": self.witness}


def _first_label(kind):
    if getattr(kind, "labels", None) is not None:
        return sorted(kind.labels, key=label_key)[0]
    return 1


def _fresh_name(name: str, sig) -> str:
    while name in sig:
        name += "_"
    return name


def default_generators(kind: BehaviourKind, sig) -> tuple:
    """A one-state loop and a two-state chain into a loop, on one label."""
    lab = _first_label(kind)

    def loop(s):
        if kind.name == "stream":
            return StreamStep(lab, s)
        if kind.name == "lts":
            return LtsValue.make({lab: {s}})
        return WtsValue.make({lab: {s: 1.0}})

    gx = _fresh_name("gx", sig)
    gp = _fresh_name("gp", sig)
    gq = _fresh_name("gq", sig)
    g1 = GenCoalgebra((gx,), {gx: loop(gx)})
    g2 = GenCoalgebra((gp, gq), {gp: loop(gq), gq: loop(gq)})
    return (g1, g2)


def is_homomorphism(kind: BehaviourKind, gsrc: GenCoalgebra, gdst: GenCoalgebra,
                    hom: Mapping) -> bool:
    """Relabelling the source dynamics must give the target dynamics."""
    for x in gsrc.states:
        y = hom.get(x)
        if y is None or y not in gdst.dynamics:
            return False
        if kind.map_states(hom, gsrc.dynamics[x]) != gdst.dynamics[y]:
            return False
    return True


def _lift_seeds(spec: Spec, gen: GenCoalgebra) -> list:
    """Constants plus depth-1 composites over the first generator state."""
    seeds = [App(c) for c in spec.sig.constants()]
    if gen.states:
        x0 = Var(gen.states[0])
        for op in spec.sig.operators():
            if op.arity >= 1:
                params = tuple(1 for _ in range(op.param_count))
                seeds.append(App(op.name, params, (x0,) * op.arity))
    return seeds


def _prune_gen(kind, gen: GenCoalgebra) -> GenCoalgebra:
    # erase the last state's behaviour: pointwise below the original
    if not gen.states:
        return gen
    dyn = dict(gen.dynamics)
    dyn[gen.states[-1]] = kind.bottom()
    return GenCoalgebra(gen.states, dyn)


def law_pointwise_unfolding(kind: BehaviourKind, gen: GenCoalgebra,
                            depth: int) -> LawResult:
    """L3: a pointwise-smaller coalgebra has pointwise-similar unfoldings."""
    if not gen.states:
        return LawResult("L3", "inconclusive", "empty generator")
    pruned = _prune_gen(kind, gen)
    mf = gen_to_model(kind, pruned)
    mg = gen_to_model(kind, gen)
    for x in gen.states:
        uf = unfold(mf, Var(x), depth)
        ug = unfold(mg, Var(x), depth)
        if not depth_similarity(kind, uf, ug, depth, require_labels=True):
            return LawResult("L3", "fail", {"state": x})
    return LawResult("L3", "pass", {"states": len(gen.states), "depth": depth})


def law_hom_preserves_similarity(kind: BehaviourKind, gsrc: GenCoalgebra,
                                 gdst: GenCoalgebra, hom: Union[Mapping, None],
                                 depth: int) -> LawResult:
    """L2: images of depth-similar states stay depth-similar."""
    if hom is None:
        return LawResult("L2", "inconclusive", "no homomorphism available")
    if not is_homomorphism(kind, gsrc, gdst, hom):
        return LawResult("L2", "inconclusive", "supplied map is not a homomorphism")
    msrc = gen_to_model(kind, gsrc)
    mdst = gen_to_model(kind, gdst)
    checked = 0
    for x in gsrc.states:
        for y in gsrc.states:
            ux = unfold(msrc, Var(x), depth)
            uy = unfold(msrc, Var(y), depth)
            if not depth_similarity(kind, ux, uy, depth, require_labels=False):
                continue
            checked += 1
            hx = unfold(mdst, Var(hom[x]), depth)
            hy = unfold(mdst, Var(hom[y]), depth)
            if not depth_similarity(kind, hx, hy, depth, require_labels=False):
                return LawResult("L2", "fail", {"pair": [x, y]})
    if not checked:
        return LawResult("L2", "inconclusive", "no depth-similar pairs")
    return LawResult("L2", "pass", {"pairs": checked, "depth": depth})


def law_term_map_hom(spec: Spec, gsrc: GenCoalgebra, gdst: GenCoalgebra,
                     hom: Union[Mapping, None], depth: int,
                     policy: UniversePolicy, max_terms: int) -> LawResult:
    """T1: the term-map extension of a homomorphism is a homomorphism.

    Checked as tree equality to the given depth; terms whose trees reach a
    frontier or tainted node on either side are skipped, since their
    recorded behaviour is not the untruncated one.
    """
    kind = spec.kind
    if hom is None or not is_homomorphism(kind, gsrc, gdst, hom):
        return LawResult("T1", "inconclusive", "no homomorphism available")
    lift_src = lift_coalgebra(spec, gsrc, _lift_seeds(spec, gsrc), policy)
    binding = {x: Var(hom[x]) for x in gsrc.states}

    def tmap(t: Term) -> Term:
        return substitute(t, binding)

    images = [tmap(t) for t in lift_src.universe]
    lift_dst = lift_coalgebra(spec, gdst, _lift_seeds(spec, gdst) + images, policy)
    known = set(lift_dst.universe)
    checked = skipped = 0
    for t in lift_src.universe[:max_terms]:
        image = tmap(t)
        if image not in known:
            skipped += 1
            continue
        u = unfold(lift_src, t, depth)
        v = unfold(lift_dst, image, depth)
        if touches_frontier(kind, u) or touches_frontier(kind, v):
            skipped += 1
            continue
        checked += 1
        if map_unfold(kind, u, tmap) != v:
            return LawResult("T1", "fail", {"term": print_term(t)})
    if not checked:
        return LawResult("T1", "inconclusive", "universe too small")
    return LawResult("T1", "pass", {"checked": checked, "skipped": skipped,
                                    "depth": depth})


def law_unit_hom(spec: Spec, gen: GenCoalgebra, policy: UniversePolicy) -> LawResult:
    """T2-eta: generator states keep their dynamics verbatim inside the lift."""
    kind = spec.kind
    if not gen.states:
        return LawResult("T2-eta", "inconclusive", "empty generator")
    lifted = lift_coalgebra(spec, gen, _lift_seeds(spec, gen), policy)
    for x in gen.states:
        want = kind.map_states(lambda y: Var(y), gen.dynamics[x])
        if lifted.step(Var(x)) != want:
            return LawResult("T2-eta", "fail", {"state": x})
    return LawResult("T2-eta", "pass", {"states": len(gen.states)})


def doubled_lift(spec: Spec, inner: Model, policy: UniversePolicy) -> tuple:
    """Lift the lifted model again, inner carrier terms becoming states.

    Returns (outer generator, outer model, decode) where decode maps a
    generator state name back to the inner term it stands for.  State names
    are synthetic (q0, q1, ...) because printed terms may collide with
    operator names.
    """
    kind = spec.kind
    carrier = inner.carrier()
    names: dict = {}
    decode: dict = {}
    for i, t in enumerate(carrier):
        name = _fresh_name(f"q{i}", spec.sig)
        names[t] = name
        decode[name] = t
    dyn = {}
    for t in carrier:
        if t in inner.frontier:
            dyn[names[t]] = kind.bottom()
        else:
            dyn[names[t]] = kind.map_states(names, inner.step(t))
    gen = GenCoalgebra(tuple(names[t] for t in carrier), dyn)
    outer = lift_coalgebra(spec, gen, _lift_seeds(spec, gen), policy)
    return gen, outer, decode


def law_flatten_hom(spec: Spec, inner: Model, outer: Model, decode: Mapping,
                    depth: int, max_terms: int) -> LawResult:
    """T2-mu: substituting inner terms for their state names is a
    homomorphism from the doubled lift onto the inner lift."""
    kind = spec.kind
    binding = dict(decode)

    def flatten(t: Term) -> Term:
        return substitute(t, binding)

    known = set(inner.universe)
    checked = skipped = 0
    for t in outer.universe[:max_terms]:
        flat = flatten(t)
        if flat not in known:
            skipped += 1
            continue
        u = unfold(outer, t, depth)
        v = unfold(inner, flat, depth)
        if touches_frontier(kind, u) or touches_frontier(kind, v):
            skipped += 1
            continue
        checked += 1
        if map_unfold(kind, u, flatten) != v:
            return LawResult("T2-mu", "fail", {"term": print_term(t)})
    if not checked:
        return LawResult("T2-mu", "inconclusive", "universe too small")
    return LawResult("T2-mu", "pass", {"checked": checked, "skipped": skipped,
                                       "depth": depth})


def law_suite(spec: Spec, config: Union[LawConfig, None] = None) -> tuple:
    """Run the five depth-bounded law checks; results in a fixed order."""
    config = config if config is not None else LawConfig()
    kind = spec.kind
    gens = tuple(config.generators) or default_generators(kind, spec.sig)
    gsmall = gens[0]
    gbig = gens[-1]
    if config.hom is not None:
        hom: Union[dict, None] = dict(config.hom)
    elif len(gens) == 1:
        hom = {x: x for x in gbig.states}
    else:
        collapse = {x: gsmall.states[0] for x in gbig.states} if gsmall.states else None
        hom = collapse if collapse and is_homomorphism(kind, gbig, gsmall, collapse) \
            else None

    results = [
        law_pointwise_unfolding(kind, gbig, config.depth),
        law_hom_preserves_similarity(kind, gbig, gsmall, hom, config.depth),
        law_term_map_hom(spec, gbig, gsmall, hom, config.depth, config.policy,
                         config.max_terms),
        law_unit_hom(spec, gsmall, config.policy),
    ]
    inner = lift_coalgebra(spec, gsmall, _lift_seeds(spec, gsmall), config.policy)
    _, outer, decode = doubled_lift(spec, inner, config.policy)
    results.append(law_flatten_hom(spec, inner, outer, decode, config.depth,
                                   config.max_terms))
    return tuple(results)


def suite_to_json(results: Iterable[LawResult]) -> list:
    return [r.to_json() for r in results]
