"""Least supported models by fixed-point iteration, and finite unfoldings.

The one-step operator interprets every rule against the current model: head
variables bind argument subterms, premises are matched by walking the model's
behaviour map (frontier terms read as bottom, so truncation under-approximates
soundly), and each complete match contributes its instantiated conclusion.
Iterating from the all-bottom model climbs an increasing chain for monotone
specs; the loop stops on a fixed point, on a detected period-2 oscillation
(possible only with negative premises, behind the force flag), or at the step
budget.  The universe grows by the subterm closures of in-cap conclusion
targets, since rule heads need their argument subterms' behaviour.

A generator designates opaque variable states whose behaviour is injected
verbatim each step; running the same iteration over terms with generator
variables lifts a coalgebra on the generator states to one on all such terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .behaviour import BehaviourKind, Bottom, StreamStep, label_key, state_key
from .errors import (BigsosError, InconsistentStreamError, LabelEvalError,
                     NonConvergenceError, NonMonotoneError, UnknownStateError)
from .speclang import (LabelLit, Positive, Spec, check_monotone,
                       eval_label, instantiate_template)
from .terms import (App, Term, UniversePolicy, Var, check_term, print_term, subterms,
                    substitute, term_key, term_size, variables)


@dataclass(frozen=True)
class Model:
    """A behaviour map over a finite term universe.

    Frontier terms are referenced by behaviour values but not solved for;
    they read as bottom.  tainted collects universe terms whose derivations
    consulted a frontier or tainted term, i.e. whose recorded behaviour may
    be smaller than the untruncated one.
    """

    kind: BehaviourKind
    universe: tuple
    behaviour: Mapping
    frontier: frozenset = frozenset()
    tainted: frozenset = frozenset()

    def step(self, t: Term):
        try:
            return self.behaviour[t]
        except KeyError:
            if t in self.frontier:
                return self.kind.bottom()
            raise UnknownStateError(f"term {print_term(t)} outside universe and frontier") from None

    def carrier(self) -> tuple:
        return self.universe + tuple(sorted(self.frontier, key=term_key))


def bottom_model(kind: BehaviourKind, universe: Iterable[Term]) -> Model:
    terms = tuple(sorted(set(universe), key=term_key))
    return Model(kind, terms, {t: kind.bottom() for t in terms}, frozenset())


class _ProbeModel:
    """Step proxy that records whether an under-resolved term was consulted."""

    def __init__(self, model: Model):
        self.model = model
        self.hit = False

    def step(self, t: Term):
        if t in self.model.frontier or t in self.model.tainted:
            self.hit = True
        return self.model.step(t)


@dataclass(frozen=True)
class ConvergenceReport:
    iterations: int
    converged: bool
    oscillation_detected: bool
    frontier_size: int

    def to_json(self) -> dict:
        return {"iterations": self.iterations, "converged": self.converged,
                "oscillation_detected": self.oscillation_detected,
                "frontier_size": self.frontier_size}


@dataclass(frozen=True)
class GenCoalgebra:
    """Finitely many opaque states with one behaviour value each."""

    states: tuple
    dynamics: Mapping

    def validate(self, kind: BehaviourKind, sig) -> None:
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate generator states")
        known = set(self.states)
        for x in self.states:
            if x in sig:
                raise ValueError(f"generator state {x!r} collides with an operator name")
            if x not in self.dynamics:
                raise ValueError(f"generator dynamics missing for state {x!r}")
            v = self.dynamics[x]
            for s in kind.states(v):
                if s not in known:
                    raise ValueError(f"dynamics of {x!r} references unknown state {s!r}")
            for lab, _ in kind.transitions(v):
                if not kind.has_label(lab):
                    raise ValueError(f"dynamics of {x!r} uses label {lab!r} outside the domain")


def gen_to_model(kind: BehaviourKind, gen: GenCoalgebra) -> Model:
    """The generator itself, viewed as a model on variable terms."""
    universe = tuple(sorted((Var(x) for x in gen.states), key=term_key))
    beh = {Var(x): kind.map_states(lambda y: Var(y), gen.dynamics[x]) for x in gen.states}
    return Model(kind, universe, beh, frozenset())


# --- rule application -----------------------------------------------------------


def _match_label(pattern, lab, env):
    """Extend env to make the premise label pattern equal lab, or None."""
    if isinstance(pattern, LabelLit):
        return env if pattern.value == lab else None
    if pattern.name in env:
        return env if env[pattern.name] == lab else None
    out = dict(env)
    out[pattern.name] = lab
    return out


def apply_rules(spec: Spec, model: Model, op: str, params: tuple, args: tuple):
    """Join of all rule conclusions derivable for op[params](args) in model."""
    kind = spec.kind
    contributions = []
    for rule in spec.rules_for(op):
        if len(rule.head_vars) != len(args) or len(rule.head_params) != len(params):
            continue
        envs = [(dict(zip(rule.head_vars, args)), dict(zip(rule.head_params, params)))]
        for p in rule.premises:
            grown = []
            for binding, labenv in envs:
                src = binding.get(p.source)
                if src is None:
                    continue
                value = model.step(src)
                if isinstance(p, Positive):
                    for lab, target in kind.transitions(value):
                        labenv2 = _match_label(p.label, lab, labenv)
                        if labenv2 is None:
                            continue
                        binding2 = dict(binding)
                        binding2[p.target] = target
                        grown.append((binding2, labenv2))
                else:
                    want = eval_label(p.label, labenv)
                    if all(have != want for have, _ in kind.transitions(value)):
                        grown.append((binding, labenv))
            envs = grown
            if not envs:
                break
        for binding, labenv in envs:
            lab = eval_label(rule.concl_label, labenv)
            if not kind.has_label(lab):
                raise LabelEvalError(
                    f"rule {rule.name}: conclusion label {lab!r} outside the label domain")
            target = substitute(instantiate_template(rule.concl_target, labenv), binding)
            contributions.append(kind.conclusion_value(lab, target))
    try:
        return kind.join(contributions)
    except InconsistentStreamError as exc:
        raise InconsistentStreamError(
            f"{print_term(App(op, params, args))}: {exc}") from None


def phi_step(spec: Spec, model: Model, gen: Union[GenCoalgebra, None] = None) -> Model:
    """One application of the rule bank across the universe.

    Generator variables take their dynamics verbatim (states injected as
    variable terms); conclusion targets outside the universe become frontier.
    Terms whose derivation consulted a frontier or tainted term are tainted:
    their value may under-report the untruncated behaviour.
    """
    kind = spec.kind
    beh = {}
    referenced: set = set()
    tainted: set = set()
    for t in model.universe:
        if isinstance(t, Var):
            if gen is not None and t.name in gen.dynamics:
                v = kind.map_states(lambda y: Var(y), gen.dynamics[t.name])
            else:
                raise UnknownStateError(f"variable term {t.name!r} has no generator dynamics")
        else:
            probe = _ProbeModel(model)
            v = apply_rules(spec, probe, t.op, t.params, t.args)
            if probe.hit:
                tainted.add(t)
        beh[t] = v
        referenced |= kind.states(v)
    inside = set(model.universe)
    frontier = frozenset(s for s in referenced if s not in inside)
    return Model(kind, model.universe, beh, frontier, frozenset(tainted))


# --- fixed-point iteration ------------------------------------------------------


def _subterm_closure(seedlike: Iterable[Term]) -> set:
    out: set = set()
    for t in seedlike:
        out.update(subterms(t))
    return out


def _promotions(model: Model, policy: UniversePolicy) -> list:
    """Frontier terms (with their subterm closures) that fit the caps."""
    if not policy.grow:
        return []
    inside = set(model.universe)
    budget = policy.max_count - len(inside)
    promoted: list = []
    taken: set = set()
    for t in sorted(model.frontier, key=term_key):
        if term_size(t) > policy.max_size:
            continue
        new = {s for s in subterms(t) if s not in inside and s not in taken}
        if len(new) > budget:
            continue
        budget -= len(new)
        taken |= new
        promoted.extend(new)
    return sorted(promoted, key=term_key)


def least_model(spec: Spec, seeds: Union[Iterable[Term], None] = None,
                policy: UniversePolicy = UniversePolicy(), max_iters: int = 1000,
                force: bool = False,
                gen: Union[GenCoalgebra, None] = None) -> tuple:
    """Kleene iteration from the all-bottom model; returns (model, report).

    Refuses non-monotone specs unless force is set, in which case a period-2
    oscillation stops the loop with oscillation_detected in the report.
    """
    mon = check_monotone(spec)
    if not mon.monotone and not force:
        raise NonMonotoneError(mon.offending_rules)
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    kind = spec.kind

    gen_states = set(gen.states) if gen is not None else set()
    if seeds is None:
        seeds = [App(name) for name in spec.sig.constants()]
    seeds = list(seeds)
    for s in seeds:
        check_term(s, spec.sig)
        loose = variables(s) - gen_states
        if loose:
            raise ValueError(f"seed {print_term(s)} has unbound variables {sorted(loose)}")
    if gen is not None:
        seeds.extend(Var(x) for x in gen.states)

    universe = tuple(sorted(_subterm_closure(seeds), key=term_key))
    m = bottom_model(kind, universe)
    prev_prev: Union[Model, None] = None
    converged = oscillating = False
    iters = 0
    while iters < max_iters:
        iters += 1
        m2 = phi_step(spec, m, gen)
        if mon.monotone:
            for t in m.universe:
                if not kind.leq(m.behaviour[t], m2.behaviour[t]):
                    raise BigsosError(
                        f"internal: iteration chain decreased at {print_term(t)}")
        promoted = _promotions(m2, policy)
        if promoted:
            new_universe = tuple(sorted(set(m2.universe) | set(promoted), key=term_key))
            beh = dict(m2.behaviour)
            for t in promoted:
                beh[t] = kind.bottom()
            referenced: set = set()
            for v in beh.values():
                referenced |= kind.states(v)
            inside = set(new_universe)
            m = Model(kind, new_universe, beh,
                      frozenset(s for s in referenced if s not in inside),
                      m2.tainted)
            prev_prev = None  # only same-universe models are comparable
            continue
        if m2 == m:
            converged = True
            m = m2
            break
        if prev_prev is not None and m2 == prev_prev:
            oscillating = True
            m = m2
            break
        prev_prev = m
        m = m2
    return m, ConvergenceReport(iters, converged, oscillating, len(m.frontier))


def lift_coalgebra(spec: Spec, gen: GenCoalgebra,
                   seeds: Union[Iterable[Term], None] = None,
                   policy: UniversePolicy = UniversePolicy(),
                   max_iters: int = 1000) -> Model:
    """Extend the generator's behaviour to all universe terms over its states."""
    gen.validate(spec.kind, spec.sig)
    model, report = least_model(spec, seeds, policy, max_iters, gen=gen)
    if not report.converged:
        raise NonConvergenceError(
            f"lifting did not stabilize within {report.iterations} iterations")
    return model


# --- unfoldings -----------------------------------------------------------------


@dataclass(frozen=True)
class UnfoldTree:
    """Finite-depth observation tree; step states are child trees.

    depth is the remaining budget at this node (0 means no step recorded);
    opaque marks a frontier or tainted term, whose step may under-report the
    untruncated behaviour.
    """

    root: Term
    depth: int
    step: object = None
    opaque: bool = False

    def sort_key(self):
        return ("tree", term_key(self.root), self.depth, self.opaque, _step_key(self.step))


def _step_key(step):
    if step is None:
        return ("none",)
    if isinstance(step, Bottom):
        return ("bot",)
    if isinstance(step, StreamStep):
        return ("ss", label_key(step.label), state_key(step.state))
    rows = getattr(step, "moves", ())
    return ("mv", tuple((label_key(lab), tuple(state_key(s) for s in _row_states(row)))
                        for lab, row in rows))


def _row_states(row):
    return [s[0] if isinstance(s, tuple) else s for s in row]


def unfold(model: Model, t: Term, depth: int) -> UnfoldTree:
    """Observe t in the model for `depth` steps."""
    if depth < 0:
        raise ValueError("depth must be a natural")
    value = model.step(t)  # also validates membership
    opaque = t in model.frontier or t in model.tainted
    if depth == 0:
        return UnfoldTree(t, 0, None, opaque)
    step = model.kind.map_states(lambda s: unfold(model, s, depth - 1), value)
    return UnfoldTree(t, depth, step, opaque)


def truncate_unfold(kind: BehaviourKind, tree: UnfoldTree, depth: int) -> UnfoldTree:
    if depth > tree.depth:
        raise ValueError("cannot deepen a recorded unfolding")
    if depth == tree.depth:
        return tree
    if depth == 0:
        return UnfoldTree(tree.root, 0, None, tree.opaque)
    step = kind.map_states(lambda sub: truncate_unfold(kind, sub, depth - 1), tree.step)
    return UnfoldTree(tree.root, depth, step, tree.opaque)


def map_unfold(kind: BehaviourKind, tree: UnfoldTree, term_map) -> UnfoldTree:
    """Rename every node root through term_map, keeping the tree shape."""
    step = tree.step
    if step is not None:
        step = kind.map_states(lambda sub: map_unfold(kind, sub, term_map), step)
    return UnfoldTree(term_map(tree.root), tree.depth, step, tree.opaque)


def touches_frontier(kind: BehaviourKind, tree: UnfoldTree) -> bool:
    if tree.opaque:
        return True
    if tree.step is None:
        return False
    return any(touches_frontier(kind, sub) for sub in kind.states(tree.step))


# --- serialization --------------------------------------------------------------


def model_to_json(model: Model, report: Union[ConvergenceReport, None] = None) -> dict:
    return {
        "universe": [print_term(t) for t in model.universe],
        "frontier": [print_term(t) for t in sorted(model.frontier, key=term_key)],
        "behaviour": {print_term(t): model.kind.value_json(model.behaviour[t], print_term)
                      for t in model.universe},
        "report": report.to_json() if report is not None else {},
    }


def model_to_dot(model: Model) -> str:
    """Graphviz digraph; labelled transition models only."""
    if model.kind.name != "lts":
        raise ValueError("dot export is only defined for lts models")
    lines = ["digraph model {", "  rankdir=LR;"]
    carrier = model.carrier()
    ids = {t: f"n{i}" for i, t in enumerate(carrier)}
    for t in carrier:
        style = ', style=dashed' if t in model.frontier else ""
        lines.append(f'  {ids[t]} [label="{print_term(t)}"{style}];')
    for t in model.universe:
        for lab, target in model.kind.transitions(model.behaviour[t]):
            lines.append(f'  {ids[t]} -> {ids[target]} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def unfold_to_json(kind: BehaviourKind, tree: UnfoldTree) -> dict:
    node: dict = {"term": print_term(tree.root), "depth": tree.depth}
    if tree.opaque:
        node["opaque"] = True
    if tree.step is None:
        node["step"] = None
    elif kind.name == "stream":
        node["step"] = (None if isinstance(tree.step, Bottom) else
                        {"label": tree.step.label,
                         "next": unfold_to_json(kind, tree.step.state)})
    elif kind.name == "lts":
        node["step"] = {str(lab): [unfold_to_json(kind, sub) for sub in subs]
                        for lab, subs in tree.step.moves}
    else:
        node["step"] = {str(lab): [{"weight": w, "next": unfold_to_json(kind, sub)}
                                   for sub, w in row]
                        for lab, row in tree.step.moves}
    return node
