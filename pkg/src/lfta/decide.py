"""Decision procedures for fuzzy top-down recognizers.

The procedures rest on two facts: every degree a deterministic recognizer can
produce lies in the meet-closure of its final weights, and any sufficiently
tall tree can be pumped without changing its degree.  Instead of literally
enumerating trees up to the pumping bounds, the deciders run bottom-up
fixpoints over the sets of attainable degrees (or degree vectors), which the
bounds prove exhaustive; witness trees are carried alongside so every negative
answer comes with a checkable counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .automata import NdtAlgebra, NdtRecognizer
from .errors import (
    BudgetExceededError,
    ForeignElementError,
    NonDistributiveLatticeError,
    TreeTooShortError,
)
from .recognizers import check_same_alphabet, check_same_lattice
from .terms import Context, Tree, context_at

DEFAULT_BUDGET = 10**6


def height_bound(rec):
    """Every attainable degree is hit by a tree no taller than this."""
    closure_size = len(rec.final_weight_closure())
    return (closure_size + 1) * len(rec.algebra.states)


@dataclass
class PumpDecomposition:
    """A split t = prefix . loop . suffix whose pumps all score alike."""

    prefix: Context
    loop: Context
    suffix: Tree

    def pumped(self, k):
        t = self.suffix
        for _ in range(k):
            t = self.loop.fill(t)
        return self.prefix.fill(t)


def pump_decompose(rec, t):
    """Find a degree-preserving loop in a tree above the height bound.

    Walks a maximal path of the run, picks a state repeating often enough,
    and chooses the loop where the accumulated context degree stops
    decreasing; pumping that loop leaves the degree fixed.
    """
    bound = height_bound(rec)
    if t.height < bound + 1:
        raise TreeTooShortError(f"need height >= {bound + 1}, got {t.height}")

    # maximal path as a list of child-index positions (leftmost of the tallest)
    positions = [()]
    node = t
    while not node.is_leaf:
        best = max(range(len(node.children)), key=lambda i: node.children[i].height)
        positions.append(positions[-1] + (best,))
        node = node.children[best]

    states = [rec.initial]
    for pos in positions[1:]:
        parent = t
        for i in pos[:-1]:
            parent = parent.children[i]
        states.append(rec.algebra.step(parent.symbol, states[-1])[pos[-1]])

    closure_size = len(rec.final_weight_closure())
    wanted = closure_size + 2
    repeated = None
    for a in rec.algebra.states:
        spots = [i for i, s in enumerate(states[:-1]) if s == a]
        if len(spots) >= wanted:
            repeated = spots[:wanted]
            break
    assert repeated is not None, "pigeonhole violated; height bound is wrong"

    # contexts between consecutive occurrences of the repeated state
    cuts = repeated
    prefix_ctx, _ = context_at(t, positions[cuts[0]])
    loops = []
    for lo, hi in zip(cuts, cuts[1:]):
        outer, _ = context_at(t, positions[hi])
        # the loop is the part of `outer` strictly below position lo
        _, loop_shape = context_at(outer.tree, positions[lo])
        loops.append(Context(loop_shape))
    _, suffix0 = context_at(t, positions[cuts[-1]])

    values = [rec.context_degree(rec.initial, prefix_ctx)[0]]
    acc = prefix_ctx
    for q in loops:
        acc = acc.fill(q)
        values.append(rec.context_degree(rec.initial, acc)[0])
    chosen = None
    for j in range(1, len(values)):
        if values[j - 1] == values[j]:
            chosen = j
            break
    assert chosen is not None, "no stabilizing loop; closure bound is wrong"

    prefix = prefix_ctx
    for q in loops[: chosen - 1]:
        prefix = prefix.fill(q)
    suffix = suffix0
    for q in reversed(loops[chosen:]):
        suffix = q.fill(suffix)
    decomposition = PumpDecomposition(prefix, loops[chosen - 1], suffix)

    assert decomposition.pumped(1) == t, "decomposition does not rebuild the tree"
    base = rec.degree(t)
    for k in range(4):
        assert rec.degree(decomposition.pumped(k)) == base, "pump changed the degree"
    return decomposition


def _attainable(rec):
    """Per-state sets of attainable degrees with witness trees (fixpoint)."""
    lat = rec.lattice
    table = {a: {} for a in rec.algebra.states}
    for x in rec.alphabet.leaves:
        for a in rec.algebra.states:
            table[a].setdefault(rec.weights[x][a], Tree(x))
    grew = True
    while grew:
        grew = False
        for f, m in rec.alphabet.symbols:
            for a in rec.algebra.states:
                targets = rec.algebra.step(f, a)
                options = [sorted(table[b].items(), key=repr) for b in targets]
                for combo in iproduct(*options):
                    value = combo[0][0]
                    for v, _ in combo[1:]:
                        value = lat.meet(value, v)
                    if value not in table[a]:
                        table[a][value] = Tree(f, [w for _, w in combo])
                        grew = True
    return table


def value_range(rec):
    """The exact set of degrees the recognizer attains."""
    return frozenset(_attainable(rec)[rec.initial])


def range_witnesses(rec):
    """One tree per attainable degree."""
    return dict(_attainable(rec)[rec.initial])


def is_empty_support(rec):
    return value_range(rec) == {rec.lattice.bottom}


def is_constant(rec):
    return len(value_range(rec)) == 1


def is_crisp(rec):
    return value_range(rec) <= {rec.lattice.bottom, rec.lattice.top}


def is_finite_support(rec):
    """Whether only finitely many trees score above bottom.

    The support is infinite exactly when some tree taller than the height
    bound scores a nonzero degree (it pumps up); any such witness pumps down
    into the window (bound, 2*(bound+1)], so an exact-height scan of that
    window decides the question.
    """
    lat = rec.lattice
    bound = height_bound(rec)
    cumulative = {a: set() for a in rec.algebra.states}
    exact = {a: set() for a in rec.algebra.states}
    for x in rec.alphabet.leaves:
        for a in rec.algebra.states:
            exact[a].add(rec.weights[x][a])
    for h in range(1, 2 * (bound + 1) + 1):
        for a in rec.algebra.states:
            cumulative[a] |= exact[a]
        fresh = {a: set() for a in rec.algebra.states}
        for f, m in rec.alphabet.symbols:
            for a in rec.algebra.states:
                targets = rec.algebra.step(f, a)
                for j in range(m):  # child j realizes the previous height exactly
                    pools = [
                        sorted(exact[b]) if i == j else sorted(cumulative[b])
                        for i, b in enumerate(targets)
                    ]
                    for combo in iproduct(*pools):
                        fresh[a].add(lat.meet_all(combo))
        exact = fresh
        if h > bound and any(v != lat.bottom for v in exact[rec.initial]):
            return False
    return True


@dataclass
class Comparison:
    included: bool
    equivalent: bool
    disjoint: bool
    inclusion_witness: Tree | None = None
    equivalence_witness: Tree | None = None
    disjointness_witness: Tree | None = None


def compare(f_rec, g_rec):
    """Inclusion, equivalence and disjointness of two DT recognizers.

    Runs the attainable-pair fixpoint over the product automaton; the set it
    computes is the exact range of simultaneous degree pairs, so each verdict
    comes with a witness tree when it is negative.
    """
    check_same_alphabet(f_rec, g_rec)
    check_same_lattice(f_rec, g_rec)
    lat = f_rec.lattice
    start = (f_rec.initial, g_rec.initial)
    states = [(a, b) for a in f_rec.algebra.states for b in g_rec.algebra.states]
    table = {s: {} for s in states}
    for x in f_rec.alphabet.leaves:
        for a, b in states:
            table[(a, b)].setdefault((f_rec.weights[x][a], g_rec.weights[x][b]), Tree(x))
    grew = True
    while grew:
        grew = False
        for f, m in f_rec.alphabet.symbols:
            for a, b in states:
                ta = f_rec.algebra.step(f, a)
                tb = g_rec.algebra.step(f, b)
                options = [sorted(table[(ca, cb)].items(), key=repr) for ca, cb in zip(ta, tb)]
                for combo in iproduct(*options):
                    u = combo[0][0][0]
                    v = combo[0][0][1]
                    for (u2, v2), _ in combo[1:]:
                        u = lat.meet(u, u2)
                        v = lat.meet(v, v2)
                    if (u, v) not in table[(a, b)]:
                        table[(a, b)][(u, v)] = Tree(f, [w for _, w in combo])
                        grew = True
    pairs = table[start]
    included, equivalent, disjoint = True, True, True
    inc_w = eq_w = dis_w = None
    for (u, v), witness in sorted(pairs.items(), key=repr):
        if included and not lat.leq(u, v):
            included, inc_w = False, witness
        if equivalent and u != v:
            equivalent, eq_w = False, witness
        if disjoint and lat.meet(u, v) != lat.bottom:
            disjoint, dis_w = False, witness
    return Comparison(included, equivalent, disjoint, inc_w, eq_w, dis_w)


def _joint_vectors(nf, ng, budget):
    """Attainable joint degree vectors of two NDT recognizers on shared trees."""
    lat = nf.lattice
    states = [("L", a) for a in nf.algebra.states] + [("R", b) for b in ng.algebra.states]
    index = {s: i for i, s in enumerate(states)}

    def vector_for(symbol, child_vectors):
        out = []
        for side, a in states:
            rec = nf if side == "L" else ng
            acc = lat.bottom
            for tup in rec.algebra.choices(symbol, a):
                v = lat.top
                for vec, b in zip(child_vectors, tup):
                    v = lat.meet(v, vec[index[(side, b)]])
                acc = lat.join(acc, v)
            out.append(acc)
        return tuple(out)

    vectors = {}
    for x in nf.alphabet.leaves:
        vec = tuple(
            (nf if side == "L" else ng).weights[x][a] for side, a in states
        )
        vectors.setdefault(vec, Tree(x))
    frontier = set(vectors)
    while frontier:
        fresh = set()
        known = list(vectors.items())
        for f, m in nf.alphabet.symbols:
            for combo in iproduct(known, repeat=m):
                if not any(vec in frontier for vec, _ in combo):
                    continue
                vec = vector_for(f, [v for v, _ in combo])
                if vec not in vectors:
                    vectors[vec] = Tree(f, [w for _, w in combo])
                    fresh.add(vec)
                    if len(vectors) > budget:
                        raise BudgetExceededError("degree-vector fixpoint exceeded budget")
        frontier = fresh
    return states, vectors


def ndt_compare(nf, ng, budget=DEFAULT_BUDGET):
    """Equivalence of two NDT recognizers, with a counterexample if distinct."""
    check_same_alphabet(nf, ng)
    check_same_lattice(nf, ng)
    if not nf.lattice.is_distributive():
        raise NonDistributiveLatticeError("NDT equivalence needs a distributive lattice")
    lat = nf.lattice
    states, vectors = _joint_vectors(nf, ng, budget)
    index = {s: i for i, s in enumerate(states)}
    for vec, witness in sorted(vectors.items(), key=repr):
        left = lat.bottom
        for a in nf.initial:
            left = lat.join(left, vec[index[("L", a)]])
        right = lat.bottom
        for b in ng.initial:
            right = lat.join(right, vec[index[("R", b)]])
        if left != right:
            return False, witness
    return True, None


def ndt_equivalent(nf, ng, budget=DEFAULT_BUDGET):
    return ndt_compare(nf, ng, budget)[0]


def level_set(rec, d):
    """Crisp NDT recognizer of the trees scoring exactly `d`.

    States pair an original state with the degree still to be produced below
    it; a branching guesses how the target degree splits into a meet over the
    children.  Values outside the final-weight meet-closure give the empty
    recognizer (no tree attains them).
    """
    rec.lattice.check(d)
    lat = rec.lattice
    closure = sorted(rec.final_weight_closure(), key=rec.lattice.elements.index)
    states = [(a, c) for a in rec.algebra.states for c in closure]
    transitions = {}
    for f, m in rec.alphabet.symbols:
        rows = {}
        for a, c in states:
            targets = rec.algebra.step(f, a)
            choices = []
            for combo in iproduct(closure, repeat=m):
                if lat.meet_all(combo) == c:
                    choices.append(tuple(zip(targets, combo)))
            rows[(a, c)] = tuple(choices)
        transitions[f] = rows
    algebra = NdtAlgebra(rec.alphabet, states, transitions)
    final = {
        x: {(a, rec.weights[x][a]) for a in rec.algebra.states}
        for x in rec.alphabet.leaves
    }
    initial = [(rec.initial, d)] if d in set(closure) else []
    return NdtRecognizer(algebra, initial, final)


def level_in_domain(rec, d):
    """Whether `d` can be attained at all (lies in the weight meet-closure)."""
    rec.lattice.check(d)
    return d in rec.final_weight_closure()


def level_preimage_nonempty(rec, values):
    """Whether some value in `values` is attained by some tree."""
    for d in values:
        if d not in rec.lattice:
            raise ForeignElementError(f"{d!r} not in the recognizer's lattice")
        if level_in_domain(rec, d) and level_set(rec, d).nonempty():
            return True
    return False
