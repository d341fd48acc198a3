"""Lattice-valued top-down tree recognizers and their evaluation semantics.

A deterministic recognizer meets the final weights found at the frontier of
its single run; a nondeterministic one joins over all runs.  The general
nondeterministic form additionally weights transitions and initial states and
can always be rewritten into the simple form when the lattice is distributive.
"""

from __future__ import annotations

from .automata import NdtAlgebra
from .errors import (
    AlphabetMismatchError,
    LatticeMismatchError,
    NonDistributiveLatticeError,
    ValidationError,
)
from .terms import HOLE


def _is_single_state(start, states):
    try:
        return start in set(states)
    except TypeError:  # unhashable: must be a collection of states
        return False


def _check_weights(lattice, alphabet, states, weights):
    table = {}
    state_set = set(states)
    for x in alphabet.leaves:
        row = dict(weights.get(x, {}))
        for a, v in row.items():
            if a not in state_set:
                raise ValidationError(f"final weight for unknown state {a!r}")
            lattice.check(v)
        for a in states:
            row.setdefault(a, lattice.bottom)
        table[x] = row
    return table


class LDtRecognizer:
    """Deterministic recognizer assigning each tree a lattice degree.

    The degree of a tree is the meet of the final weights of the leaf/state
    pairs its unique run produces; a leaf alone scores its own weight at the
    initial state.
    """

    __slots__ = ("lattice", "algebra", "initial", "weights")

    def __init__(self, lattice, algebra, initial, weights):
        if initial not in set(algebra.states):
            raise ValidationError(f"unknown initial state {initial!r}")
        self.lattice = lattice
        self.algebra = algebra
        self.initial = initial
        self.weights = _check_weights(lattice, algebra.alphabet, algebra.states, weights)

    @property
    def alphabet(self):
        return self.algebra.alphabet

    def degree(self, t, start=None, _memo=None):
        """The acceptance degree of `t` from `start` (default: initial state)."""
        a = self.initial if start is None else start
        memo = {} if _memo is None else _memo
        meet = self.lattice.meet
        step = self.algebra.step

        def go(node, state):
            if node.is_leaf:
                return self.weights[node.symbol][state]
            key = (node, state)
            got = memo.get(key)
            if got is not None:
                return got
            targets = step(node.symbol, state)
            acc = go(node.children[0], targets[0])
            for c, b in zip(node.children[1:], targets[1:]):
                acc = meet(acc, go(c, b))
            memo[key] = acc
            return acc

        return go(t, a)

    def degree_map(self, trees, start=None):
        """Degrees of many trees sharing one memo; useful for enumerations."""
        memo = {}
        return {t: self.degree(t, start, _memo=memo) for t in trees}

    def degree_by_paths(self, t, start=None):
        """Same degree computed from the run frontier instead of the recursion."""
        a = self.initial if start is None else start
        pairs = self.algebra.leaf_run(t, a)
        return self.lattice.meet_all(self.weights[x][b] for x, b in sorted(pairs, key=repr))

    def context_degree(self, start, context):
        """Degree contributed by the non-hole leaves plus the state at the hole.

        A bare hole contributes the top element (empty meet) and leaves the
        state unchanged.
        """
        end = [None]
        values = []

        def walk(node, a):
            if node.is_leaf:
                if node.symbol == HOLE:
                    end[0] = a
                else:
                    values.append(self.weights[node.symbol][a])
                return
            for c, b in zip(node.children, self.algebra.step(node.symbol, a)):
                walk(c, b)

        walk(context.tree, start)
        value = self.lattice.meet_all(values) if values else self.lattice.top
        return value, end[0]

    def final_weights(self):
        """All weights appearing in the final table."""
        return frozenset(v for row in self.weights.values() for v in row.values())

    def final_weight_closure(self):
        """Meet-closure of the final weights; every degree lands in it."""
        return self.lattice.meet_closure(self.final_weights())


class LNdtRecognizer:
    """Nondeterministic recognizer: joins the meet-degree over all runs."""

    __slots__ = ("lattice", "algebra", "initial", "weights")

    def __init__(self, lattice, algebra, initial, weights):
        initial = frozenset(initial)
        if not initial <= set(algebra.states):
            raise ValidationError("unknown initial state")
        self.lattice = lattice
        self.algebra = algebra
        self.initial = initial
        self.weights = _check_weights(lattice, algebra.alphabet, algebra.states, weights)

    @property
    def alphabet(self):
        return self.algebra.alphabet

    def state_degrees(self, t, _memo=None):
        """The vector of degrees of `t` from every state, memoized bottom-up."""
        memo = {} if _memo is None else _memo
        lat = self.lattice
        got = memo.get(t)
        if got is not None:
            return got
        if t.is_leaf:
            result = {a: self.weights[t.symbol][a] for a in self.algebra.states}
        else:
            child_vectors = [self.state_degrees(c, _memo=memo) for c in t.children]
            result = {}
            for a in self.algebra.states:
                acc = lat.bottom
                for tup in self.algebra.choices(t.symbol, a):
                    v = child_vectors[0][tup[0]]
                    for vec, b in zip(child_vectors[1:], tup[1:]):
                        v = lat.meet(v, vec[b])
                    acc = lat.join(acc, v)
                result[a] = acc
        memo[t] = result
        return result

    def degree(self, t, start=None, _memo=None):
        """Degree from a state, a set of states, or the initial set."""
        if start is None:
            start = self.initial
        vector = self.state_degrees(t, _memo=_memo)
        if _is_single_state(start, self.algebra.states):
            return vector[start]
        acc = self.lattice.bottom
        for a in start:
            acc = self.lattice.join(acc, vector[a])
        return acc

    def degree_map(self, trees, start=None):
        memo = {}
        return {t: self.degree(t, start, _memo=memo) for t in trees}

    def final_weights(self):
        return frozenset(v for row in self.weights.values() for v in row.values())

    def final_weight_closure(self):
        return self.lattice.meet_closure(self.final_weights())


class GeneralLNdtRecognizer:
    """Nondeterministic recognizer with weighted transitions and initial states.

    Transition weights are stored sparsely; missing entries weigh bottom.
    Evaluation requires a distributive lattice.
    """

    __slots__ = ("lattice", "alphabet", "states", "transition_weights", "initial_weights", "weights")

    def __init__(self, lattice, alphabet, states, transition_weights, initial_weights, weights):
        states = tuple(states)
        state_set = set(states)
        table = {}
        for f, m in alphabet.symbols:
            rows = {}
            for key, v in transition_weights.get(f, {}).items():
                state, tup = key[0], tuple(key[1])
                if state not in state_set or not set(tup) <= state_set or len(tup) != m:
                    raise ValidationError(f"bad weighted transition for {f!r}: {key!r}")
                lattice.check(v)
                rows[(state, tup)] = v
            table[f] = rows
        initial_table = {}
        for a in states:
            v = initial_weights.get(a, lattice.bottom)
            lattice.check(v)
            initial_table[a] = v
        self.lattice = lattice
        self.alphabet = alphabet
        self.states = states
        self.transition_weights = table
        self.initial_weights = initial_table
        self.weights = _check_weights(lattice, alphabet, states, weights)

    def require_distributive(self):
        if not self.lattice.is_distributive():
            raise NonDistributiveLatticeError("general recognizers need a distributive lattice")

    def transition_weight(self, f, state, tup):
        return self.transition_weights[f].get((state, tuple(tup)), self.lattice.bottom)

    def state_degrees(self, t, _memo=None):
        self.require_distributive()
        memo = {} if _memo is None else _memo
        lat = self.lattice
        got = memo.get(t)
        if got is not None:
            return got
        if t.is_leaf:
            result = {a: self.weights[t.symbol][a] for a in self.states}
        else:
            child_vectors = [self.state_degrees(c, _memo=memo) for c in t.children]
            result = {}
            for a in self.states:
                acc = lat.bottom
                for (state, tup), c in self.transition_weights[t.symbol].items():
                    if state != a:
                        continue
                    v = c
                    for vec, b in zip(child_vectors, tup):
                        v = lat.meet(v, vec[b])
                    acc = lat.join(acc, v)
                result[a] = acc
        memo[t] = result
        return result

    def degree(self, t, _memo=None):
        vector = self.state_degrees(t, _memo=_memo)
        acc = self.lattice.bottom
        for a in self.states:
            acc = self.lattice.join(acc, self.lattice.meet(self.initial_weights[a], vector[a]))
        return acc

    def degree_map(self, trees):
        memo = {}
        return {t: self.degree(t, _memo=memo) for t in trees}

    def used_weights(self):
        """Every transition/final weight mentioned by the recognizer."""
        out = set()
        for rows in self.transition_weights.values():
            out |= set(rows.values())
        for row in self.weights.values():
            out |= set(row.values())
        return frozenset(out)


# -- conversions ----------------------------------------------------------

def dt_to_ndt(rec):
    """View a deterministic recognizer as a singleton-transition NDT one."""
    transitions = {
        f: {a: (rec.algebra.step(f, a),) for a in rec.algebra.states}
        for f, _ in rec.alphabet.symbols
    }
    algebra = NdtAlgebra(rec.alphabet, rec.algebra.states, transitions)
    return LNdtRecognizer(rec.lattice, algebra, [rec.initial], rec.weights)


def general_to_simple(rec):
    """Push transition and initial weights into states.

    States of the result are (state, accumulated weight) pairs; only pairs
    reachable from the weighted initial set are materialized.
    """
    rec.require_distributive()
    lat = rec.lattice
    initial = frozenset((a, rec.initial_weights[a]) for a in rec.states)
    seen = set(initial)
    queue = list(initial)
    transitions = {f: {} for f, _ in rec.alphabet.symbols}
    while queue:
        state = queue.pop(0)
        a, d = state
        for f, m in rec.alphabet.symbols:
            choices = []
            for (source, tup), c in sorted(rec.transition_weights[f].items(), key=repr):
                if source != a:
                    continue
                shared = lat.meet(d, c)
                target = tuple((b, shared) for b in tup)
                choices.append(target)
                for child in target:
                    if child not in seen:
                        seen.add(child)
                        queue.append(child)
            transitions[f][state] = tuple(choices)
    states = sorted(seen, key=repr)
    for f, _ in rec.alphabet.symbols:
        for s in states:
            transitions[f].setdefault(s, ())
    weights = {
        x: {(a, d): lat.meet(rec.weights[x][a], d) for (a, d) in states}
        for x in rec.alphabet.leaves
    }
    algebra = NdtAlgebra(rec.alphabet, states, transitions)
    return LNdtRecognizer(lat, algebra, initial, weights)


def from_finite_language(lattice, alphabet, support):
    """An NDT recognizer for a finite-support fuzzy language.

    One component per support tree: its states are the positions of the tree,
    transitions follow the shape, and every frontier weight is the tree's
    degree, so exactly that tree evaluates to its degree from the component
    root and everything else to bottom.
    """
    states = []
    transitions = {f: {} for f, _ in alphabet.symbols}
    weights = {x: {} for x in alphabet.leaves}
    roots = []
    for n, (t, value) in enumerate(sorted(support.items(), key=lambda kv: str(kv[0]))):
        if value == lattice.bottom:
            continue
        lattice.check(value)
        alphabet.validate_tree(t)

        def add(node, pos):
            state = f"t{n}" + "".join(f".{i}" for i in pos)
            states.append(state)
            if node.is_leaf:
                weights[node.symbol][state] = value
            else:
                child_states = [add(c, pos + (i,)) for i, c in enumerate(node.children, 1)]
                transitions[node.symbol][state] = (tuple(child_states),)
            return state

        roots.append(add(t, ()))
    if not states:
        states = ["dead"]
    algebra = NdtAlgebra(alphabet, states, transitions)
    return LNdtRecognizer(lattice, algebra, roots, weights)


def check_same_alphabet(*recs):
    first = recs[0].alphabet
    for r in recs[1:]:
        if r.alphabet != first:
            raise AlphabetMismatchError("recognizers use different alphabets")


def check_same_lattice(*recs):
    first = recs[0].lattice
    for r in recs[1:]:
        if r.lattice != first:
            raise LatticeMismatchError("recognizers use different lattices")
