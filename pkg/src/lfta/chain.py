"""Chain-valued recognizers: normalization, subset construction, path closure.

Over a totally ordered lattice each state has a well-defined best degree
M(a); a recognizer is normalized when sibling states under every transition
share that best degree.  Normalized recognizers make the subset construction
compute the fuzzy path closure, which yields the decision procedure for
deterministic recognizability.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import DtAlgebra, NdtAlgebra, subset_algebra
from .decide import ndt_compare
from .errors import NotAChainError, NotNormalizedError
from .paths import path_degree
from .recognizers import LDtRecognizer, LNdtRecognizer, _is_single_state, dt_to_ndt
from .terms import Tree

MAX_ROUNDS_SLACK = 1


def require_chain(lattice):
    if not lattice.is_chain():
        raise NotAChainError("operation needs a totally ordered lattice")


def _argmax(lat, items, value_of):
    """First item with the greatest value under the lattice order."""
    best_item = best_value = None
    for item in items:
        v = value_of(item)
        if best_value is None or (lat.leq(best_value, v) and v != best_value):
            best_item, best_value = item, v
    return best_item


@dataclass
class MaxTable:
    """Best attainable degree per state, with a tree attaining each."""

    values: dict
    witnesses: dict

    def __getitem__(self, state):
        return self.values[state]


def max_values(rec):
    """Fixpoint of the best-degree iteration, with attaining witness trees.

    Round k knows the best degree over trees of height <= k; the iteration
    stabilizes within (number of states) * (number of distinct weights)
    rounds, which is asserted.
    """
    require_chain(rec.lattice)
    lat = rec.lattice
    values, witnesses = {}, {}
    for a in rec.algebra.states:
        best_leaf = _argmax(lat, rec.alphabet.leaves, lambda x: rec.weights[x][a])
        values[a] = rec.weights[best_leaf][a]
        witnesses[a] = Tree(best_leaf)
    cap = len(rec.algebra.states) * max(1, len(rec.final_weights())) + MAX_ROUNDS_SLACK
    for _ in range(cap):
        changed = False
        for f, _ in rec.alphabet.symbols:
            for a in rec.algebra.states:
                for tup in rec.algebra.choices(f, a):
                    candidate = lat.meet_all(values[b] for b in tup)
                    if not lat.leq(candidate, values[a]):
                        values[a] = candidate
                        witnesses[a] = Tree(f, [witnesses[b] for b in tup])
                        changed = True
        if not changed:
            return MaxTable(values, witnesses)
    raise AssertionError("best-degree iteration failed to stabilize within its cap")


def is_normalized(rec):
    """Whether sibling states under every transition share the same best degree."""
    table = max_values(rec)
    for f, _ in rec.alphabet.symbols:
        for a in rec.algebra.states:
            for tup in rec.algebra.choices(f, a):
                if len({table[b] for b in tup}) > 1:
                    return False
    return True


def is_normalized_dt(rec):
    return is_normalized(dt_to_ndt(rec))


def normalize(rec):
    """An equivalent normalized recognizer.

    States pair an original state with a degree cap; each transition caps its
    children by the least best-degree among the siblings, which equalizes
    their best degrees without changing any tree's overall degree.  Only
    states reachable from the new initial set are kept.
    """
    require_chain(rec.lattice)
    lat = rec.lattice
    table = max_values(rec)
    initial = frozenset((a, table[a]) for a in rec.initial)
    seen = set(initial)
    queue = list(initial)
    transitions = {f: {} for f, _ in rec.alphabet.symbols}
    while queue:
        state = queue.pop(0)
        a, d = state
        for f, _ in rec.alphabet.symbols:
            choices = []
            for tup in rec.algebra.choices(f, a):
                cap = lat.meet_all(table[b] for b in tup)
                shared = lat.meet(d, cap)
                target = tuple((b, shared) for b in tup)
                choices.append(target)
                for child in target:
                    if child not in seen:
                        seen.add(child)
                        queue.append(child)
            transitions[f][state] = tuple(choices)
    states = sorted(seen, key=repr)
    weights = {
        x: {(a, d): lat.meet(rec.weights[x][a], d) for (a, d) in states}
        for x in rec.alphabet.leaves
    }
    algebra = NdtAlgebra(rec.alphabet, states, transitions)
    return LNdtRecognizer(lat, algebra, initial, weights)


def normalize_dt(rec):
    """Deterministic normalization; the construction stays deterministic."""
    require_chain(rec.lattice)
    normalized = normalize(dt_to_ndt(rec))
    transitions = {}
    for f, _ in rec.alphabet.symbols:
        rows = {}
        for state in normalized.algebra.states:
            choices = normalized.algebra.choices(f, state)
            assert len(choices) == 1, "normalization must keep deterministic inputs deterministic"
            rows[state] = choices[0]
        transitions[f] = rows
    algebra = DtAlgebra(rec.alphabet, normalized.algebra.states, transitions)
    (start,) = normalized.initial
    return LDtRecognizer(rec.lattice, algebra, start, normalized.weights)


def path_degree_ndt(rec, path, start=None):
    """Best final weight over all states the path can lead to (0 if none)."""
    require_chain(rec.lattice)
    lat = rec.lattice
    sources = rec.initial if start is None else (
        {start} if _is_single_state(start, rec.algebra.states) else set(start)
    )
    best = lat.bottom
    for a in sorted(sources, key=repr):
        for b in rec.algebra.path_states(a, path.letters):
            best = lat.join(best, rec.weights[path.leaf][b])
    return best


def subset_recognizer(rec):
    """Deterministic recognizer over reachable state sets, finals joined.

    Shares the original's path language: the set of states reachable along a
    path determines the best weight the original could realize there.
    """
    require_chain(rec.lattice)
    lat = rec.lattice
    algebra = subset_algebra(rec.algebra, starts=[rec.initial])
    weights = {}
    for x in rec.alphabet.leaves:
        row = {}
        for subset in algebra.states:
            best = lat.bottom
            for a in subset:
                best = lat.join(best, rec.weights[x][a])
            row[subset] = best
        weights[x] = row
    return LDtRecognizer(lat, algebra, frozenset(rec.initial), weights)


def path_closure_recognizer(rec):
    """Deterministic recognizer of the fuzzy path closure of the language."""
    return subset_recognizer(normalize(rec))


def is_dt_recognizable(rec):
    """Whether the recognized language is deterministically recognizable.

    Holds exactly when the language equals its own path closure, i.e. when
    the subset recognizer of a normalized form is equivalent to it.
    """
    require_chain(rec.lattice)
    normalized = normalize(rec)
    closure = subset_recognizer(normalized)
    return ndt_compare(dt_to_ndt(closure), normalized)[0]


def _spine(alphabet, letters, leaf, filler):
    if not letters:
        return Tree(leaf)
    (f, i), rest = letters[0], letters[1:]
    children = []
    for j in range(1, alphabet.arity(f) + 1):
        children.append(_spine(alphabet, rest, leaf, filler) if j == i else Tree(filler))
    return Tree(f, children)


def witness_tree(rec, path):
    """A tree containing the path whose degree equals the path's degree.

    Follows the transition choices that realize the path's best weight and
    pads the side branches with trees attaining each sibling's best degree;
    normalization makes those pads score no worse than the path branch.
    """
    require_chain(rec.lattice)
    if not is_normalized(rec):
        raise NotNormalizedError("witness construction needs a normalized recognizer")
    lat = rec.lattice
    table = max_values(rec)
    filler = rec.alphabet.leaves[0]

    def best_from(a, letters, leaf):
        best = lat.bottom
        for b in rec.algebra.path_states(a, letters):
            best = lat.join(best, rec.weights[leaf][b])
        return best

    def build(a, letters, leaf):
        if not letters:
            return Tree(leaf)
        (f, i), rest = letters[0], letters[1:]
        choices = rec.algebra.choices(f, a)
        if not choices:
            return _spine(rec.alphabet, letters, leaf, filler)
        tup = _argmax(lat, sorted(choices, key=repr), lambda c: best_from(c[i - 1], rest, leaf))
        children = []
        for j, b in enumerate(tup, start=1):
            children.append(build(b, rest, leaf) if j == i else table.witnesses[b])
        return Tree(f, children)

    if not rec.initial:
        return _spine(rec.alphabet, path.letters, path.leaf, filler)
    start = _argmax(
        lat,
        sorted(rec.initial, key=repr),
        lambda a: path_degree_ndt(rec, path, start=a),
    )
    return build(start, path.letters, path.leaf)


def path_image_normalized(rec, path):
    """Best degree over all trees containing the path, for normalized DT input.

    For a normalized deterministic recognizer this supremum is realized and
    equals the path degree itself.
    """
    require_chain(rec.lattice)
    if not is_normalized_dt(rec):
        raise NotNormalizedError("path image shortcut needs a normalized recognizer")
    return path_degree(rec, path)
