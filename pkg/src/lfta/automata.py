"""Crisp deterministic and nondeterministic top-down tree automata.

A DT algebra sends a state down every child slot of a symbol; an NDT algebra
offers a set of such child-state tuples.  Both kinds are immutable after
construction.  States may be any hashable values; constructions elsewhere use
tuples and frozensets internally and render them to tokens on serialization.
"""

from __future__ import annotations

from .errors import BudgetExceededError, ValidationError
from .terms import HOLE, Tree

FULL_POWERSET_LIMIT = 12


class DtAlgebra:
    """Finite deterministic top-down algebra: state -> tuple of child states."""

    __slots__ = ("alphabet", "states", "transitions")

    def __init__(self, alphabet, states, transitions):
        states = tuple(states)
        state_set = set(states)
        if len(state_set) != len(states):
            raise ValidationError("duplicate state")
        if not states:
            raise ValidationError("empty state set")
        table = {}
        for f, m in alphabet.symbols:
            rows = transitions.get(f, {})
            table[f] = {}
            for a in states:
                if a not in rows:
                    raise ValidationError(f"missing transition for {f!r} from state {a!r}")
                tup = tuple(rows[a])
                if len(tup) != m:
                    raise ValidationError(f"transition {f!r}/{a!r} must have {m} targets")
                for b in tup:
                    if b not in state_set:
                        raise ValidationError(f"unknown target state {b!r}")
                table[f][a] = tup
        self.alphabet = alphabet
        self.states = states
        self.transitions = table

    def step(self, symbol, state):
        return self.transitions[symbol][state]

    def run(self, t, state):
        """The run tree: `t` with every node annotated by the state held there."""
        if t.is_leaf:
            return Tree((t.symbol, state))
        targets = self.step(t.symbol, state)
        return Tree((t.symbol, state), [self.run(c, b) for c, b in zip(t.children, targets)])

    def leaf_run(self, t, state):
        """The set of (leaf symbol, state) pairs at the frontier of the run."""
        if t.is_leaf:
            return frozenset([(t.symbol, state)])
        targets = self.step(t.symbol, state)
        out = set()
        for c, b in zip(t.children, targets):
            out |= self.leaf_run(c, b)
        return frozenset(out)

    def path_state(self, state, letters):
        """The state reached by descending along the given path letters."""
        for f, i in letters:
            state = self.step(f, state)[i - 1]
        return state

    def context_end_state(self, state, context):
        def walk(node, a):
            if node.is_leaf:
                return a if node.symbol == HOLE else None
            targets = self.step(node.symbol, a)
            for c, b in zip(node.children, targets):
                end = walk(c, b)
                if end is not None:
                    return end
            return None

        return walk(context.tree, state)


class NdtAlgebra:
    """Finite nondeterministic top-down algebra: state -> set of child tuples."""

    __slots__ = ("alphabet", "states", "transitions")

    def __init__(self, alphabet, states, transitions):
        states = tuple(states)
        state_set = set(states)
        if len(state_set) != len(states):
            raise ValidationError("duplicate state")
        if not states:
            raise ValidationError("empty state set")
        table = {}
        for f, m in alphabet.symbols:
            rows = transitions.get(f, {})
            table[f] = {}
            for a in states:
                choices = []
                for tup in rows.get(a, ()):
                    tup = tuple(tup)
                    if len(tup) != m:
                        raise ValidationError(f"transition {f!r}/{a!r} must have {m} targets")
                    for b in tup:
                        if b not in state_set:
                            raise ValidationError(f"unknown target state {b!r}")
                    choices.append(tup)
                table[f][a] = tuple(sorted(set(choices), key=repr))
        self.alphabet = alphabet
        self.states = states
        self.transitions = table

    def choices(self, symbol, state):
        return self.transitions[symbol][state]

    def path_states(self, start, letters):
        """All states reachable at the end of the given path letters.

        `start` may be a single state or an iterable of states.
        """
        try:
            single = start in set(self.states)
        except TypeError:
            single = False
        current = {start} if single else set(start)
        for f, i in letters:
            nxt = set()
            for a in current:
                for tup in self.choices(f, a):
                    nxt.add(tup[i - 1])
            current = nxt
        return frozenset(current)


def subset_algebra(algebra, starts=None, full_powerset=False):
    """The deterministic algebra over state sets simulating all runs at once.

    Materializes only the subsets reachable from `starts` unless
    `full_powerset` is set (guarded to small automata).
    """
    if full_powerset:
        if len(algebra.states) > FULL_POWERSET_LIMIT:
            raise BudgetExceededError(
                f"full powerset mode limited to {FULL_POWERSET_LIMIT} states"
            )
        seeds = []
        n = len(algebra.states)
        for mask in range(1 << n):
            seeds.append(frozenset(s for i, s in enumerate(algebra.states) if mask >> i & 1))
    else:
        if starts is None:
            raise ValidationError("need start sets unless full_powerset is set")
        seeds = [frozenset(s) for s in starts]

    def step(subset, f, i):
        out = set()
        for a in subset:
            for tup in algebra.choices(f, a):
                out.add(tup[i - 1])
        return frozenset(out)

    states = []
    seen = set()
    queue = list(seeds)
    transitions = {f: {} for f, _ in algebra.alphabet.symbols}
    while queue:
        current = queue.pop(0)
        if current in seen:
            continue
        seen.add(current)
        states.append(current)
        for f, m in algebra.alphabet.symbols:
            tup = tuple(step(current, f, i) for i in range(1, m + 1))
            transitions[f][current] = tup
            for child in tup:
                if child not in seen:
                    queue.append(child)
    return DtAlgebra(algebra.alphabet, states, transitions)


class DtRecognizer:
    """Crisp deterministic recognizer: accepted iff every frontier pair is final."""

    __slots__ = ("algebra", "initial", "final")

    def __init__(self, algebra, initial, final):
        if initial not in set(algebra.states):
            raise ValidationError(f"unknown initial state {initial!r}")
        table = {}
        state_set = set(algebra.states)
        for x in algebra.alphabet.leaves:
            chosen = frozenset(final.get(x, ()))
            if not chosen <= state_set:
                raise ValidationError(f"final set for {x!r} mentions unknown states")
            table[x] = chosen
        self.algebra = algebra
        self.initial = initial
        self.final = table

    def accepts(self, t, start=None):
        start = self.initial if start is None else start
        return all(b in self.final[x] for x, b in self.algebra.leaf_run(t, start))


class NdtRecognizer:
    """Crisp nondeterministic recognizer over an NDT algebra."""

    __slots__ = ("algebra", "initial", "final")

    def __init__(self, algebra, initial, final):
        initial = frozenset(initial)
        state_set = set(algebra.states)
        if not initial <= state_set:
            raise ValidationError("unknown initial state")
        table = {}
        for x in algebra.alphabet.leaves:
            chosen = frozenset(final.get(x, ()))
            if not chosen <= state_set:
                raise ValidationError(f"final set for {x!r} mentions unknown states")
            table[x] = chosen
        self.algebra = algebra
        self.initial = initial
        self.final = table

    def accepting_states(self, t):
        """All states from which `t` is accepted; memoized bottom-up."""
        memo = {}

        def states_of(node):
            got = memo.get(node)
            if got is not None:
                return got
            if node.is_leaf:
                result = self.final[node.symbol]
            else:
                child_states = [states_of(c) for c in node.children]
                result = frozenset(
                    a
                    for a in self.algebra.states
                    if any(
                        all(b in cs for b, cs in zip(tup, child_states))
                        for tup in self.algebra.choices(node.symbol, a)
                    )
                )
            memo[node] = result
            return result

        return states_of(t)

    def accepts(self, t):
        return bool(self.initial & self.accepting_states(t))

    def nonempty(self):
        """Whether some tree is accepted, by marking productive states."""
        productive = set()
        for x, chosen in self.final.items():
            productive |= chosen
        grew = True
        while grew:
            grew = False
            for f, _ in self.algebra.alphabet.symbols:
                for a in self.algebra.states:
                    if a in productive:
                        continue
                    for tup in self.algebra.choices(f, a):
                        if all(b in productive for b in tup):
                            productive.add(a)
                            grew = True
                            break
        return bool(self.initial & productive)
