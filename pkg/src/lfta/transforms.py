"""Constructions that build new recognizers out of old ones.

Each function realizes a pointwise equation on the recognized languages
(intersection is pointwise meet, a scalar bounds every degree, a context
quotient pre-composes with a context, and so on).  The tests check every
construction against the brute-force oracle on bounded tree enumerations.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lattice as lat
from .automata import DtAlgebra, DtRecognizer, NdtAlgebra
from .errors import ArityMismatchError, ValidationError, ZeroNotIrreducibleError
from .recognizers import (
    LDtRecognizer,
    LNdtRecognizer,
    check_same_alphabet,
    check_same_lattice,
)
from .terms import HOLE

DEAD = ("dead",)
ROOT = ("root",)


@dataclass
class PairedRecognizer:
    """A recognizer over a product lattice, with links to its two factors."""

    recognizer: object
    left: object
    right: object

    @property
    def lattice(self):
        return self.recognizer.lattice


def parallel_product(nf, ng):
    """Runs two NDT recognizers side by side; degrees are value pairs."""
    check_same_alphabet(nf, ng)
    check_same_lattice(nf, ng)
    product_lattice = lat.product(nf.lattice, ng.lattice)
    states = [(a, b) for a in nf.algebra.states for b in ng.algebra.states]
    transitions = {}
    for f, m in nf.alphabet.symbols:
        rows = {}
        for a, b in states:
            rows[(a, b)] = tuple(
                tuple(zip(ta, tb))
                for ta in nf.algebra.choices(f, a)
                for tb in ng.algebra.choices(f, b)
            )
        transitions[f] = rows
    algebra = NdtAlgebra(nf.alphabet, states, transitions)
    weights = {
        x: {(a, b): lat.pair_id(nf.weights[x][a], ng.weights[x][b]) for a, b in states}
        for x in nf.alphabet.leaves
    }
    initial = [(a, b) for a in nf.initial for b in ng.initial]
    rec = LNdtRecognizer(product_lattice, algebra, initial, weights)
    return PairedRecognizer(rec, nf, ng)


def _dt_product_algebra(f_rec, g_rec):
    states = [(a, b) for a in f_rec.algebra.states for b in g_rec.algebra.states]
    transitions = {}
    for f, m in f_rec.alphabet.symbols:
        rows = {}
        for a, b in states:
            ta = f_rec.algebra.step(f, a)
            tb = g_rec.algebra.step(f, b)
            rows[(a, b)] = tuple(zip(ta, tb))
        transitions[f] = rows
    return DtAlgebra(f_rec.alphabet, states, transitions)


def product_dt(f_rec, g_rec):
    """Deterministic parallel product; componentwise degrees."""
    check_same_alphabet(f_rec, g_rec)
    check_same_lattice(f_rec, g_rec)
    product_lattice = lat.product(f_rec.lattice, g_rec.lattice)
    algebra = _dt_product_algebra(f_rec, g_rec)
    weights = {
        x: {
            (a, b): lat.pair_id(f_rec.weights[x][a], g_rec.weights[x][b])
            for a, b in algebra.states
        }
        for x in f_rec.alphabet.leaves
    }
    rec = LDtRecognizer(product_lattice, algebra, (f_rec.initial, g_rec.initial), weights)
    return PairedRecognizer(rec, f_rec, g_rec)


def intersect(f_rec, g_rec):
    """Pointwise meet of two deterministic recognizers."""
    check_same_alphabet(f_rec, g_rec)
    check_same_lattice(f_rec, g_rec)
    algebra = _dt_product_algebra(f_rec, g_rec)
    meet = f_rec.lattice.meet
    weights = {
        x: {(a, b): meet(f_rec.weights[x][a], g_rec.weights[x][b]) for a, b in algebra.states}
        for x in f_rec.alphabet.leaves
    }
    return LDtRecognizer(f_rec.lattice, algebra, (f_rec.initial, g_rec.initial), weights)


def top_concat(symbol, parts):
    """Scores f(t1..tm) by meeting the parts' degrees; 0 on other roots."""
    check_same_alphabet(*parts)
    check_same_lattice(*parts)
    first = parts[0]
    arity = first.alphabet.arity(symbol)
    if arity != len(parts):
        raise ArityMismatchError(f"{symbol!r} expects {arity} parts, got {len(parts)}")
    states = [ROOT, DEAD]
    tag = lambda i, a: ("arm", i, a)
    for i, part in enumerate(parts):
        states.extend(tag(i, a) for a in part.algebra.states)
    transitions = {}
    for g, m in first.alphabet.symbols:
        rows = {DEAD: (DEAD,) * m}
        if g == symbol:
            rows[ROOT] = tuple(tag(i, part.initial) for i, part in enumerate(parts))
        else:
            rows[ROOT] = (DEAD,) * m
        for i, part in enumerate(parts):
            for a in part.algebra.states:
                rows[tag(i, a)] = tuple(tag(i, b) for b in part.algebra.step(g, a))
        transitions[g] = rows
    algebra = DtAlgebra(first.alphabet, states, transitions)
    weights = {}
    for x in first.alphabet.leaves:
        row = {ROOT: first.lattice.bottom, DEAD: first.lattice.bottom}
        for i, part in enumerate(parts):
            for a in part.algebra.states:
                row[tag(i, a)] = part.weights[x][a]
        weights[x] = row
    return LDtRecognizer(first.lattice, algebra, ROOT, weights)


def context_quotient(rec, context):
    """Recognizer of t -> degree of context(t); the context is pre-applied.

    Start at the state the context drives the automaton to, and fold the
    context's own frontier contribution into every final weight.
    """
    value, end = rec.context_degree(rec.initial, context)
    meet = rec.lattice.meet
    weights = {
        x: {a: meet(rec.weights[x][a], value) for a in rec.algebra.states}
        for x in rec.alphabet.leaves
    }
    return LDtRecognizer(rec.lattice, rec.algebra, end, weights)


def context_embed(rec, context):
    """Recognizer scoring context(s) as the original scores s, 0 elsewhere.

    States are the original ones plus one per distinct context subtree (the
    hole is identified with the original initial state) plus a sink.  The new
    part checks the input against the context shape, giving the context's own
    leaves weight 1 so only the plugged subtree contributes.
    """
    shape = context.tree
    if shape.is_leaf:  # bare hole: context(s) = s
        return LDtRecognizer(rec.lattice, rec.algebra, rec.initial, rec.weights)

    def state_of(subtree):
        if subtree.is_leaf and subtree.symbol == HOLE:
            return rec.initial
        return ("ctx", subtree)

    ctx_subtrees = [s for s in shape.subtrees() if not (s.is_leaf and s.symbol == HOLE)]
    states = list(rec.algebra.states) + sorted((("ctx", s) for s in ctx_subtrees), key=repr) + [DEAD]
    transitions = {}
    for f, m in rec.alphabet.symbols:
        rows = {DEAD: (DEAD,) * m}
        for a in rec.algebra.states:
            rows[a] = rec.algebra.step(f, a)
        for s in ctx_subtrees:
            if not s.is_leaf and s.symbol == f:
                rows[("ctx", s)] = tuple(state_of(c) for c in s.children)
            else:
                rows[("ctx", s)] = (DEAD,) * m
        transitions[f] = rows
    algebra = DtAlgebra(rec.alphabet, states, transitions)
    weights = {}
    for x in rec.alphabet.leaves:
        row = {DEAD: rec.lattice.bottom}
        for a in rec.algebra.states:
            row[a] = rec.weights[x][a]
        for s in ctx_subtrees:
            matches = s.is_leaf and s.symbol == x
            row[("ctx", s)] = rec.lattice.top if matches else rec.lattice.bottom
        weights[x] = row
    return LDtRecognizer(rec.lattice, algebra, state_of(shape), weights)


def inverse_hom(rec, hom):
    """Recognizer of t -> degree of h(t), for any tree homomorphism h.

    Tracks the set of states the original automaton can hold at the current
    node's image together with the weight already collected from frontier
    symbols produced by the homomorphism; only reachable pairs materialize.
    """
    if hom.target != rec.alphabet:
        raise ValidationError("homomorphism target must match the recognizer alphabet")
    lat_ = rec.lattice
    top = lat_.top

    def explore(state_set, d):
        return (frozenset(state_set), d)

    start = explore({rec.initial}, top)
    seen = {start}
    queue = [start]
    transitions = {f: {} for f, _ in hom.source.symbols}
    while queue:
        state = queue.pop(0)
        states_here, d = state
        for f, m in hom.source.symbols:
            image = hom.symbol_images[f]
            pairs = set()
            for a in sorted(states_here, key=repr):
                pairs |= rec.algebra.leaf_run(image, a)
            frontier = [
                rec.weights[y][b] for y, b in sorted(pairs, key=repr) if rec.alphabet.is_leaf(y)
            ]
            d_f = lat_.meet_all(frontier) if frontier else top
            shared = lat_.meet(d, d_f)
            children = []
            for i in range(1, m + 1):
                hooked = frozenset(b for y, b in pairs if y == f"${i}")
                children.append(explore(hooked, shared))
            transitions[f][state] = tuple(children)
            for child in children:
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
    states = sorted(seen, key=repr)
    weights = {}
    for x in hom.source.leaves:
        image = hom.leaf_images[x]
        row = {}
        for state in states:
            states_here, d = state
            parts = [rec.degree(image, start=a) for a in sorted(states_here, key=repr)]
            inner = lat_.meet_all(parts) if parts else top
            row[state] = lat_.meet(d, inner)
        weights[x] = row
    algebra = DtAlgebra(hom.source, states, transitions)
    return LDtRecognizer(lat_, algebra, start, weights)


def alphabetic_image(rec, hom):
    """Relabel a recognizer along an injective alphabetic homomorphism."""
    hom.require_alphabetic()
    hom.require_injective()
    if hom.source != rec.alphabet:
        raise ValidationError("homomorphism source must match the recognizer alphabet")
    target = hom.target
    preimage_symbol = {hom.symbol_images[f].symbol: f for f, _ in hom.source.symbols}
    preimage_leaf = {hom.leaf_images[x].symbol: x for x in hom.source.leaves}
    states = list(rec.algebra.states) + [DEAD]
    transitions = {}
    for g, m in target.symbols:
        rows = {DEAD: (DEAD,) * m}
        f = preimage_symbol.get(g)
        for a in rec.algebra.states:
            rows[a] = rec.algebra.step(f, a) if f is not None else (DEAD,) * m
        transitions[g] = rows
    algebra = DtAlgebra(target, states, transitions)
    weights = {}
    for y in target.leaves:
        x = preimage_leaf.get(y)
        row = {DEAD: rec.lattice.bottom}
        for a in rec.algebra.states:
            row[a] = rec.weights[x][a] if x is not None else rec.lattice.bottom
        weights[y] = row
    return LDtRecognizer(rec.lattice, algebra, rec.initial, weights)


def scalar(rec, c):
    """Bound every degree by `c` (pointwise meet with a constant)."""
    rec.lattice.check(c)
    meet = rec.lattice.meet
    weights = {
        x: {a: meet(c, rec.weights[x][a]) for a in rec.algebra.states}
        for x in rec.alphabet.leaves
    }
    return LDtRecognizer(rec.lattice, rec.algebra, rec.initial, weights)


def cut(rec, c):
    """Crisp recognizer of the trees whose degree is at least `c`."""
    rec.lattice.check(c)
    final = {
        x: {a for a in rec.algebra.states if rec.lattice.leq(c, rec.weights[x][a])}
        for x in rec.alphabet.leaves
    }
    return DtRecognizer(rec.algebra, rec.initial, final)


def characteristic_dt(crisp, lattice):
    """The fuzzy recognizer valuing the crisp recognizer's language at top."""
    weights = {
        x: {
            a: lattice.top if a in crisp.final[x] else lattice.bottom
            for a in crisp.algebra.states
        }
        for x in crisp.algebra.alphabet.leaves
    }
    return LDtRecognizer(lattice, crisp.algebra, crisp.initial, weights)


def support_dt(rec):
    """Crisp recognizer of the support; needs meets of nonzeros to stay nonzero."""
    if not rec.lattice.zero_meet_irreducible():
        raise ZeroNotIrreducibleError("two nonzero degrees can meet at 0 in this lattice")
    final = {
        x: {a for a in rec.algebra.states if rec.weights[x][a] != rec.lattice.bottom}
        for x in rec.alphabet.leaves
    }
    return DtRecognizer(rec.algebra, rec.initial, final)


def map_values(rec, morphism):
    """Push every degree through a meet-preserving lattice map."""
    if morphism.source != rec.lattice:
        raise ValidationError("morphism source must match the recognizer lattice")
    weights = {
        x: {a: morphism(rec.weights[x][a]) for a in rec.algebra.states}
        for x in rec.alphabet.leaves
    }
    return LDtRecognizer(morphism.target, rec.algebra, rec.initial, weights)
