"""The repository file format: named lattices, alphabets, recognizers, trees.

Line-oriented blocks, diff-friendly and deterministic:

    lattice M2 { elements 0 c d 1 ; order 0<c 0<d c<1 d<1 }
    chain C4 { 0 < 1/4 < 1/2 < 1 }
    alphabet Pair { f/2 ; leaves x y }
    ldt F over M2 alphabet Pair { states a0 a b ; initial a0 ;
        trans f a0 -> a a ; trans f a -> b b ; trans f b -> b b ;
        final x : a=c ; final y : a=d }
    lndt N over M2 alphabet Pair { ... }        # repeated trans lines
    dt D alphabet Pair { ... ; final x : a b }  # crisp recognizers
    ndt C alphabet Pair { ... }
    tree t1 alphabet Pair { f(x,y) }
    hom h from Pair to Pair { leaf x -> y ; sym f -> f($2,$1) }
    morphism m from M2 to M2 { 0 -> 0 ; c -> 0 ; d -> d ; 1 -> 1 }

``#`` starts a comment.  Serialization renders structured state names
(tuples, sets) to tokens, so loading a serialized workspace yields string
state names with identical behavior.
"""

from __future__ import annotations

import re

from .automata import DtAlgebra, DtRecognizer, NdtAlgebra, NdtRecognizer
from .errors import ParseError, ValidationError
from .lattice import Lattice, LatticeMorphism, chain as make_chain
from .recognizers import LDtRecognizer, LNdtRecognizer
from .terms import RankedAlphabet, Tree, TreeHomomorphism, parse_tree

_SPECIALS = "{};:"


def tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in _SPECIALS:
            tokens.append((ch, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < len(text) and text[i] not in " \t\r\n#" + _SPECIALS:
                i += 1
                col += 1
            tokens.append((text[start:i], line, start_col))
    return tokens


def state_token(state):
    """Deterministic token for a (possibly structured) state name."""
    if isinstance(state, frozenset):
        return "[" + ",".join(sorted(state_token(e) for e in state)) + "]"
    if isinstance(state, tuple):
        return "(" + ",".join(state_token(e) for e in state) + ")"
    if isinstance(state, Tree):
        return str(state)
    return re.sub(r"[\s{};:=<#]", "_", str(state))


class Workspace:
    """Named collections of everything the file format can describe."""

    def __init__(self):
        self.lattices = {}
        self.alphabets = {}
        self.recognizers = {}
        self.trees = {}
        self.homs = {}
        self.morphisms = {}

    def _add(self, table, kind, name, value):
        if name in table:
            raise ValidationError(f"duplicate {kind} name {name!r}")
        table[name] = value

    def add_lattice(self, name, value):
        self._add(self.lattices, "lattice", name, value)

    def add_alphabet(self, name, value):
        self._add(self.alphabets, "alphabet", name, value)

    def add_recognizer(self, name, value):
        self._add(self.recognizers, "recognizer", name, value)

    def add_tree(self, name, alphabet_name, value):
        self._add(self.trees, "tree", name, (alphabet_name, value))

    def add_hom(self, name, value):
        self._add(self.homs, "hom", name, value)

    def add_morphism(self, name, value):
        self._add(self.morphisms, "morphism", name, value)

    def _lookup(self, table, kind, name):
        if name not in table:
            raise ValidationError(f"unknown {kind} {name!r}")
        return table[name]

    def lattice(self, name):
        return self._lookup(self.lattices, "lattice", name)

    def alphabet(self, name):
        return self._lookup(self.alphabets, "alphabet", name)

    def recognizer(self, name):
        return self._lookup(self.recognizers, "recognizer", name)

    def tree(self, name):
        return self._lookup(self.trees, "tree", name)[1]

    def hom(self, name):
        return self._lookup(self.homs, "hom", name)

    def morphism(self, name):
        return self._lookup(self.morphisms, "morphism", name)

    def name_of_lattice(self, lattice):
        for name, lat in self.lattices.items():
            if lat == lattice:
                return name
        name = f"L{len(self.lattices)}"
        self.add_lattice(name, lattice)
        return name

    def name_of_alphabet(self, alphabet):
        for name, alph in self.alphabets.items():
            if alph == alphabet:
                return name
        name = f"A{len(self.alphabets)}"
        self.add_alphabet(name, alphabet)
        return name

    def __eq__(self, other):
        if not isinstance(other, Workspace):
            return NotImplemented
        return (
            self.lattices == other.lattices
            and self.alphabets == other.alphabets
            and _table_eq(self.recognizers, other.recognizers)
            and self.trees == other.trees
            and _hom_table_eq(self.homs, other.homs)
            and _morphism_table_eq(self.morphisms, other.morphisms)
        )


def _table_eq(a, b):
    return set(a) == set(b) and all(_rec_eq(a[k], b[k]) for k in a)


def _rec_eq(r1, r2):
    if type(r1) is not type(r2):
        return False
    if isinstance(r1, (LDtRecognizer, LNdtRecognizer)):
        return (
            r1.lattice == r2.lattice
            and r1.algebra.alphabet == r2.algebra.alphabet
            and r1.algebra.states == r2.algebra.states
            and r1.algebra.transitions == r2.algebra.transitions
            and r1.initial == r2.initial
            and r1.weights == r2.weights
        )
    return (
        r1.algebra.alphabet == r2.algebra.alphabet
        and r1.algebra.states == r2.algebra.states
        and r1.algebra.transitions == r2.algebra.transitions
        and r1.initial == r2.initial
        and r1.final == r2.final
    )


def _hom_table_eq(a, b):
    return set(a) == set(b) and all(
        a[k].source == b[k].source
        and a[k].target == b[k].target
        and a[k].leaf_images == b[k].leaf_images
        and a[k].symbol_images == b[k].symbol_images
        for k in a
    )


def _morphism_table_eq(a, b):
    return set(a) == set(b) and all(
        a[k].source == b[k].source and a[k].target == b[k].target and a[k].mapping == b[k].mapping
        for k in a
    )


# -- parsing ---------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self, expected=None):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input")
        tok, line, col = self.tokens[self.pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", line, col)
        self.pos += 1
        return tok

    def error(self, message):
        if self.pos < len(self.tokens):
            _, line, col = self.tokens[self.pos]
            raise ParseError(message, line, col)
        raise ParseError(message)

    def clauses(self):
        """Split a { ... } body into ;-separated token lists."""
        self.next("{")
        out = [[]]
        while True:
            tok = self.peek()
            if tok is None:
                self.error("missing '}'")
            if tok == "}":
                self.next()
                break
            if tok == ";":
                self.next()
                out.append([])
            else:
                out[-1].append(self.next())
        return [c for c in out if c]


def _split_pairs(tokens, sep, clause):
    pairs = []
    for tok in tokens:
        left, s, right = tok.partition(sep)
        if not s or not left or not right:
            raise ParseError(f"expected '<a>{sep}<b>' in {clause}, found {tok!r}")
        pairs.append((left, right))
    return pairs


def _parse_arrow_pairs(tokens, what):
    """Split 'a -> b c ; d -> e' style token runs already clause-split."""
    if "->" not in tokens:
        raise ParseError(f"missing '->' in {what}")
    k = tokens.index("->")
    return tokens[:k], tokens[k + 1 :]


def load_text(text, workspace=None):
    ws = workspace or Workspace()
    p = _Parser(text)
    while p.peek() is not None:
        kind = p.next()
        if kind == "lattice":
            name = p.next()
            elements, order = [], []
            for clause in p.clauses():
                head, rest = clause[0], clause[1:]
                if head == "elements":
                    elements = rest
                elif head == "order":
                    order = _split_pairs(rest, "<", "order clause")
                else:
                    raise ParseError(f"unknown lattice clause {head!r}")
            ws.add_lattice(name, Lattice(elements, order))
        elif kind == "chain":
            name = p.next()
            labels = [t for c in p.clauses() for t in c if t != "<"]
            labels = [part for t in labels for part in t.split("<") if part]
            ws.add_lattice(name, make_chain(labels))
        elif kind == "alphabet":
            name = p.next()
            symbols, leaves = {}, []
            for clause in p.clauses():
                if clause[0] == "leaves":
                    leaves = clause[1:]
                else:
                    for tok in clause:
                        sym, slash, arity = tok.partition("/")
                        if not slash or not arity.isdigit():
                            raise ParseError(f"expected '<symbol>/<arity>', found {tok!r}")
                        symbols[sym] = int(arity)
            ws.add_alphabet(name, RankedAlphabet(symbols, leaves))
        elif kind in ("ldt", "lndt"):
            name = p.next()
            p.next("over")
            lattice = ws.lattice(p.next())
            p.next("alphabet")
            alphabet = ws.alphabet(p.next())
            body = _parse_recognizer_body(p, alphabet, deterministic=(kind == "ldt"))
            states, initial, transitions, finals = body
            weights = {
                x: {a: v for a, v in _split_pairs(toks, "=", "final clause")}
                for x, toks in finals.items()
            }
            if kind == "ldt":
                dt = {f: {a: tups[0] for a, tups in rows.items()} for f, rows in transitions.items()}
                algebra = DtAlgebra(alphabet, states, dt)
                if len(initial) != 1:
                    raise ValidationError(f"ldt {name!r} needs exactly one initial state")
                ws.add_recognizer(name, LDtRecognizer(lattice, algebra, initial[0], weights))
            else:
                algebra = NdtAlgebra(alphabet, states, transitions)
                ws.add_recognizer(name, LNdtRecognizer(lattice, algebra, initial, weights))
        elif kind in ("dt", "ndt"):
            name = p.next()
            p.next("alphabet")
            alphabet = ws.alphabet(p.next())
            body = _parse_recognizer_body(p, alphabet, deterministic=(kind == "dt"))
            states, initial, transitions, finals = body
            final = {x: set(toks) for x, toks in finals.items()}
            if kind == "dt":
                dtt = {f: {a: tups[0] for a, tups in rows.items()} for f, rows in transitions.items()}
                algebra = DtAlgebra(alphabet, states, dtt)
                if len(initial) != 1:
                    raise ValidationError(f"dt {name!r} needs exactly one initial state")
                ws.add_recognizer(name, DtRecognizer(algebra, initial[0], final))
            else:
                algebra = NdtAlgebra(alphabet, states, transitions)
                ws.add_recognizer(name, NdtRecognizer(algebra, initial, final))
        elif kind == "tree":
            name = p.next()
            p.next("alphabet")
            alphabet_name = p.next()
            alphabet = ws.alphabet(alphabet_name)
            clauses = p.clauses()
            if len(clauses) != 1:
                raise ParseError(f"tree {name!r} needs exactly one clause")
            t = parse_tree(" ".join(clauses[0]))
            alphabet.validate_tree(t)
            ws.add_tree(name, alphabet_name, t)
        elif kind == "hom":
            name = p.next()
            p.next("from")
            source = ws.alphabet(p.next())
            p.next("to")
            target = ws.alphabet(p.next())
            leaf_images, symbol_images = {}, {}
            for clause in p.clauses():
                head, rest = clause[0], clause[1:]
                lhs, rhs = _parse_arrow_pairs(rest, f"hom clause {head!r}")
                if head == "leaf" and len(lhs) == 1:
                    leaf_images[lhs[0]] = parse_tree(" ".join(rhs))
                elif head == "sym" and len(lhs) == 1:
                    symbol_images[lhs[0]] = parse_tree(" ".join(rhs))
                else:
                    raise ParseError(f"bad hom clause starting {head!r}")
            ws.add_hom(name, TreeHomomorphism(source, target, leaf_images, symbol_images))
        elif kind == "morphism":
            name = p.next()
            p.next("from")
            source = ws.lattice(p.next())
            p.next("to")
            target = ws.lattice(p.next())
            mapping = {}
            for clause in p.clauses():
                lhs, rhs = _parse_arrow_pairs(clause, "morphism clause")
                if len(lhs) != 1 or len(rhs) != 1:
                    raise ParseError("morphism clauses map one element to one element")
                mapping[lhs[0]] = rhs[0]
            ws.add_morphism(name, LatticeMorphism(source, target, mapping))
        else:
            p.error(f"unknown block kind {kind!r}")
    return ws


def _parse_recognizer_body(p, alphabet, deterministic):
    states, initial = [], []
    transitions = {f: {} for f, _ in alphabet.symbols}
    finals = {x: [] for x in alphabet.leaves}
    for clause in p.clauses():
        head = clause[0]
        if head == "states":
            states = clause[1:]
        elif head == "initial":
            initial = clause[1:]
        elif head == "trans":
            if len(clause) < 4:
                raise ParseError("trans clause needs 'trans <sym> <state> -> <targets>'")
            f, source = clause[1], clause[2]
            if clause[3] != "->":
                raise ParseError(f"expected '->' in trans clause, found {clause[3]!r}")
            targets = tuple(clause[4:])
            if f not in transitions:
                raise ParseError(f"unknown symbol {f!r} in trans clause")
            transitions[f].setdefault(source, [])
            transitions[f][source].append(targets)
        elif head == "final":
            if len(clause) < 3 or clause[2] != ":":
                raise ParseError("final clause needs 'final <leaf> : ...'")
            x = clause[1]
            if x not in finals:
                raise ParseError(f"unknown leaf {x!r} in final clause")
            finals[x] = clause[3:]
        else:
            raise ParseError(f"unknown recognizer clause {head!r}")
    if deterministic:
        for f, rows in transitions.items():
            for a, tups in rows.items():
                if len(tups) != 1:
                    raise ValidationError(f"deterministic recognizer has {len(tups)} rules for {f!r}/{a!r}")
    return states, initial, transitions, finals


def load(paths):
    ws = Workspace()
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            load_text(handle.read(), ws)
    return ws


# -- serialization -----------------------------------------------------------

def _cover_pairs(lattice):
    pairs = []
    for a in lattice.elements:
        for b in lattice.elements:
            if a == b or not lattice.leq(a, b):
                continue
            strictly_between = any(
                c not in (a, b) and lattice.leq(a, c) and lattice.leq(c, b)
                for c in lattice.elements
            )
            if not strictly_between:
                pairs.append((a, b))
    return pairs


def serialize_lattice(name, lattice):
    order = " ".join(f"{a}<{b}" for a, b in _cover_pairs(lattice))
    return f"lattice {name} {{ elements {' '.join(lattice.elements)} ; order {order} }}"


def serialize_alphabet(name, alphabet):
    syms = " ".join(f"{f}/{m}" for f, m in alphabet.symbols)
    return f"alphabet {name} {{ {syms} ; leaves {' '.join(alphabet.leaves)} }}"


def _serialize_rec_lines(rec, crisp, deterministic):
    algebra = rec.algebra
    alphabet = algebra.alphabet
    names = {a: state_token(a) for a in algebra.states}
    if len(set(names.values())) != len(names):
        raise ValidationError("state names collide after rendering")
    lines = [f"states {' '.join(names[a] for a in algebra.states)}"]
    if deterministic:
        lines.append(f"initial {names[rec.initial]}")
    else:
        lines.append("initial " + " ".join(sorted(names[a] for a in rec.initial)))
    for f, _ in alphabet.symbols:
        for a in algebra.states:
            if deterministic:
                tups = [algebra.step(f, a)]
            else:
                tups = list(algebra.choices(f, a))
            for tup in tups:
                lines.append(f"trans {f} {names[a]} -> {' '.join(names[b] for b in tup)}")
    for x in alphabet.leaves:
        if crisp:
            chosen = sorted(names[a] for a in rec.final[x])
            lines.append(f"final {x} : {' '.join(chosen)}".rstrip())
        else:
            bottom = rec.lattice.bottom
            pairs = [
                f"{names[a]}={rec.weights[x][a]}"
                for a in algebra.states
                if rec.weights[x][a] != bottom
            ]
            lines.append(f"final {x} : {' '.join(pairs)}".rstrip())
    return lines


def serialize_recognizer(name, rec, lattice_name=None, alphabet_name=None):
    if isinstance(rec, LDtRecognizer):
        head = f"ldt {name} over {lattice_name} alphabet {alphabet_name}"
        lines = _serialize_rec_lines(rec, crisp=False, deterministic=True)
    elif isinstance(rec, LNdtRecognizer):
        head = f"lndt {name} over {lattice_name} alphabet {alphabet_name}"
        lines = _serialize_rec_lines(rec, crisp=False, deterministic=False)
    elif isinstance(rec, DtRecognizer):
        head = f"dt {name} alphabet {alphabet_name}"
        lines = _serialize_rec_lines(rec, crisp=True, deterministic=True)
    elif isinstance(rec, NdtRecognizer):
        head = f"ndt {name} alphabet {alphabet_name}"
        lines = _serialize_rec_lines(rec, crisp=True, deterministic=False)
    else:
        raise ValidationError(f"cannot serialize recognizer of type {type(rec).__name__}")
    body = " ;\n  ".join(lines)
    return f"{head} {{\n  {body}\n}}"


def serialize(ws):
    """Workspace as file-format text; loading it back gives an equal workspace."""
    # register names for anything referenced but not yet named
    for hom in ws.homs.values():
        ws.name_of_alphabet(hom.source)
        ws.name_of_alphabet(hom.target)
    for morphism in ws.morphisms.values():
        ws.name_of_lattice(morphism.source)
        ws.name_of_lattice(morphism.target)
    for rec in ws.recognizers.values():
        ws.name_of_alphabet(rec.algebra.alphabet)
        if isinstance(rec, (LDtRecognizer, LNdtRecognizer)):
            ws.name_of_lattice(rec.lattice)
    out = []
    for name, lattice in ws.lattices.items():
        out.append(serialize_lattice(name, lattice))
    for name, alphabet in ws.alphabets.items():
        out.append(serialize_alphabet(name, alphabet))
    for name, hom in ws.homs.items():
        source = ws.name_of_alphabet(hom.source)
        target = ws.name_of_alphabet(hom.target)
        clauses = [f"leaf {x} -> {hom.leaf_images[x]}" for x in hom.source.leaves]
        clauses += [f"sym {f} -> {hom.symbol_images[f]}" for f, _ in hom.source.symbols]
        out.append(f"hom {name} from {source} to {target} {{ {' ; '.join(clauses)} }}")
    for name, morphism in ws.morphisms.items():
        source = ws.name_of_lattice(morphism.source)
        target = ws.name_of_lattice(morphism.target)
        clauses = [f"{e} -> {morphism.mapping[e]}" for e in morphism.source.elements]
        out.append(f"morphism {name} from {source} to {target} {{ {' ; '.join(clauses)} }}")
    for name, rec in ws.recognizers.items():
        alphabet_name = ws.name_of_alphabet(rec.algebra.alphabet)
        lattice_name = None
        if isinstance(rec, (LDtRecognizer, LNdtRecognizer)):
            lattice_name = ws.name_of_lattice(rec.lattice)
        out.append(serialize_recognizer(name, rec, lattice_name, alphabet_name))
    for name, (alphabet_name, t) in ws.trees.items():
        out.append(f"tree {name} alphabet {alphabet_name} {{ {t} }}")
    return "\n".join(out) + "\n"
