"""Ranked trees, one-hole contexts, root-to-leaf path words, homomorphisms.

Trees are immutable and structurally hashable.  The text syntax is
``f(g(f(x,x)),y)`` for trees (with ``@`` as the context hole) and
``f.1 g.1 f.1 x`` for path words, chosen so that symbol names containing
digits stay unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .errors import ArityMismatchError, NotAlphabeticError, NotInjectiveError, ParseError, ValidationError

HOLE = "@"
_VAR = re.compile(r"^\$(\d+)$")


def var(i):
    """The i-th substitution variable used in homomorphism images."""
    return Tree(f"${i}")


class Tree:
    """An immutable ranked tree; a leaf is a node with no children."""

    __slots__ = ("symbol", "children", "_hash", "_height")

    def __init__(self, symbol, children=()):
        object.__setattr__(self, "symbol", symbol)
        object.__setattr__(self, "children", tuple(children))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_height", None)

    def __setattr__(self, name, value):
        raise AttributeError("trees are immutable")

    @property
    def is_leaf(self):
        return not self.children

    @property
    def root(self):
        return self.symbol

    @property
    def height(self):
        h = self._height
        if h is None:
            h = 0 if self.is_leaf else 1 + max(c.height for c in self.children)
            object.__setattr__(self, "_height", h)
        return h

    def subtrees(self):
        out = {self}
        for c in self.children:
            out |= c.subtrees()
        return out

    def leaf_set(self):
        if self.is_leaf:
            return {self.symbol}
        out = set()
        for c in self.children:
            out |= c.leaf_set()
        return out

    def leaves(self):
        """Leaf symbols in left-to-right frontier order (with repeats)."""
        if self.is_leaf:
            return [self.symbol]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def size(self):
        return 1 + sum(c.size() for c in self.children)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Tree)
            and self.symbol == other.symbol
            and self.children == other.children
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.symbol, self.children))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        if self.is_leaf:
            return str(self.symbol)
        return f"{self.symbol}({','.join(str(c) for c in self.children)})"

    def __repr__(self):
        return f"Tree[{self}]"

    def __lt__(self, other):
        return str(self) < str(other)


def metrics(t):
    """Root symbol, height, subtree set and leaf-symbol set of a tree."""
    return {
        "root": t.root,
        "height": t.height,
        "subtrees": t.subtrees(),
        "leaf_set": t.leaf_set(),
    }


class RankedAlphabet:
    """Operation symbols with arities >= 1 plus a disjoint leaf alphabet."""

    __slots__ = ("symbols", "leaves", "_arity")

    def __init__(self, symbols, leaves):
        symbols = tuple(symbols.items()) if isinstance(symbols, dict) else tuple(symbols)
        leaves = tuple(leaves)
        arity = dict(symbols)
        if len(arity) != len(symbols):
            raise ValidationError("duplicate operation symbol")
        for name, m in symbols:
            if m < 1:
                raise ValidationError(f"nullary symbol {name!r} not allowed")
        if not leaves:
            raise ValidationError("leaf alphabet must be nonempty")
        if len(set(leaves)) != len(leaves):
            raise ValidationError("duplicate leaf name")
        if set(arity) & set(leaves):
            raise ValidationError("operation symbols and leaves must be disjoint")
        self.symbols = symbols
        self.leaves = leaves
        self._arity = arity

    def arity(self, name):
        try:
            return self._arity[name]
        except KeyError:
            raise ValidationError(f"unknown symbol {name!r}") from None

    def is_symbol(self, name):
        return name in self._arity

    def is_leaf(self, name):
        return name in self.leaves

    def path_letters(self):
        """The path alphabet: one letter (f, i) per child slot."""
        return [(f, i) for f, m in self.symbols for i in range(1, m + 1)]

    def __eq__(self, other):
        return (
            isinstance(other, RankedAlphabet)
            and self.symbols == other.symbols
            and self.leaves == other.leaves
        )

    def __hash__(self):
        return hash((self.symbols, self.leaves))

    def __repr__(self):
        syms = ",".join(f"{f}/{m}" for f, m in self.symbols)
        return f"RankedAlphabet({syms}; {','.join(self.leaves)})"

    def validate_tree(self, t, extra_leaves=()):
        """Check arities and leaf membership throughout `t`."""
        if t.is_leaf:
            if not (t.symbol in self.leaves or t.symbol in extra_leaves):
                raise ValidationError(f"unknown leaf {t.symbol!r}")
            return
        m = self.arity(t.symbol)
        if len(t.children) != m:
            raise ArityMismatchError(f"{t.symbol!r} expects {m} children, got {len(t.children)}")
        for c in t.children:
            self.validate_tree(c, extra_leaves)


# -- parsing ------------------------------------------------------------

_TOKEN = re.compile(r"[^(),\s]+|[(),]")


def parse_tree(text):
    tokens = _TOKEN.findall(text)
    if "".join(tokens).replace(" ", "") != re.sub(r"\s+", "", text):
        raise ParseError(f"stray characters in tree {text!r}")
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] in "(),":
            raise ParseError(f"expected a symbol in {text!r}")
        symbol = tokens[pos]
        pos += 1
        if pos < len(tokens) and tokens[pos] == "(":
            pos += 1
            children = [node()]
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                children.append(node())
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError(f"missing ')' in {text!r}")
            pos += 1
            return Tree(symbol, children)
        return Tree(symbol)

    t = node()
    if pos != len(tokens):
        raise ParseError(f"trailing input in tree {text!r}")
    return t


@dataclass(frozen=True)
class PathWord:
    """A root-to-leaf path: (symbol, child-index) letters ending in a leaf."""

    letters: tuple
    leaf: str

    def __str__(self):
        return " ".join([f"{f}.{i}" for f, i in self.letters] + [self.leaf])

    def __len__(self):
        return len(self.letters)

    def __lt__(self, other):
        return str(self) < str(other)


def parse_path(text):
    tokens = text.split()
    if not tokens:
        raise ParseError("empty path")
    letters = []
    for tok in tokens[:-1]:
        name, dot, idx = tok.rpartition(".")
        if not dot or not idx.isdigit():
            raise ParseError(f"bad path letter {tok!r}")
        letters.append((name, int(idx)))
    return PathWord(tuple(letters), tokens[-1])


def delta(t):
    """All root-to-leaf path words of `t`, sorted for reproducibility."""
    out = []

    def walk(node, prefix):
        if node.is_leaf:
            out.append(PathWord(tuple(prefix), node.symbol))
            return
        for i, c in enumerate(node.children, start=1):
            prefix.append((node.symbol, i))
            walk(c, prefix)
            prefix.pop()

    walk(t, [])
    return tuple(sorted(set(out)))


def path_closure_crisp(alphabet, trees, height_bound):
    """All trees of height <= bound whose every path occurs in the given set.

    Works on the path-set directly: a node is admissible when each child can
    realize the corresponding residual path set, so no global enumeration of
    the tree space is needed.
    """
    allowed = frozenset(p for t in trees for p in delta(t))

    @lru_cache(maxsize=None)
    def realize(paths, bound):
        found = []
        for x in alphabet.leaves:
            if PathWord((), x) in paths:
                found.append(Tree(x))
        if bound == 0:
            return tuple(found)
        for f, m in alphabet.symbols:
            residuals = []
            for i in range(1, m + 1):
                residuals.append(
                    frozenset(PathWord(p.letters[1:], p.leaf) for p in paths if p.letters[:1] == ((f, i),))
                )
            if any(not r for r in residuals):
                continue
            options = [realize(r, bound - 1) for r in residuals]
            if any(not o for o in options):
                continue
            for combo in iproduct(*options):
                found.append(Tree(f, combo))
        return tuple(found)

    result = realize(allowed, height_bound)
    realize.cache_clear()
    return set(result)


# -- contexts -----------------------------------------------------------

class Context:
    """A tree over the alphabet plus one ``@`` hole leaf."""

    __slots__ = ("tree",)

    def __init__(self, tree):
        holes = sum(1 for s in tree.leaves() if s == HOLE)
        if holes != 1:
            raise ValidationError(f"context needs exactly one hole, found {holes}")
        object.__setattr__(self, "tree", tree)

    def __setattr__(self, name, value):
        raise AttributeError("contexts are immutable")

    @property
    def depth(self):
        """Distance from the root to the hole."""

        def dist(node):
            if node.is_leaf:
                return 0 if node.symbol == HOLE else None
            for c in node.children:
                d = dist(c)
                if d is not None:
                    return d + 1
            return None

        return dist(self.tree)

    def fill(self, arg):
        """Substitute a tree (giving a tree) or a context (giving a context)."""
        plug = arg.tree if isinstance(arg, Context) else arg

        def go(node):
            if node.is_leaf:
                return plug if node.symbol == HOLE else node
            return Tree(node.symbol, [go(c) for c in node.children])

        filled = go(self.tree)
        return Context(filled) if isinstance(arg, Context) else filled

    def non_hole_leaves(self):
        return [s for s in self.tree.leaves() if s != HOLE]

    def __eq__(self, other):
        return isinstance(other, Context) and self.tree == other.tree

    def __hash__(self):
        return hash((Context, self.tree))

    def __str__(self):
        return str(self.tree)

    def __repr__(self):
        return f"Context[{self.tree}]"


def hole():
    return Context(Tree(HOLE))


def parse_context(text):
    return Context(parse_tree(text))


def context_at(t, position):
    """Split `t` at a child-index position into (context, subtree)."""
    if not position:
        return hole(), t

    def rebuild(node, pos):
        i = pos[0]
        children = list(node.children)
        if len(pos) == 1:
            sub = children[i]
            children[i] = Tree(HOLE)
        else:
            children[i], sub = rebuild(children[i], pos[1:])
        return Tree(node.symbol, children), sub

    shape, sub = rebuild(t, list(position))
    return Context(shape), sub


# -- tree homomorphisms --------------------------------------------------

class TreeHomomorphism:
    """Maps trees over one alphabet to trees over another.

    Leaf images are target trees; the image of an m-ary symbol is a target
    tree over the target leaves plus variables ``$1``..``$m`` marking where
    the translated children go.  Variables may repeat (duplicating) or be
    absent (deleting).
    """

    __slots__ = ("source", "target", "leaf_images", "symbol_images", "is_alphabetic", "is_injective")

    def __init__(self, source, target, leaf_images, symbol_images):
        for x in source.leaves:
            if x not in leaf_images:
                raise ValidationError(f"no image for leaf {x!r}")
            target.validate_tree(leaf_images[x])
        for f, m in source.symbols:
            if f not in symbol_images:
                raise ValidationError(f"no image for symbol {f!r}")
            image = symbol_images[f]
            variables = [f"${i}" for i in range(1, m + 1)]
            target.validate_tree(image, extra_leaves=variables)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "leaf_images", dict(leaf_images))
        object.__setattr__(self, "symbol_images", dict(symbol_images))
        object.__setattr__(self, "is_alphabetic", self._alphabetic())
        object.__setattr__(self, "is_injective", self._injective())

    def __setattr__(self, name, value):
        raise AttributeError("homomorphisms are immutable")

    def _alphabetic(self):
        for x, img in self.leaf_images.items():
            if not (img.is_leaf and self.target.is_leaf(img.symbol)):
                return False
        for f, m in self.source.symbols:
            img = self.symbol_images[f]
            if img.is_leaf or not self.target.is_symbol(img.symbol):
                return False
            if self.target.arity(img.symbol) != m:
                return False
            expected = tuple(var(i) for i in range(1, m + 1))
            if img.children != expected:
                return False
        return True

    def _injective(self):
        # Structural check: image symbols pairwise distinct and leaf map injective.
        if not self._alphabetic():
            return False
        leaf_targets = [img.symbol for img in self.leaf_images.values()]
        sym_targets = [self.symbol_images[f].symbol for f, _ in self.source.symbols]
        return len(set(leaf_targets)) == len(leaf_targets) and len(set(sym_targets)) == len(sym_targets)

    def require_alphabetic(self):
        if not self.is_alphabetic:
            raise NotAlphabeticError("homomorphism is not alphabetic")

    def require_injective(self):
        if not self.is_injective:
            raise NotInjectiveError("homomorphism is not injective")

    def __call__(self, t):
        if t.is_leaf:
            m = _VAR.match(str(t.symbol))
            if m:
                raise ValidationError("cannot apply homomorphism to a variable")
            return self.leaf_images[t.symbol]
        images = [self(c) for c in t.children]
        return substitute_vars(self.symbol_images[t.symbol], images)


def substitute_vars(image, replacements):
    """Replace each ``$i`` leaf of `image` by replacements[i-1]."""
    if image.is_leaf:
        m = _VAR.match(str(image.symbol))
        if m:
            return replacements[int(m.group(1)) - 1]
        return image
    return Tree(image.symbol, [substitute_vars(c, replacements) for c in image.children])


def identity_hom(alphabet):
    return TreeHomomorphism(
        alphabet,
        alphabet,
        {x: Tree(x) for x in alphabet.leaves},
        {f: Tree(f, [var(i) for i in range(1, m + 1)]) for f, m in alphabet.symbols},
    )
