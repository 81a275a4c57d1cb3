"""Memory trees and the partial maps ("stack operations") acting on them.

A memory tree is a finite rooted tree with labeled edges, vertices numbered
in creation order, and one distinguished vertex on the path from the root to
the latest vertex.  The creation order is always a depth-first order of the
tree; this is an invariant that `validate` checks rather than assumes.

Stack operations are partial injective maps on memory trees.  Applying an
operation outside its domain yields the UNDEFINED sentinel, not an
exception: partiality here is semantics, not an error condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

# The root has no inedge; its "current memory symbol" is the empty word.
# Real edges are never labeled EPSILON.
EPSILON = ""


class _Undefined:
    """Result of applying a stack operation outside its domain."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()

OP_KINDS = ("down", "up", "push", "pop", "stay")


@dataclass(frozen=True)
class StackOp:
    """A generator of the stack-operation monoid, or the identity `stay`.

    `up` accepts EPSILON as its symbol (meaning: distinguished vertex is the
    root); the other three symbol-carrying kinds require a real symbol.
    """

    kind: str
    symbol: str = EPSILON

    def __post_init__(self):
        if self.kind not in OP_KINDS:
            raise ValueError(f"unknown stack operation kind {self.kind!r}")
        if self.kind in ("down", "push", "pop") and self.symbol == EPSILON:
            raise ValueError(f"{self.kind} requires a non-empty memory symbol")
        if self.kind == "stay" and self.symbol != EPSILON:
            raise ValueError("stay takes no symbol")

    def __str__(self):
        if self.kind == "stay":
            return "stay"
        return f"{self.kind} {self.symbol or 'eps'}"


def down(symbol: str) -> StackOp:
    return StackOp("down", symbol)


def up(symbol: str = EPSILON) -> StackOp:
    return StackOp("up", symbol)


def push(symbol: str) -> StackOp:
    return StackOp("push", symbol)


def pop(symbol: str) -> StackOp:
    return StackOp("pop", symbol)


STAY = StackOp("stay")


@dataclass(frozen=True)
class MemoryTree:
    """Rooted labeled tree in creation order with a distinguished vertex.

    parents[i] is the parent of vertex i (-1 for the root), labels[i] the
    label of its inedge (EPSILON for the root).  Vertex len-1 is the latest.
    Instances are immutable; operations return fresh trees.
    """

    parents: Tuple[int, ...] = (-1,)
    labels: Tuple[str, ...] = (EPSILON,)
    distinguished: int = 0

    def __len__(self):
        return len(self.parents)

    @property
    def edge_count(self) -> int:
        return len(self.parents) - 1

    @property
    def current_symbol(self) -> str:
        """Label of the inedge to the distinguished vertex; EPSILON at the root."""
        return self.labels[self.distinguished]

    def children(self, v: int) -> List[int]:
        return [i for i, p in enumerate(self.parents) if p == v]

    def is_leaf(self, v: int) -> bool:
        return v not in self.parents

    def spine(self) -> List[int]:
        """Vertices on the path from the root to the latest vertex."""
        path = []
        v = len(self.parents) - 1
        while v != -1:
            path.append(v)
            v = self.parents[v]
        path.reverse()
        return path

    def branch_labels(self) -> Optional[Tuple[str, ...]]:
        """Edge labels root-to-leaf when the tree is a single branch, else None."""
        if any(self.parents[i] != i - 1 for i in range(1, len(self.parents))):
            return None
        return self.labels[1:]

    def __str__(self):
        branch = self.branch_labels()
        if branch is not None:
            word = "".join(branch) or "ε"
            return f"{word}@{self.distinguished}"
        pairs = ",".join(
            f"{p}-{lab}" for p, lab in zip(self.parents[1:], self.labels[1:])
        )
        return f"[{pairs}]@{self.distinguished}"


def empty_tree() -> MemoryTree:
    """The tree consisting of just the root, which is also distinguished."""
    return MemoryTree()


def apply(op: StackOp, tree: MemoryTree):
    """Apply one stack operation to a valid tree.

    Returns the resulting tree, or UNDEFINED when `tree` lies outside the
    operation's domain.
    """
    v = tree.distinguished
    cur = tree.labels[v]
    kind = op.kind
    if kind == "stay":
        return tree
    if kind == "push":
        return MemoryTree(
            tree.parents + (v,), tree.labels + (op.symbol,), len(tree.parents)
        )
    if kind == "down":
        if v == 0 or cur != op.symbol:
            return UNDEFINED
        return MemoryTree(tree.parents, tree.labels, tree.parents[v])
    if kind == "up":
        if cur != op.symbol:
            return UNDEFINED
        kids = tree.children(v)
        if not kids:
            return UNDEFINED
        # the latest child is the one with the highest creation index
        return MemoryTree(tree.parents, tree.labels, max(kids))
    # pop: only the latest vertex is ever a deletable leaf (and never the root)
    if v != len(tree.parents) - 1 or v == 0 or cur != op.symbol:
        return UNDEFINED
    return MemoryTree(tree.parents[:-1], tree.labels[:-1], tree.parents[v])


def apply_word(ops: Iterable[StackOp], tree: MemoryTree):
    """Left-to-right composition; UNDEFINED as soon as any step is undefined."""
    for op in ops:
        tree = apply(op, tree)
        if tree is UNDEFINED:
            return UNDEFINED
    return tree


def defined_on(op: StackOp, symbol: str, at_leaf: bool) -> bool:
    """Whether `op` is defined on a tree whose distinguished vertex has the
    given current symbol and leaf status.

    These two observations determine each generator's domain exactly
    (symbol == EPSILON if and only if the distinguished vertex is the root),
    which is what makes the determinism check decidable symbolically.
    """
    if op.kind in ("push", "stay"):
        return True
    if op.kind == "down":
        return symbol == op.symbol  # a real symbol already rules out the root
    if op.kind == "up":
        return symbol == op.symbol and not at_leaf
    return symbol == op.symbol and at_leaf  # pop


def validate(tree: MemoryTree) -> List[str]:
    """All invariant violations of `tree`; an empty list means it is valid."""
    out = []
    n = len(tree.parents)
    if n == 0 or len(tree.labels) != n:
        return ["malformed: parents/labels length mismatch or no root"]
    if tree.parents[0] != -1:
        out.append("root must have parent -1")
    if tree.labels[0] != EPSILON:
        out.append("root must have an empty inedge label")
    for i in range(1, n):
        if not 0 <= tree.parents[i] < i:
            out.append(f"vertex {i}: parent must be an earlier vertex")
        if tree.labels[i] == EPSILON:
            out.append(f"vertex {i}: real edges need a non-empty label")
    if out:
        return out
    # creation order must be a depth-first order: visiting children in
    # creation order must enumerate the vertices as 0, 1, ..., n-1
    children = [[] for _ in range(n)]
    for i in range(1, n):
        children[tree.parents[i]].append(i)
    order = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(children[v]))
    if order != list(range(n)):
        out.append("creation order is not a depth-first order of the tree")
    if not 0 <= tree.distinguished < n:
        out.append("distinguished vertex out of range")
    elif tree.distinguished not in tree.spine():
        out.append("distinguished vertex off the root-to-latest path")
    return out


def tree_lines(tree: MemoryTree) -> str:
    """Edge-list dump for debugging: one `parent child label` line per edge,
    with `*` flagging the distinguished vertex.  Not a stable wire format."""
    lines = [f"# {len(tree.parents)} vertices, distinguished {tree.distinguished}"]
    for i in range(1, len(tree.parents)):
        star = " *" if i == tree.distinguished else ""
        lines.append(f"{tree.parents[i]} {i} {tree.labels[i]}{star}")
    return "\n".join(lines)
