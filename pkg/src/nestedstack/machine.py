"""Nested stack automata as labeled directed graphs.

Covers the machine file format, bounded acceptance search, language
enumeration, and the determinism / limited-erasing decision procedures.
Acceptance search is three-valued: resource caps are part of the contract,
so a verdict is ACCEPTED, REJECTED (exhaustive search), or CAP_EXCEEDED.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .graphs import weighted_path_bound
from .memory_tree import (
    EPSILON,
    UNDEFINED,
    MemoryTree,
    StackOp,
    apply,
    defined_on,
    empty_tree,
)

Word = Tuple[str, ...]

ACCEPTED = "ACCEPTED"
REJECTED = "REJECTED"
CAP_EXCEEDED = "CAP_EXCEEDED"


class MachineError(ValueError):
    """A machine violating its structural invariants."""


class MachineParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        self.message = message
        super().__init__(f"line {line_no}: {message}")


class NondeterminismDetected(RuntimeError):
    """Two continuations applied where a deterministic run was promised."""


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    op: StackOp
    letter: str  # EPSILON for silent moves

    def __str__(self):
        letter = self.letter or "eps"
        return f"{self.src} -({self.op}, {letter})-> {self.dst}"


@dataclass(frozen=True)
class Machine:
    states: Tuple[str, ...]
    initial: str
    finals: frozenset
    input_alphabet: frozenset
    memory_alphabet: frozenset
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        states = set(self.states)
        if len(states) != len(self.states):
            raise MachineError("duplicate state id")
        if self.initial not in states:
            raise MachineError(f"initial state {self.initial!r} not declared")
        for q in self.finals:
            if q not in states:
                raise MachineError(f"final state {q!r} not declared")
        for e in self.edges:
            if e.src not in states or e.dst not in states:
                raise MachineError(f"edge endpoint not declared: {e}")
            if e.op.symbol != EPSILON and e.op.symbol not in self.memory_alphabet:
                raise MachineError(f"edge uses undeclared memory symbol {e.op.symbol!r}")
            if e.letter != EPSILON and e.letter not in self.input_alphabet:
                raise MachineError(f"edge uses undeclared input letter {e.letter!r}")

    def edges_from(self, state: str) -> List[Edge]:
        return [e for e in self.edges if e.src == state]

    def out_index(self) -> Dict[str, List[Edge]]:
        index: Dict[str, List[Edge]] = {q: [] for q in self.states}
        for e in self.edges:
            index[e.src].append(e)
        return index


# --- machine file format -----------------------------------------------
#
#   states: 1 2 3 4          # one line per section, `#` starts a comment
#   start: 1
#   final: 1
#   input: a b c d
#   memory: x y
#   edge: 1 2 push y eps     # push s | pop s | down s | up s | up eps | stay
#
# `eps` stands for the empty input or the empty up-symbol.  Tokens starting
# with `__` are reserved for generated machines and rejected here.

_SINGLE_SECTIONS = ("states", "start", "final", "input", "memory")


def _check_token(token: str, line_no: int, role: str) -> str:
    if token == "eps":
        raise MachineParseError(line_no, f"'eps' cannot be declared as a {role}")
    if token.startswith("__"):
        raise MachineParseError(
            line_no, f"{role} {token!r} uses the reserved '__' namespace"
        )
    return token


def parse_machine(text: str) -> Machine:
    sections: Dict[str, List[str]] = {}
    section_line: Dict[str, int] = {}
    edge_rows: List[Tuple[int, List[str]]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise MachineParseError(line_no, f"expected 'key: ...', got {line!r}")
        key, _, rest = line.partition(":")
        key = key.strip()
        tokens = rest.split()
        if key == "edge":
            edge_rows.append((line_no, tokens))
        elif key in _SINGLE_SECTIONS:
            if key in sections:
                raise MachineParseError(line_no, f"duplicate section {key!r}")
            sections[key] = tokens
            section_line[key] = line_no
        else:
            raise MachineParseError(line_no, f"unknown section {key!r}")

    for required in ("states", "start"):
        if required not in sections:
            raise MachineParseError(0, f"missing required section {required!r}")

    def declared(key: str, role: str) -> List[str]:
        tokens = sections.get(key, [])
        line_no = section_line.get(key, 0)
        seen = set()
        for t in tokens:
            _check_token(t, line_no, role)
            if t in seen:
                raise MachineParseError(line_no, f"duplicate {role} {t!r}")
            seen.add(t)
        return tokens

    states = declared("states", "state")
    input_alphabet = declared("input", "input letter")
    memory_alphabet = declared("memory", "memory symbol")
    start_tokens = sections["start"]
    if len(start_tokens) != 1:
        raise MachineParseError(section_line["start"], "start takes exactly one state")
    initial = start_tokens[0]
    finals = declared("final", "final state")

    state_set = set(states)
    if initial not in state_set:
        raise MachineParseError(section_line["start"], f"unknown start state {initial!r}")
    for q in finals:
        if q not in state_set:
            raise MachineParseError(section_line["final"], f"unknown final state {q!r}")

    edges: List[Edge] = []
    seen_edges: Set[Edge] = set()
    for line_no, tokens in edge_rows:
        if len(tokens) < 4:
            raise MachineParseError(line_no, "edge needs: SRC DST OP [SYMBOL] INPUT")
        src, dst, kind = tokens[0], tokens[1], tokens[2]
        if src not in state_set:
            raise MachineParseError(line_no, f"unknown state {src!r}")
        if dst not in state_set:
            raise MachineParseError(line_no, f"unknown state {dst!r}")
        if kind == "stay":
            if len(tokens) != 4:
                raise MachineParseError(line_no, "stay takes no memory symbol")
            op = StackOp("stay")
            letter_token = tokens[3]
        else:
            if kind not in ("push", "pop", "down", "up"):
                raise MachineParseError(line_no, f"unknown operation {kind!r}")
            if len(tokens) != 5:
                raise MachineParseError(line_no, f"{kind} needs: SRC DST {kind} SYMBOL INPUT")
            symbol = tokens[3]
            if symbol == "eps":
                if kind != "up":
                    raise MachineParseError(line_no, f"{kind} requires a real memory symbol")
                op = StackOp("up", EPSILON)
            else:
                if symbol not in memory_alphabet:
                    raise MachineParseError(line_no, f"undeclared memory symbol {symbol!r}")
                op = StackOp(kind, symbol)
            letter_token = tokens[4]
        if letter_token == "eps":
            letter = EPSILON
        elif letter_token in input_alphabet:
            letter = letter_token
        else:
            raise MachineParseError(line_no, f"undeclared input letter {letter_token!r}")
        edge = Edge(src, dst, op, letter)
        if edge not in seen_edges:  # identical rows collapse to one edge
            seen_edges.add(edge)
            edges.append(edge)

    return Machine(
        states=tuple(states),
        initial=initial,
        finals=frozenset(finals),
        input_alphabet=frozenset(input_alphabet),
        memory_alphabet=frozenset(memory_alphabet),
        edges=tuple(edges),
    )


def format_machine(machine: Machine) -> str:
    """Render in the machine file format; parse(format(m)) == m."""
    lines = [
        "states: " + " ".join(machine.states),
        "start: " + machine.initial,
        "final: " + " ".join(sorted(machine.finals)),
        "input: " + " ".join(sorted(machine.input_alphabet)),
        "memory: " + " ".join(sorted(machine.memory_alphabet)),
    ]
    for e in machine.edges:
        op = e.op
        if op.kind == "stay":
            op_part = "stay"
        else:
            op_part = f"{op.kind} {op.symbol or 'eps'}"
        lines.append(f"edge: {e.src} {e.dst} {op_part} {e.letter or 'eps'}")
    return "\n".join(lines) + "\n"


def parse_word(text: str) -> Word:
    """A word from CLI text: whitespace-separated tokens, or one letter per
    character when there is no whitespace."""
    if text.split() != [text]:
        return tuple(text.split())
    return tuple(text)


# --- running machines ---------------------------------------------------


@dataclass(frozen=True)
class ResourceCaps:
    max_steps: int = 10**6
    max_tree_edges: int = 10**4
    max_frontier: int = 10**5


@dataclass(frozen=True)
class Computation:
    """A path from the initial state together with its input word and the
    memory tree it produces."""

    path: Tuple[Edge, ...]
    word: Word
    outcome: MemoryTree


@dataclass(frozen=True)
class AcceptResult:
    verdict: str
    witness: Optional[Computation] = None
    caps_hit: Tuple[str, ...] = ()


def step(machine: Machine, state: str, tree: MemoryTree, letter: str):
    """All one-edge successors of (state, tree) whose input component equals
    `letter` and whose operation is defined on `tree`."""
    out = set()
    for e in machine.edges:
        if e.src == state and e.letter == letter:
            t2 = apply(e.op, tree)
            if t2 is not UNDEFINED:
                out.add((e.dst, t2))
    return out


def accepts(machine: Machine, word: Iterable[str], caps: ResourceCaps = ResourceCaps()) -> AcceptResult:
    """Breadth-first search over (state, tree, position) with deduplication.

    ACCEPTED comes with a witness computation ending at a final state with
    empty memory.  REJECTED is only reported when the search exhausted the
    frontier without any cap pruning anything; otherwise CAP_EXCEEDED names
    the caps that fired.
    """
    word = tuple(word)
    out_index = machine.out_index()
    start = (machine.initial, empty_tree(), 0)
    parent: Dict[tuple, Optional[Tuple[tuple, Edge]]] = {start: None}
    queue = deque([start])
    caps_hit: List[str] = []
    steps = 0

    def hit(name: str):
        if name not in caps_hit:
            caps_hit.append(name)

    goal = None
    while queue:
        if len(queue) > caps.max_frontier:
            hit("max_frontier")
            break
        state, tree, pos = cfg = queue.popleft()
        if pos == len(word) and state in machine.finals and tree == empty_tree():
            goal = cfg
            break
        steps += 1
        if steps > caps.max_steps:
            hit("max_steps")
            break
        for e in out_index[state]:
            if e.letter == EPSILON:
                new_pos = pos
            elif pos < len(word) and e.letter == word[pos]:
                new_pos = pos + 1
            else:
                continue
            t2 = apply(e.op, tree)
            if t2 is UNDEFINED:
                continue
            if t2.edge_count > caps.max_tree_edges:
                hit("max_tree_edges")
                continue
            nxt = (e.dst, t2, new_pos)
            if nxt not in parent:
                parent[nxt] = (cfg, e)
                queue.append(nxt)

    if goal is not None:
        path: List[Edge] = []
        cfg = goal
        while parent[cfg] is not None:
            cfg, e = parent[cfg]
            path.append(e)
        path.reverse()
        witness = Computation(tuple(path), word, goal[1])
        return AcceptResult(ACCEPTED, witness=witness)
    if caps_hit:
        return AcceptResult(CAP_EXCEEDED, caps_hit=tuple(caps_hit))
    return AcceptResult(REJECTED)


class EnumerationCapExceeded(RuntimeError):
    """Enumeration would be unsound: a resource cap pruned live branches."""


def enumerate_accepted(
    machine: Machine, max_len: int, caps: ResourceCaps = ResourceCaps()
) -> Set[Word]:
    """Exactly the accepted words of length <= max_len.

    Searches (state, tree, consumed word) triples; skipping consuming edges
    at the length bound is sound, but any resource cap firing escalates,
    because a pruned search could miss members."""
    out_index = machine.out_index()
    start = (machine.initial, empty_tree(), ())
    seen = {start}
    queue = deque([start])
    found: Set[Word] = set()
    steps = 0
    while queue:
        if len(queue) > caps.max_frontier:
            raise EnumerationCapExceeded("max_frontier")
        state, tree, word = queue.popleft()
        if state in machine.finals and tree == empty_tree():
            found.add(word)
        steps += 1
        if steps > caps.max_steps:
            raise EnumerationCapExceeded("max_steps")
        for e in out_index[state]:
            if e.letter == EPSILON:
                new_word = word
            elif len(word) < max_len:
                new_word = word + (e.letter,)
            else:
                continue
            t2 = apply(e.op, tree)
            if t2 is UNDEFINED:
                continue
            if t2.edge_count > caps.max_tree_edges:
                raise EnumerationCapExceeded("max_tree_edges")
            nxt = (e.dst, t2, new_word)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return found


# --- decision procedures -------------------------------------------------


@dataclass(frozen=True)
class DeterminismConflict:
    """Two outedges that compete on some input and whose operation domains
    share a tree (witnessed by a current symbol and leaf status)."""

    state: str
    first: Edge
    second: Edge
    symbol: str
    at_leaf: bool


def check_deterministic(machine: Machine) -> Optional[DeterminismConflict]:
    """None when deterministic, else the first conflicting pair of edges.

    Edges compete when their input letters are equal or either is silent.
    A conflict needs both operation domains satisfied at once; domains are
    determined by the current symbol and leaf status alone, so we enumerate
    those combinations over the machine's finite memory alphabet."""
    symbols = sorted(machine.memory_alphabet) + [EPSILON]
    for state in machine.states:
        outs = machine.edges_from(state)
        for i, e1 in enumerate(outs):
            for e2 in outs[i + 1 :]:
                if e1.letter != e2.letter and EPSILON not in (e1.letter, e2.letter):
                    continue
                for sym in symbols:
                    for at_leaf in (True, False):
                        if defined_on(e1.op, sym, at_leaf) and defined_on(
                            e2.op, sym, at_leaf
                        ):
                            return DeterminismConflict(state, e1, e2, sym, at_leaf)
    return None


@dataclass(frozen=True)
class ErasingReport:
    bounded: bool
    bound: Optional[int] = None
    cycle: Optional[Tuple[Edge, ...]] = None


def check_limited_erasing(machine: Machine) -> ErasingReport:
    """Bound on pop-edges along silent paths of the machine graph.

    This quantifies over graph paths (ignoring whether the stack could
    actually execute them), which is exactly the property being decided:
    restrict to silent edges, weight pops 1, and either find a cycle
    through a pop or take the max-weight path over the condensation."""
    eps_edges = [
        (e.src, e.dst, 1 if e.op.kind == "pop" else 0, e)
        for e in machine.edges
        if e.letter == EPSILON
    ]
    bound, cycle = weighted_path_bound(eps_edges)
    if cycle is not None:
        return ErasingReport(bounded=False, cycle=tuple(cycle))
    return ErasingReport(bounded=True, bound=bound)


# --- deterministic traces -------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    edge: Edge
    tree: MemoryTree
    consumed: int


@dataclass(frozen=True)
class Trace:
    word: Word
    steps: Tuple[TraceStep, ...]
    consumed: int
    final_state: str
    final_tree: MemoryTree
    accepted_at: Tuple[int, ...]  # step counts after which (final, empty, done)
    stopped: str  # "halted" or "max_steps"


def run_trace(machine: Machine, word: Iterable[str], caps: ResourceCaps = ResourceCaps()) -> Trace:
    """The unique maximal computation of a deterministic machine consuming a
    prefix of `word`, as a step-by-step listing.

    Raises NondeterminismDetected if two continuations ever apply."""
    word = tuple(word)
    out_index = machine.out_index()
    state, tree, pos = machine.initial, empty_tree(), 0
    steps: List[TraceStep] = []
    accepted_at: List[int] = []
    stopped = "halted"
    while True:
        if pos == len(word) and state in machine.finals and tree == empty_tree():
            accepted_at.append(len(steps))
        if len(steps) >= caps.max_steps:
            stopped = "max_steps"
            break
        applicable: List[Tuple[Edge, MemoryTree]] = []
        for e in out_index[state]:
            if e.letter != EPSILON and not (pos < len(word) and e.letter == word[pos]):
                continue
            t2 = apply(e.op, tree)
            if t2 is not UNDEFINED:
                applicable.append((e, t2))
        if not applicable:
            break
        if len(applicable) > 1:
            raise NondeterminismDetected(
                f"state {state}, tree {tree}: edges {applicable[0][0]} and {applicable[1][0]} both apply"
            )
        e, tree = applicable[0]
        state = e.dst
        if e.letter != EPSILON:
            pos += 1
        steps.append(TraceStep(e, tree, pos))
    return Trace(
        word=word,
        steps=tuple(steps),
        consumed=pos,
        final_state=state,
        final_tree=tree,
        accepted_at=tuple(accepted_at),
        stopped=stopped,
    )
