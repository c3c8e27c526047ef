# Binary-inequality view of constraint models: expanding big constraints to
# deduplicated cell-pair inequalities, counting them, and probing whether an
# individual pair can be dropped without weakening the model.

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .board import Board, ConstraintSet, Grid, region_cells
from .solver import make_problem, solve

CONFIRMED_NEEDED = "confirmed-needed"
INCONCLUSIVE = "inconclusive"


def flat_pair(board: Board, a, b) -> tuple[int, int]:
    """Canonical key of an unordered cell pair: (min, max) of flat indices."""
    ia = board.cell_index(*a)
    ib = board.cell_index(*b)
    if ia == ib:
        raise ValueError(f"pair must join two distinct cells, got {tuple(a)} twice")
    return (ia, ib) if ia < ib else (ib, ia)


def pair_cells(board: Board, pair) -> tuple[tuple[int, int], tuple[int, int]]:
    a, b = pair
    return board.cell_coords(a), board.cell_coords(b)


@lru_cache(maxsize=None)
def _region_pairs(n: int) -> tuple[frozenset, ...]:
    board = Board(n)
    out = []
    for cid in range(board.num_big):
        cells = region_cells(cid, board)
        out.append(frozenset(combinations(cells, 2)))
    return tuple(out)


def expand_small(cset: ConstraintSet) -> frozenset:
    """All cell-pair inequalities implied by the present big constraints.

    Pairs inside several present regions (a line and a box overlap in n
    cells) appear once.
    """
    tables = _region_pairs(cset.board.n)
    pairs = set()
    for cid in cset.present_ids:
        pairs |= tables[cid]
    return frozenset(pairs)


def small_count_range(classes):
    """Extremes of the expanded-pair count over a list of models.

    Returns (min_count, max_count, argmin, argmax) where the arg slots hold
    every input model attaining that extreme, in input order.
    """
    classes = list(classes)
    if not classes:
        raise ValueError("small_count_range needs at least one model")
    counts = [len(expand_small(c)) for c in classes]
    lo, hi = min(counts), max(counts)
    argmin = tuple(c for c, k in zip(classes, counts) if k == lo)
    argmax = tuple(c for c, k in zip(classes, counts) if k == hi)
    return lo, hi, argmin, argmax


def sample_probes(base, count: int, seed: int = 0) -> list:
    """Deterministic seeded sample of pairs from a small-constraint set."""
    ordered = sorted(base)
    if count >= len(ordered):
        return ordered
    return sorted(random.Random(seed).sample(ordered, count))


def _decompose(board: Board, rest: frozenset):
    # Split a pair set into whole regions plus leftover pairs.  The solver
    # then propagates region-wise over the wholly covered regions instead of
    # treating every pair individually.
    tables = _region_pairs(board.n)
    mask = 0
    covered = set()
    for cid in range(board.num_big):
        if tables[cid] <= rest:
            mask |= 1 << cid
            covered |= tables[cid]
    bigs = ConstraintSet(board, mask)
    extras = tuple(pair_cells(board, p) for p in sorted(rest - covered))
    return bigs, extras


@dataclass(frozen=True)
class ProbeRecord:
    """Outcome of one equality probe against a pair of a small set."""

    pair: tuple[int, int]
    verdict: str
    witness: Grid | None
    nodes: int
    propagations: int
    seed_index: int | None = None

    def to_json_dict(self, board: Board) -> dict:
        cells = pair_cells(board, self.pair)
        return {
            "pair": [list(cells[0]), list(cells[1])],
            "verdict": self.verdict,
            "witness": self.witness.to_line() if self.witness else None,
            "nodes": self.nodes,
            "propagations": self.propagations,
            "seed_index": self.seed_index,
        }


# Unseeded probes split their budget over a deterministic restart ladder:
# one ascending pass, then shuffled value orders.  Satisfiable probe
# instances that stall under one ordering almost always fall quickly to
# another, so many shallow restarts beat few deep ones.
PROBE_RESTART_SEEDS = (None,) + tuple(range(15))

DEFAULT_PROBE_BUDGET = 200_000


def probe_pair(board: Board, base, pair, corpus=None,
               budget: int = DEFAULT_PROBE_BUDGET) -> ProbeRecord:
    """Test one pair of `base`: can the remaining pairs still force it apart?

    Builds Rest = base minus the pair and searches for a grid satisfying
    Rest with the pair's cells equal.  A solution proves Rest admits a grid
    the full model rejects, so the pair is reported as needed.  No solution
    within budget is inconclusive, never proof of redundancy.

    With a corpus, each puzzle in order seeds the search as givens and the
    first solution wins; without one, restarts split the budget.  Unseeded
    searches also pin the forced-equal cells to value 1: relabeling values
    maps solutions to solutions, so the pin costs no generality.
    """
    pair = tuple(pair)
    if pair not in base:
        raise ValueError(f"probe pair {pair} is not in the base set")
    rest = frozenset(base - {pair})
    bigs, extras = _decompose(board, rest)
    equality = (pair_cells(board, pair),)
    nodes = propagations = 0
    if corpus:
        attempts = []
        for index, givens in enumerate(corpus):
            attempts.append((index, givens, None, budget))
    else:
        pin = [0] * board.num_cells
        pin[pair[0]] = pin[pair[1]] = 1
        pinned = Grid(board, tuple(pin))
        rung = max(1000, budget // len(PROBE_RESTART_SEEDS))
        attempts = [(None, pinned, seed, rung) for seed in PROBE_RESTART_SEEDS]
    for index, givens, value_seed, node_limit in attempts:
        problem = make_problem(bigs, extra_smalls=extras, equalities=equality,
                               givens=givens)
        outcome = solve(problem, budget=node_limit, value_order_seed=value_seed)
        nodes += outcome.stats.nodes
        propagations += outcome.stats.propagations
        if outcome.is_solution:
            return ProbeRecord(pair, CONFIRMED_NEEDED, outcome.grid,
                               nodes, propagations, index)
    return ProbeRecord(pair, INCONCLUSIVE, None, nodes, propagations)


def probe_minimality(board: Board, base, probes, corpus=None,
                     budget: int = DEFAULT_PROBE_BUDGET) -> list:
    """Run probe_pair over a selection of pairs, in the given order."""
    base = frozenset(base)
    return [probe_pair(board, base, pair, corpus=corpus, budget=budget)
            for pair in probes]


def experimental_reduce(board: Board, base, seed: int = 0,
                        budget: int = 50_000, max_drops: int | None = None):
    """Heuristic search for a smaller pair set with no found counterexample.

    Greedily drops pairs whose probe finds no solution within budget.  Every
    drop rests on a failure to disprove, not a proof, so the result is a
    candidate reduction only.  Returns (reduced_set, dropped_pairs).
    """
    current = set(base)
    order = sorted(current)
    random.Random(seed).shuffle(order)
    dropped = []
    for pair in order:
        if max_drops is not None and len(dropped) >= max_drops:
            break
        record = probe_pair(board, frozenset(current), pair, budget=budget)
        if record.verdict == INCONCLUSIVE:
            current.discard(pair)
            dropped.append(pair)
    return frozenset(current), dropped
