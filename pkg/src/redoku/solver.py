# Propagation-based backtracking solver over constraint models.  Problems mix
# big (all-different) constraints, extra binary inequalities, forced-equal cell
# pairs, and given values; outcomes carry search statistics and are always
# re-verified before being reported.

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .board import (BOX, COL, ROW, Board, ConstraintSet, Grid,
                    pattern_solution, region_cells, verify_grid)
from .rewrite import close_mask

SOLUTION = "solution"
UNSATISFIABLE = "unsatisfiable"
BUDGET = "budget"

DEFAULT_NODE_BUDGET = 10_000_000

Cell = tuple[int, int]
CellPair = tuple[Cell, Cell]


def normalize_pair(a, b) -> CellPair:
    """Canonical unordered pair of (row, col) cells."""
    a, b = (tuple(a), tuple(b))
    if a == b:
        raise ValueError(f"pair must join two distinct cells, got {a} twice")
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class SolverProblem:
    """Immutable problem statement handed to solve()."""

    board: Board
    bigs: ConstraintSet
    extra_smalls: frozenset
    equalities: frozenset
    givens: Grid | None = None


def make_problem(bigs: ConstraintSet, extra_smalls=(), equalities=(),
                 givens: Grid | None = None) -> SolverProblem:
    """Build a SolverProblem with normalized pair sets.

    Pairs are given as ((row, col), (row, col)) tuples, 1-based.  Givens,
    when present, must belong to the same board as the constraint set.
    """
    board = bigs.board
    if givens is not None and givens.board != board:
        raise ValueError("givens grid belongs to a different board")
    smalls = frozenset(normalize_pair(a, b) for a, b in extra_smalls)
    eqs = frozenset(normalize_pair(a, b) for a, b in equalities)
    for (ra, ca), (rb, cb) in smalls | eqs:
        board.cell_index(ra, ca)
        board.cell_index(rb, cb)
    return SolverProblem(board, bigs, smalls, eqs, givens)


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    propagations: int
    degenerate: bool = False


@dataclass(frozen=True)
class SolverOutcome:
    status: str
    grid: Grid | None
    stats: SolveStats

    @property
    def is_solution(self) -> bool:
        return self.status == SOLUTION


class _Engine:
    """Mutable search state for one solve() call (single-threaded)."""

    def __init__(self, problem: SolverProblem, value_order_seed: int | None = None):
        board = problem.board
        side = board.side
        ncells = board.num_cells

        # Union-find over cells; forced-equal cells share one variable whose
        # root is the smallest member index (keeps ordering deterministic).
        parent = list(range(ncells))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (ra, ca), (rb, cb) in sorted(problem.equalities):
            a = find(board.cell_index(ra, ca))
            b = find(board.cell_index(rb, cb))
            if a != b:
                if a > b:
                    a, b = b, a
                parent[b] = a

        self.board = board
        self.problem = problem
        self.side = side
        self.cls_of = [find(c) for c in range(ncells)]
        roots = sorted(set(self.cls_of))
        index_of = {root: i for i, root in enumerate(roots)}
        self.var_of = [index_of[r] for r in self.cls_of]
        self.nvars = len(roots)

        self.degenerate = False
        regions = []
        for cid in problem.bigs.present_ids:
            members = [self.var_of[cell] for cell in region_cells(cid, board)]
            if len(set(members)) < side:
                # An equality glued two cells of one covered region.
                self.degenerate = True
            regions.append(members)

        neighbors = [set() for _ in range(self.nvars)]
        for members in regions:
            for a, b in combinations(set(members), 2):
                neighbors[a].add(b)
                neighbors[b].add(a)
        for (ra, ca), (rb, cb) in problem.extra_smalls:
            a = self.var_of[board.cell_index(ra, ca)]
            b = self.var_of[board.cell_index(rb, cb)]
            if a == b:
                # The inequality's endpoints were forced equal.
                self.degenerate = True
                continue
            neighbors[a].add(b)
            neighbors[b].add(a)

        self.regions = [tuple(m) for m in regions]
        self.var_regions = [[] for _ in range(self.nvars)]
        for ri, members in enumerate(self.regions):
            for v in set(members):
                self.var_regions[v].append(ri)
        self.neighbors = [tuple(sorted(s)) for s in neighbors]

        if value_order_seed is None:
            self.value_orders = None
        else:
            rng = random.Random(value_order_seed)
            base = list(range(side))
            self.value_orders = []
            for _ in range(self.nvars):
                order = base[:]
                rng.shuffle(order)
                self.value_orders.append(order)

        full = (1 << side) - 1
        self.dom = [full] * self.nvars
        self.nassigned = 0
        self.trail = []
        self.queue = []
        self.dirty = set()
        self.nodes = 0
        self.propagations = 0
        self.failed = False

    def seed_givens(self) -> bool:
        givens = self.problem.givens
        if givens is None:
            return True
        for cell, value in enumerate(givens.values):
            if not value:
                continue
            var = self.var_of[cell]
            new = self.dom[var] & (1 << (value - 1))
            if new == self.dom[var]:
                continue
            if not self._set_dom(var, new):
                return False
        return True

    def _set_dom(self, var: int, new: int) -> bool:
        old = self.dom[var]
        self.trail.append((var, old))
        self.dom[var] = new
        self.propagations += 1
        if not new:
            self.failed = True
            return False
        if new & (new - 1) == 0 and old & (old - 1) != 0:
            self.nassigned += 1
            self.queue.append(var)
        self.dirty.update(self.var_regions[var])
        return True

    def _undo(self, mark: int) -> None:
        trail = self.trail
        dom = self.dom
        while len(trail) > mark:
            var, old = trail.pop()
            new = dom[var]
            if new and new & (new - 1) == 0 and old & (old - 1) != 0:
                self.nassigned -= 1
            dom[var] = old
        self.queue.clear()
        self.dirty.clear()
        self.failed = False

    def propagate(self) -> bool:
        dom = self.dom
        while True:
            while self.queue:
                var = self.queue.pop()
                bit = dom[var]
                for nb in self.neighbors[var]:
                    d = dom[nb]
                    if d & bit:
                        if not self._set_dom(nb, d & ~bit):
                            return False
            # Hidden singles: a value with one remaining home in a region.
            if not self.dirty:
                return True
            sweep, self.dirty = self.dirty, set()
            for ri in sorted(sweep):
                members = self.regions[ri]
                for bit_pos in range(self.side):
                    bit = 1 << bit_pos
                    count = 0
                    last = -1
                    for var in members:
                        if dom[var] & bit:
                            count += 1
                            last = var
                            if count > 1:
                                break
                    if count == 0:
                        self.failed = True
                        return False
                    if count == 1 and dom[last] != bit:
                        if not self._set_dom(last, bit):
                            return False
            if not self.queue and not self.dirty:
                return True

    def pick_var(self) -> int:
        best, best_size = -1, self.side + 1
        for var, d in enumerate(self.dom):
            if d & (d - 1):
                size = d.bit_count()
                if size < best_size:
                    best, best_size = var, size
                    if size == 2:
                        break
        return best

    def search(self, budget: int) -> str:
        if self.nassigned == self.nvars:
            return SOLUTION
        var = self.pick_var()
        dom = self.dom[var]
        if self.value_orders is None:
            positions = range(self.side)
        else:
            positions = self.value_orders[var]
        for bit_pos in positions:
            bit = 1 << bit_pos
            if not dom & bit:
                continue
            if self.nodes >= budget:
                return BUDGET
            self.nodes += 1
            mark = len(self.trail)
            self._set_dom(var, bit)
            if self.propagate():
                result = self.search(budget)
                if result != UNSATISFIABLE:
                    return result
            self._undo(mark)
        return UNSATISFIABLE

    def extract_grid(self) -> Grid:
        values = []
        for cell in range(self.board.num_cells):
            d = self.dom[self.var_of[cell]]
            values.append(d.bit_length())
        return Grid(self.board, tuple(values))


def _check_solution(problem: SolverProblem, grid: Grid) -> None:
    # Internal guard: a reported solution is re-verified from scratch.
    if verify_grid(grid, problem.bigs):
        raise RuntimeError("solver produced a grid violating a big constraint")
    board = problem.board
    for (ra, ca), (rb, cb) in problem.extra_smalls:
        if grid.get(ra, ca) == grid.get(rb, cb):
            raise RuntimeError("solver produced a grid violating an inequality")
    for (ra, ca), (rb, cb) in problem.equalities:
        if grid.get(ra, ca) != grid.get(rb, cb):
            raise RuntimeError("solver produced a grid breaking a forced equality")
    if problem.givens is not None:
        for cell, value in enumerate(problem.givens.values):
            if value and grid.values[cell] != value:
                raise RuntimeError("solver produced a grid not extending the givens")


def solve(problem: SolverProblem, budget: int = DEFAULT_NODE_BUDGET,
          value_order_seed: int | None = None) -> SolverOutcome:
    """Search for a complete grid satisfying the problem.

    Returns a Solution (with the grid), Unsatisfiable (search exhausted), or
    Budget (node limit hit, inconclusive).  Structurally contradictory input,
    such as an equality joining two cells of one covered region, returns
    Unsatisfiable immediately with the degenerate flag set in stats.

    Values are tried ascending by default; value_order_seed switches to a
    deterministic per-variable shuffle, useful for restart schedules on
    satisfiable instances.
    """
    engine = _Engine(problem, value_order_seed)
    if engine.degenerate:
        return SolverOutcome(UNSATISFIABLE, None,
                             SolveStats(0, 0, degenerate=True))
    if not engine.seed_givens() or not engine.propagate():
        return SolverOutcome(
            UNSATISFIABLE, None, SolveStats(0, engine.propagations))
    status = engine.search(budget)
    stats = SolveStats(engine.nodes, engine.propagations)
    if status != SOLUTION:
        return SolverOutcome(status, None, stats)
    grid = engine.extract_grid()
    _check_solution(problem, grid)
    return SolverOutcome(SOLUTION, grid, stats)


def witness_pairs(cset: ConstraintSet):
    """Probe pairs for find_witness, in deterministic order.

    For each absent constraint (ascending id), every cell pair inside its
    region that no present constraint covers, in lexicographic cell order.
    """
    board = cset.board
    cell_regions = board.cell_region_ids
    for cid in cset.missing_ids:
        for a, b in combinations(region_cells(cid, board), 2):
            covered = any(
                r in cell_regions[b] and cset.contains(r)
                for r in cell_regions[a])
            if not covered:
                yield cid, (board.cell_coords(a), board.cell_coords(b))


@lru_cache(maxsize=None)
def _scrambled_base(n: int, seed: int = 0) -> Grid:
    # A deterministic complete valid grid without the cyclic structure of
    # pattern_solution; rectangle edits below need value coincidences the
    # cyclic grid provably lacks.
    board = Board(n)
    outcome = solve(make_problem(ConstraintSet.full(board)),
                    budget=DEFAULT_NODE_BUDGET, value_order_seed=seed)
    if not outcome.is_solution:
        raise RuntimeError("could not build a base grid")
    return outcome.grid


@lru_cache(maxsize=None)
def _rectangle_edits(n: int):
    # Rectangles (r1,c1,r2,c2) across bands and stacks whose corners hold
    # value pattern a,b / b,a in a scrambled base grid.  Swapping the pairs
    # keeps every row and column valid and duplicates values in exactly the
    # four corner boxes.  One base grid rarely has rectangles in every
    # band-pair/stack-pair position, so bases are harvested until each
    # position is covered (or the seeds run out).
    board = Board(n)
    side = board.side
    edits = []
    covered = set()
    want = (n * (n - 1) // 2) ** 2
    for seed in range(16):
        if len(covered) == want:
            break
        grid = _scrambled_base(n, seed)
        for r1 in range(1, side + 1):
            for r2 in range(r1 + 1, side + 1):
                if (r1 - 1) // n == (r2 - 1) // n:
                    continue
                for c1 in range(1, side + 1):
                    for c2 in range(c1 + 1, side + 1):
                        if (c1 - 1) // n == (c2 - 1) // n:
                            continue
                        a = grid.get(r1, c1)
                        b = grid.get(r1, c2)
                        if (a == b or grid.get(r2, c2) != a
                                or grid.get(r2, c1) != b):
                            continue
                        violated = 0
                        for r, c in ((r1, c1), (r1, c2), (r2, c1), (r2, c2)):
                            violated |= 1 << board.make_id(
                                BOX, board.box_of(r, c))
                        if violated in covered:
                            continue
                        covered.add(violated)
                        edits.append((seed, (r1, c1, r2, c2), violated))
    return tuple(edits)


@lru_cache(maxsize=None)
def _line_swap_edits(n: int):
    # Swapping two complete rows from different bands keeps rows and columns
    # valid and duplicates values in all boxes of both bands (the cyclic
    # pattern grid never repeats a box segment across bands); columns dual.
    board = Board(n)
    edits = []
    for kind in (ROW, COL):
        for i1 in range(1, board.side + 1):
            for i2 in range(i1 + 1, board.side + 1):
                if (i1 - 1) // n == (i2 - 1) // n:
                    continue
                violated = 0
                for group in ((i1 - 1) // n, (i2 - 1) // n):
                    for j in range(n):
                        if kind == ROW:
                            box = group * n + j + 1
                        else:
                            box = j * n + group + 1
                        violated |= 1 << board.make_id(BOX, box)
                edits.append((kind, i1, i2, violated))
    return tuple(edits)


def modification_witness(cset: ConstraintSet) -> Grid | None:
    """Constant-time witness search by local edits of a complete valid grid.

    Four edit families, each violating a known set of constraints:
    overwriting one cell (its three regions), swapping two cells (their
    unshared regions), swapping rectangle corners holding an a,b/b,a value
    pattern (the four corner boxes), and swapping two parallel lines across
    bands or stacks (all boxes of both).  The first edit whose violation
    set lies inside the model's absent constraints yields a witness with no
    search at all.
    """
    board = cset.board
    if cset.is_full():
        raise ValueError("witness search needs a model with absent constraints")
    grid = pattern_solution(board)
    cell_regions = board.cell_region_ids
    present = cset.mask

    for cell in range(board.num_cells):
        violated = 0
        for cid in cell_regions[cell]:
            violated |= 1 << cid
        if violated & present:
            continue
        values = list(grid.values)
        values[cell] = values[cell] % board.side + 1
        return _checked_edit(Grid(board, tuple(values)), cset)

    for a in range(board.num_cells):
        regs_a = cell_regions[a]
        for b in range(a + 1, board.num_cells):
            if grid.values[a] == grid.values[b]:
                continue
            regs_b = cell_regions[b]
            shared = set(regs_a) & set(regs_b)
            violated = 0
            for cid in regs_a:
                if cid not in shared:
                    violated |= 1 << cid
            for cid in regs_b:
                if cid not in shared:
                    violated |= 1 << cid
            if violated & present:
                continue
            out = grid.with_swapped(board.cell_coords(a), board.cell_coords(b))
            return _checked_edit(out, cset)

    for seed, (r1, c1, r2, c2), violated in _rectangle_edits(board.n):
        if violated & present:
            continue
        base = _scrambled_base(board.n, seed)
        out = base.with_swapped((r1, c1), (r1, c2))
        out = out.with_swapped((r2, c1), (r2, c2))
        return _checked_edit(out, cset)

    for kind, i1, i2, violated in _line_swap_edits(board.n):
        if violated & present:
            continue
        values = list(grid.values)
        side = board.side
        for j in range(side):
            if kind == ROW:
                pa = board.cell_index(i1, j + 1)
                pb = board.cell_index(i2, j + 1)
            else:
                pa = board.cell_index(j + 1, i1)
                pb = board.cell_index(j + 1, i2)
            values[pa], values[pb] = values[pb], values[pa]
        return _checked_edit(Grid(board, tuple(values)), cset)

    return None


def _checked_edit(grid: Grid, cset: ConstraintSet) -> Grid:
    if verify_grid(grid, cset):
        raise RuntimeError("grid edit violated a present constraint")
    if not verify_grid(grid, ConstraintSet.full(cset.board)):
        raise RuntimeError("grid edit produced a fully valid grid")
    return grid


# Per-pair (value_order_seed, node_budget) rungs for the probe fallback.
# Each pair gets one cheap ascending attempt plus shuffled-value restarts
# before the next pair is tried; pairs that only ever hit the budget get a
# final expensive pass.  Restart diversity beats raw budget on satisfiable
# probe instances by orders of magnitude.
WITNESS_PROBE_LADDER = ((None, 1_000), (0, 4_000), (1, 4_000), (2, 4_000),
                        (3, 4_000), (4, 4_000), (5, 4_000), (6, 4_000))
WITNESS_FINAL_LADDER = ((None, 300_000), (7, 300_000))


def find_witness(cset: ConstraintSet, ladder=WITNESS_PROBE_LADDER,
                 final_ladder=WITNESS_FINAL_LADDER,
                 fast_path: bool = True) -> Grid | None:
    """Look for a complete grid proving the model is not equivalent to the
    full model: it satisfies every present constraint and violates at least
    one absent constraint.

    Each probe forces one uncovered in-region cell pair equal and solves,
    with the pair pinned to value 1 (relabeling values maps solutions to
    solutions, so the pin costs no generality).  Returns None when every
    probe is exhausted or over budget; that outcome carries no proof either
    way.

    Models whose derivation closure reaches the full set are entailed, so no
    witness can exist; they short-circuit to None without any search.  With
    fast_path, constant-time grid edits are tried before any probe.
    """
    board = cset.board
    if cset.is_full():
        raise ValueError("find_witness needs a model with absent constraints")
    if close_mask(board.n, cset.mask) == board.full_mask:
        return None
    if fast_path:
        edited = modification_witness(cset)
        if edited is not None:
            return edited

    full = ConstraintSet.full(board)

    def attempt(pair, value_seed, budget):
        pin = [0] * board.num_cells
        for row, col in pair:
            pin[board.cell_index(row, col)] = 1
        problem = make_problem(cset, equalities=(pair,),
                               givens=Grid(board, tuple(pin)))
        return solve(problem, budget=budget, value_order_seed=value_seed)

    undecided = []
    for _, pair in witness_pairs(cset):
        proven_unsat = False
        for value_seed, budget in ladder:
            outcome = attempt(pair, value_seed, budget)
            if outcome.is_solution:
                grid = outcome.grid
                if not verify_grid(grid, full):
                    raise RuntimeError(
                        "witness probe returned a fully valid grid")
                return grid
            if outcome.status == UNSATISFIABLE:
                proven_unsat = True
                break
        if not proven_unsat:
            undecided.append(pair)

    for value_seed, budget in final_ladder:
        for pair in undecided:
            outcome = attempt(pair, value_seed, budget)
            if outcome.is_solution:
                grid = outcome.grid
                if not verify_grid(grid, full):
                    raise RuntimeError(
                        "witness probe returned a fully valid grid")
                return grid
    return None


def parse_puzzle_line(board: Board, line: str) -> Grid:
    """Parse one corpus line: side*side digit characters, 0 or . for blanks."""
    if board.side > 9:
        raise ValueError("line format only supports single-digit values")
    text = line.strip()
    if len(text) != board.num_cells:
        raise ValueError(
            f"expected {board.num_cells} characters, got {len(text)}")
    values = []
    for ch in text:
        if ch in "0.":
            values.append(0)
        elif ch.isdigit() and 1 <= int(ch) <= board.side:
            values.append(int(ch))
        else:
            raise ValueError(f"bad character {ch!r}")
    return Grid(board, tuple(values))


def read_corpus(path, board: Board | None = None):
    """Read a puzzle file, one puzzle per line.

    Returns (puzzles, errors) where errors is a list of (line_number,
    message) for skipped lines.  Blank lines and lines starting with #
    are ignored.
    """
    board = board or Board()
    puzzles, errors = [], []
    with open(path, encoding="ascii") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                puzzles.append(parse_puzzle_line(board, line))
            except ValueError as exc:
                errors.append((lineno, str(exc)))
    return puzzles, errors
