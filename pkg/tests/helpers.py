"""Shared test utilities: a brute-force reference solver for small boards."""

from itertools import product

from redoku.board import verify_grid, Grid
from redoku.solver import SolverProblem


def brute_force_satisfiable(problem: SolverProblem) -> bool:
    """Exhaustive satisfiability check; only sane for order-2 boards.

    Enumerates every assignment of the free cells and tests the full
    problem semantics, with no propagation or pruning shortcuts shared
    with the real solver.
    """
    board = problem.board
    side = board.side
    givens = problem.givens.values if problem.givens else (0,) * board.num_cells
    free = [i for i in range(board.num_cells) if not givens[i]]
    values = list(givens)
    for combo in product(range(1, side + 1), repeat=len(free)):
        for cell, val in zip(free, combo):
            values[cell] = val
        grid = Grid(board, tuple(values))
        if verify_grid(grid, problem.bigs):
            continue
        if any(values[board.cell_index(*p)] == values[board.cell_index(*q)]
               for p, q in problem.extra_smalls):
            continue
        if any(values[board.cell_index(*p)] != values[board.cell_index(*q)]
               for p, q in problem.equalities):
            continue
        return True
    return False
