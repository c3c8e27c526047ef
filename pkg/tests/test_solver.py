import random

import pytest

from helpers import brute_force_satisfiable
from redoku.board import (Board, ConstraintSet, Grid, parse_missing,
                          pattern_solution, verify_grid)
from redoku.solver import (BUDGET, SOLUTION, UNSATISFIABLE, _rectangle_edits,
                           find_witness, make_problem, modification_witness,
                           parse_puzzle_line, read_corpus, solve,
                           witness_pairs)


def test_full_board_solves(board):
    outcome = solve(make_problem(ConstraintSet.full(board)))
    assert outcome.status == SOLUTION
    assert verify_grid(outcome.grid, ConstraintSet.full(board)) == frozenset()


def test_corpus_puzzle_solution_extends_givens(board, corpus_path):
    puzzles, errors = read_corpus(corpus_path, board)
    assert errors == []
    assert len(puzzles) == 6
    givens = puzzles[0]
    assert givens.assigned_count() == 17
    outcome = solve(make_problem(ConstraintSet.full(board), givens=givens))
    assert outcome.status == SOLUTION
    for cell, val in enumerate(givens.values):
        if val:
            assert outcome.grid.values[cell] == val


def test_same_row_equality_unsatisfiable(board):
    problem = make_problem(ConstraintSet.full(board),
                           equalities=(((1, 1), (1, 2)),))
    outcome = solve(problem)
    assert outcome.status == UNSATISFIABLE
    assert outcome.stats.degenerate


def test_equality_inside_present_region_flags_degenerate(board):
    # Cells (5,1) and (5,2) share a present row even when their columns
    # are absent, so forcing them equal contradicts the model itself.
    problem = make_problem(parse_missing(board, "C1,C2"),
                           equalities=(((5, 1), (5, 2)),))
    outcome = solve(problem)
    assert outcome.status == UNSATISFIABLE
    assert outcome.stats.degenerate
    assert outcome.stats.nodes == 0


def test_equality_across_absent_column_solves(board):
    # With C1 absent, two cells that share only that column may coincide;
    # the solver must exhibit a grid doing so.
    problem = make_problem(parse_missing(board, "C1,C2"),
                           equalities=(((1, 1), (4, 1)),))
    outcome = solve(problem)
    assert outcome.status == SOLUTION
    grid = outcome.grid
    assert grid.get(1, 1) == grid.get(4, 1)
    violated = verify_grid(grid, ConstraintSet.full(board))
    assert violated <= {board.parse_label("C1"), board.parse_label("C2")}
    assert violated


def test_givens_conflict_is_unsatisfiable(board):
    values = [0] * 81
    values[board.cell_index(1, 1)] = 5
    values[board.cell_index(1, 9)] = 5
    problem = make_problem(ConstraintSet.full(board),
                           givens=Grid(board, tuple(values)))
    outcome = solve(problem)
    assert outcome.status == UNSATISFIABLE


def test_budget_outcome_is_reported(board):
    problem = make_problem(ConstraintSet.full(board))
    outcome = solve(problem, budget=0)
    assert outcome.status == BUDGET
    assert outcome.grid is None


def test_extra_smalls_are_enforced(board2):
    # Forbid the two diagonal corners from agreeing on top of the full
    # model; the solver must still find a grid.
    problem = make_problem(ConstraintSet.full(board2),
                           extra_smalls=(((1, 1), (4, 4)),))
    outcome = solve(problem)
    assert outcome.status == SOLUTION
    assert outcome.grid.get(1, 1) != outcome.grid.get(4, 4)


def test_solution_stats_count_decisions(board):
    outcome = solve(make_problem(ConstraintSet.full(board)))
    assert outcome.stats.nodes >= 0
    assert outcome.stats.propagations > 0


def test_value_order_seed_changes_solution_not_validity(board):
    full = ConstraintSet.full(board)
    plain = solve(make_problem(full))
    shuffled = solve(make_problem(full), value_order_seed=3)
    assert plain.status == shuffled.status == SOLUTION
    assert verify_grid(shuffled.grid, full) == frozenset()
    repeat = solve(make_problem(full), value_order_seed=3)
    assert repeat.grid == shuffled.grid


def test_solver_matches_brute_force_on_small_boards(board2):
    rng = random.Random(20)
    base = pattern_solution(board2)
    agree = 0
    for trial in range(100):
        mask = rng.getrandbits(12)
        bigs = ConstraintSet(board2, mask)
        values = [0] * 16
        for cell in rng.sample(range(16), 10):
            keep = rng.random() < 0.8
            values[cell] = base.values[cell] if keep else rng.randint(1, 4)
        extras = []
        eqs = []
        if rng.random() < 0.5:
            cells = rng.sample(range(16), 2)
            extras.append((board2.cell_coords(cells[0]),
                           board2.cell_coords(cells[1])))
        if rng.random() < 0.5:
            cells = rng.sample(range(16), 2)
            eqs.append((board2.cell_coords(cells[0]),
                        board2.cell_coords(cells[1])))
        problem = make_problem(bigs, extra_smalls=extras, equalities=eqs,
                               givens=Grid(board2, tuple(values)))
        outcome = solve(problem)
        assert outcome.status in (SOLUTION, UNSATISFIABLE)
        assert outcome.is_solution == brute_force_satisfiable(problem)
        agree += 1
    assert agree == 100


def test_witness_pairs_order(board):
    cset = parse_missing(board, "C1,C3")
    pairs = list(witness_pairs(cset))
    assert pairs
    first_cid, (a, b) = pairs[0]
    assert board.id_label(first_cid) == "C1"
    assert a < b
    # Pairs already covered by a present region are left out: same-box
    # column neighbors stay covered by their box.
    for cid, (p, q) in pairs:
        assert p[1] == q[1]  # both cells in the absent column
        assert (p[0] - 1) // 3 != (q[0] - 1) // 3  # never in one box


def test_modification_witness_families(board):
    # single absent box: overwriting one of its cells suffices
    cset = parse_missing(board, "R1,C1,B1")
    grid = modification_witness(cset)
    assert grid is not None
    assert verify_grid(grid, cset) == frozenset()
    assert verify_grid(grid, ConstraintSet.full(board))

    # two absent parallel lines: a swap inside one row does it
    cset = parse_missing(board, "C1,C3")
    grid = modification_witness(cset)
    assert grid is not None
    assert verify_grid(grid, cset) == frozenset()

    # four boxes in a rectangle: needs the rectangle-swap family
    cset = parse_missing(board, "B1,B2,B4,B5")
    grid = modification_witness(cset)
    assert grid is not None
    assert verify_grid(grid, cset) == frozenset()

    # six boxes of two bands: any corner quad inside them works
    cset = parse_missing(board, "B1,B2,B4,B5,B3,B6")
    grid = modification_witness(cset)
    assert grid is not None
    assert verify_grid(grid, cset) == frozenset()


def test_rectangle_edits_cover_all_box_quads(board):
    quads = {violated for _, _, violated in _rectangle_edits(3)}
    assert len(quads) == 9


def test_find_witness_rejects_full_model(board):
    with pytest.raises(ValueError):
        find_witness(ConstraintSet.full(board))


def test_find_witness_none_for_entailed_models(board):
    assert find_witness(parse_missing(board, "B2")) is None
    assert find_witness(parse_missing(board, "R2,R5,R8,C2,C5,C8")) is None


def test_find_witness_for_stuck_models(board):
    for text in ("C1,C3", "R1,R2", "R1,C1,B1", "B1,B2,B4,B5"):
        cset = parse_missing(board, text)
        grid = find_witness(cset)
        assert grid is not None
        assert verify_grid(grid, cset) == frozenset()
        assert verify_grid(grid, ConstraintSet.full(board))


def test_find_witness_without_fast_path(board):
    # The plain probe route must reach the same conclusion, just slower.
    cset = parse_missing(board, "C1,C3")
    grid = find_witness(cset, fast_path=False)
    assert grid is not None
    assert verify_grid(grid, cset) == frozenset()
    violated = verify_grid(grid, ConstraintSet.full(board))
    assert violated <= {board.parse_label("C1"), board.parse_label("C3")}


def test_parse_puzzle_line(board):
    line = "1" + "0" * 40 + "." * 40
    grid = parse_puzzle_line(board, line)
    assert grid.get(1, 1) == 1
    assert grid.assigned_count() == 1
    with pytest.raises(ValueError):
        parse_puzzle_line(board, "123")
    with pytest.raises(ValueError):
        parse_puzzle_line(board, "x" * 81)


def test_read_corpus_reports_bad_lines(board, bad_corpus_path):
    puzzles, errors = read_corpus(bad_corpus_path, board)
    assert len(puzzles) == 2
    assert [lineno for lineno, _ in errors] == [3, 4, 5, 6]
    assert "80" in errors[0][1]
    assert "82" in errors[1][1]
    assert "'x'" in errors[2][1]
    assert "'a'" in errors[3][1]
