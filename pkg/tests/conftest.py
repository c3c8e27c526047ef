import os

import pytest

from redoku.board import Board

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def board():
    return Board(3)


@pytest.fixture(scope="session")
def board2():
    return Board(2)


@pytest.fixture(scope="session")
def corpus_path():
    return os.path.join(DATA_DIR, "corpus17.txt")


@pytest.fixture(scope="session")
def bad_corpus_path():
    return os.path.join(DATA_DIR, "corpus_bad.txt")
