import pytest

from iltmoments.combinatorics import REFERENCE_MATRICES
from iltmoments.multigraph import graph_from_matrix


@pytest.fixture(scope="session")
def class_graphs():
    return {label: graph_from_matrix(F) for label, F in REFERENCE_MATRICES.items()}
