import numpy as np
import pytest

from mapproc.qid import qid_unitary, qid_povm, sic_program


@pytest.fixture(scope="session")
def qid_proc():
    return qid_unitary()


@pytest.fixture(scope="session")
def sic_elements():
    return [np.asarray(f) for f in qid_povm(sic_program()).elements]
