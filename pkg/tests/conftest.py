from pathlib import Path

import numpy as np
import pytest

from app.services import complexes as cx
from app.services.algebra import corner
from app.services.exactlin import make_field
from app.services.formats import load_algebra, load_complex

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in (
        "TILTWORK_FIELD",
        "TILTWORK_SEED",
        "TILTWORK_MAX_STAGE",
        "TILTWORK_LOG_LEVEL",
        "TILTWORK_RECORD_TIMINGS",
        "TILTWORK_SAMPLING_TRIALS",
        "TILTWORK_EXHAUSTIVE_LIMIT",
        "TILTWORK_ISO_BUDGET",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def samples() -> Path:
    return SAMPLES


@pytest.fixture
def gf101():
    return make_field(101)


@pytest.fixture
def qq():
    return make_field("rational")


@pytest.fixture
def sn2():
    return load_algebra(str(SAMPLES / "sn2.alg"))


@pytest.fixture
def sn2_q(qq):
    return load_algebra(str(SAMPLES / "sn2.alg"), field=qq)


@pytest.fixture
def nakayama3():
    return load_algebra(str(SAMPLES / "nakayama3.alg"))


@pytest.fixture
def dual_numbers():
    return load_algebra(str(SAMPLES / "dual_numbers.alg"))


@pytest.fixture
def radsq_cycle():
    return load_algebra(str(SAMPLES / "radsq_cycle.alg"))


@pytest.fixture
def two_term(sn2):
    """``e1A --b--> e2A`` in degrees -1, 0."""
    return load_complex(str(SAMPLES / "sn2_two_term.cpx"), {"sn2": sn2})


@pytest.fixture
def corner_stalk(sn2):
    C = corner(sn2, [0])
    return cx.stalk(C)


@pytest.fixture
def element():
    """Basis element of an algebra by its path label."""

    def build(A, label):
        return A.basis_vector(A.labels.index(label))

    return build


def two_term_complex(A, lower, upper, seed=0):
    """A two-term complex over ``A`` with random differential entries."""
    rng = np.random.default_rng(seed)
    F = A.field
    d = F.zeros((len(upper), len(lower), A.dim))
    for r, w in enumerate(upper):
        for c, v in enumerate(lower):
            block = A.block(w, v)
            d[r, c, block] = F.random(rng, len(block))
    return cx.ProjComplex.build(A, {-1: tuple(lower), 0: tuple(upper)}, {-1: d})


@pytest.fixture
def random_complex():
    return two_term_complex
