import random

import pytest
from hypothesis import strategies as st

from subdiag.core import Substitution, is_primitive, parse_substitution

THUE_MORSE = "0->01;1->10"
DISCRETE = "0->011;1->101"
NEPHEW = "0->001;1->10"
SALEM = "0->010;1->11010"
KAKUTANI = "0->001;1->11001"
EXPANDING = "0->00001;1->1110"
PERIODIC = "0->010;1->10101"
THREE_LETTER = "1->123;2->222;3->333"
INDUCED_SALEM = "0->010;1->11010;2->232;3->33232;C->CDC232;D->DCD010"
DOT_DELTA = "a->ahia;c->ahia;e->ahia;i->ahia;b->bgfc;f->bgfc;d->dfge;g->dfge;h->hihi"


def _random_image(rng, first, max_len):
    n = rng.randint(2, max_len)
    return first + "".join(rng.choice("01") for _ in range(n - 1))


def make_corpus(size=240, max_len=6, seed=20240601):
    """Primitive binary substitutions with fixed points at 0 and 1, images of length <= max_len."""
    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < size:
        s = Substitution(("0", "1"), (_random_image(rng, "0", max_len), _random_image(rng, "1", max_len)))
        if s.images not in seen and is_primitive(s):
            seen.add(s.images)
            out.append(s)
    return out


CORPUS = make_corpus()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture
def sub():
    return parse_substitution


binary_words = st.text(alphabet="01", max_size=40)
corpus_members = st.sampled_from(CORPUS)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda x: int(x.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
