import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from foamlab.permcore import Permutation  # noqa: E402
from foamlab.realcover import ComponentCover, RealBase, choose_lift  # noqa: E402


def perm(text, degree):
    return Permutation.parse(text, degree)


def trigonal_a():
    a = perm("(1 2 3)", 3)
    return ComponentCover(3, (a, ~a, a, ~a), name="A")


def trigonal_b():
    a = perm("(1 2 3)", 3)
    return ComponentCover(3, (a, a, ~a, ~a), name="B")


def hyperelliptic(n=6):
    return ComponentCover(2, (perm("(1 2)", 2),) * n, name="H")


def with_default_lift(c):
    return c.with_lift(choose_lift(c))


@pytest.fixture
def e9_components():
    return [trigonal_a(), trigonal_b()]


@pytest.fixture
def base4():
    return RealBase(4)
