"""
测试公共夹具：内置网络、可复现随机源、随机网络生成器
"""

import random
from fractions import Fraction
from typing import Callable, Tuple

import pytest

from Toric_Agent.common.data_structures import RateAssignment, RateKind, ReactionNetwork
from Toric_Agent.corpus import load_bundled


def _distinct_complexes(rng: random.Random, n: int, s: int, max_coeff: int = 2):
    seen, complexes = set(), []
    while len(complexes) < n:
        y = tuple(rng.randint(0, max_coeff) for _ in range(s))
        if y not in seen:
            seen.add(y)
            complexes.append(y)
    return complexes


def make_strongly_connected(rng: random.Random, n: int, s: int = 3,
                            extra_edges: int = 3) -> ReactionNetwork:
    """随机强连通网络：一个 Hamilton 圈加若干随机弦"""
    order = list(range(n))
    rng.shuffle(order)
    edges = {(order[k], order[(k + 1) % n]) for k in range(n)} if n > 1 else set()
    for _ in range(extra_edges):
        i, j = rng.sample(range(n), 2)
        edges.add((i, j))
    return ReactionNetwork(
        species=tuple(f"X{k + 1}" for k in range(s)),
        complexes=tuple(_distinct_complexes(rng, n, s)),
        edges=tuple(sorted(edges)),
    )


def make_random_network(rng: random.Random, n: int, s: int = 3, density: float = 0.3) -> ReactionNetwork:
    """随机有向图，至少一条边"""
    edges = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < density]
    if not edges:
        edges = [(0, 1)]
    return ReactionNetwork(
        species=tuple(f"X{k + 1}" for k in range(s)),
        complexes=tuple(_distinct_complexes(rng, n, s)),
        edges=tuple(edges),
    )


def make_reversible(rng: random.Random, n: int, s: int = 3, pairs: int = 4) -> ReactionNetwork:
    """随机可逆网络：随机无序对，每对两个方向都给出"""
    chosen = set()
    candidates = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in rng.sample(candidates, min(pairs, len(candidates))):
        chosen.add((i, j))
        chosen.add((j, i))
    return ReactionNetwork(
        species=tuple(f"X{k + 1}" for k in range(s)),
        complexes=tuple(_distinct_complexes(rng, n, s)),
        edges=tuple(sorted(chosen)),
    )


def random_rates(network: ReactionNetwork, rng: random.Random) -> RateAssignment:
    return RateAssignment(
        {edge: Fraction(rng.randint(1, 9), rng.randint(1, 5)) for edge in network.edges},
        RateKind.EXACT,
    )


def detailed_balanced_rates(network: ReactionNetwork, rng: random.Random) -> Tuple[RateAssignment, Tuple[Fraction, ...]]:
    """先取正有理 c*，再令 κ_ji = κ_ij·c*^{y_i}/c*^{y_j}，得到细致平衡速率"""
    c_star = tuple(Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(network.s))

    def power(y):
        value = Fraction(1)
        for base, exponent in zip(c_star, y):
            value *= base ** exponent
        return value

    values = {}
    for i, j in network.edges:
        if i < j:
            forward = Fraction(rng.randint(1, 9), rng.randint(1, 5))
            values[(i, j)] = forward
            values[(j, i)] = forward * power(network.complexes[i]) / power(network.complexes[j])
    return RateAssignment(values, RateKind.EXACT), c_star


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


@pytest.fixture
def triangle():
    return load_bundled('triangle')


@pytest.fixture
def triangle_noncyclic():
    return load_bundled('triangle-noncyclic')


@pytest.fixture
def trap():
    return load_bundled('trap')


@pytest.fixture
def recombination():
    return load_bundled('recombination')


@pytest.fixture
def two_substrate():
    return load_bundled('two-substrate')


@pytest.fixture
def strongly_connected_factory() -> Callable[..., ReactionNetwork]:
    return make_strongly_connected


@pytest.fixture
def reversible_factory() -> Callable[..., ReactionNetwork]:
    return make_reversible


@pytest.fixture
def random_network_factory() -> Callable[..., ReactionNetwork]:
    return make_random_network


@pytest.fixture
def rate_sampler() -> Callable[[ReactionNetwork, random.Random], RateAssignment]:
    return random_rates


@pytest.fixture
def detailed_rates_factory():
    return detailed_balanced_rates
