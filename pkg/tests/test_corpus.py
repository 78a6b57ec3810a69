import random

import pytest

from Toric_Agent.corpus import (
    BUNDLED_NETWORKS, CORPUS_EXPECTATIONS, bundled_path, load_bundled, run_corpus, run_network, sample_rates
)


def test_every_bundled_network_has_expectations():
    assert set(BUNDLED_NETWORKS) == set(CORPUS_EXPECTATIONS)


@pytest.mark.parametrize("name", ['triangle', 'triangle.crn', 'examples/triangle.crn'])
def test_bundled_path_accepts_aliases(name):
    assert bundled_path(name).name == 'triangle.crn'


def test_unknown_bundled_network():
    with pytest.raises(FileNotFoundError):
        bundled_path('no-such-network')


def test_sample_rates_reproducible():
    net = load_bundled('trap').network
    first = sample_rates(net, random.Random("0:trap"))
    second = sample_rates(net, random.Random("0:trap"))
    assert first.values == second.values
    assert first.is_exact


def test_recombination_row():
    row = run_network('recombination')
    assert row.ok, row.mismatches
    assert row.extra['binomials_checked'] == 18
    assert row.extra['binomials_in_moduli'] == 18
    assert row.extra['moduli_codimension'] == 5
    assert row.cb is True


def test_trap_row_samples_rates():
    row = run_network('trap', seed=3, rate_samples=5)
    assert row.ok
    assert row.rate_samples == 5
    assert row.cb is True


def test_full_corpus_matches_known_values():
    report = run_corpus(seed=0, rate_samples=5)
    assert report.ok, [row.mismatches for row in report.rows]
    payload = report.to_dict()
    assert [entry['name'] for entry in payload['networks']] == list(BUNDLED_NETWORKS)
    by_name = {entry['name']: entry for entry in payload['networks']}
    assert by_name['triangle']['cb'] is True
    assert by_name['triangle-noncyclic']['cb'] is False
    assert by_name['two-substrate']['delta'] == 2


def test_corpus_is_deterministic():
    assert run_corpus(seed=11, rate_samples=3).to_dict() == run_corpus(seed=11, rate_samples=3).to_dict()
