import numpy as np
import pytest
from fastapi.testclient import TestClient

from api_server import app
from Toric_Agent import __version__
from Toric_Agent.birch import BirchPointSolver


@pytest.fixture(scope='module')
def client():
    return TestClient(app)


def test_health(client):
    response = client.get('/health')
    assert response.status_code == 200
    assert response.json() == {'status': 'healthy', 'service': 'Toric Agent API', 'version': __version__}


def test_analyze_bundled(client):
    response = client.post('/analyze', json={'bundled': 'recombination'})
    assert response.status_code == 200
    body = response.json()
    assert body['delta'] == 5
    assert body['l'] == 7


def test_analyze_inline_text(client):
    response = client.post('/analyze', json={'network': 'A <-> B\nB <-> C\n'})
    assert response.status_code == 200
    assert response.json()['delta'] == 0


def test_exactly_one_source(client):
    assert client.post('/analyze', json={}).status_code == 422
    both = {'network': 'A -> B\n', 'bundled': 'triangle'}
    assert client.post('/analyze', json=both).status_code == 422


def test_syntax_error_is_bad_request(client):
    response = client.post('/analyze', json={'network': 'A -> A\n'})
    assert response.status_code == 400
    assert response.json()['error'] == 'NetworkSyntaxError'


def test_tree_constants(client):
    response = client.post('/tree-constants', json={'bundled': 'triangle', 'enumerate_trees': True})
    assert response.status_code == 200
    assert response.json()['oracle_agrees'] is True


def test_complex_balancing_violation(client):
    response = client.post('/check/cb', json={'bundled': 'triangle', 'rates': '1 2 2\n'})
    assert response.status_code == 200
    body = response.json()
    assert body['balanced'] is False
    assert body['violated_binomial']['u_minus'] == [0, 2, 0]


def test_detailed_balancing(client):
    response = client.post('/check/db', json={'bundled': 'trap'})
    assert response.status_code == 200
    assert response.json()['detailed_balancing'] is True


def test_birch(client):
    response = client.post('/birch', json={'bundled': 'triangle', 'initial': [2.0, 0.5]})
    assert response.status_code == 200
    assert response.json()['c_star'] == pytest.approx([1.25, 1.25], rel=1e-9)


def test_birch_domain_error(client):
    response = client.post('/birch', json={'bundled': 'triangle', 'initial': [1.0, 1.0], 'rates': '1 2 2\n'})
    assert response.status_code == 422
    assert response.json()['error'] == 'NotComplexBalancingError'


def test_birch_wrong_length(client):
    response = client.post('/birch', json={'bundled': 'triangle', 'initial': [1.0]})
    assert response.status_code == 400
    assert response.json()['error'] == 'UsageError'


def test_unknown_bundled_network(client):
    response = client.post('/analyze', json={'bundled': 'nope'})
    assert response.status_code == 400


def test_linear_algebra_failure_is_unprocessable(client, monkeypatch):
    def singular(*args, **kwargs):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setattr(BirchPointSolver, 'solve', singular)
    response = client.post('/birch', json={'bundled': 'triangle', 'initial': [2.0, 0.5]})
    assert response.status_code == 422
    assert response.json()['error'] == 'LinAlgError'
