import math

import numpy as np
import pytest

from frechet.spaces import SPD, Euclidean, Hyperbolic, MetricTree, Sphere, TreeSpace


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_rotation(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def sphere_cap_points(space, rng, size, r=0.5, center=None):
    """Points within geodesic radius ``r`` of ``center`` (default pole)."""
    center = space.pole() if center is None else center
    basis = space.tangent_basis(center)
    c = rng.standard_normal((size, len(basis)))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    t = r * rng.random(size)
    return np.stack([space.exp(center, tt * (cc @ basis)) for tt, cc in zip(t, c)])


def random_sphere_points(space, rng, size):
    x = rng.standard_normal((size, space.dim + 1))
    return x / np.linalg.norm(x, axis=1, keepdims=True) * space.radius


def random_hyperbolic_points(space, rng, size, scale=1.0):
    return np.stack([space.lift(scale * rng.standard_normal(space.dim)) for _ in range(size)])


def random_spd(d, rng, size):
    out = []
    for _ in range(size):
        x = rng.standard_normal((d, d))
        out.append(x @ x.T / d + 0.3 * np.eye(d))
    return np.stack(out)


def random_tree(rng, n_nodes=12):
    edges = []
    for j in range(1, n_nodes):
        edges.append((int(rng.integers(0, j)), j, float(rng.uniform(0.2, 2.0))))
    return MetricTree(edges)


def random_loci(tree, rng, size):
    out = []
    for _ in range(size):
        k = int(rng.integers(tree.n_edges))
        out.append(tree.locus(k, rng.uniform(0, tree.length[k])))
    return out


def sample_points(space, rng, size):
    if space.name == "euclidean":
        return rng.standard_normal((size, space.dim))
    if space.name == "sphere":
        return random_sphere_points(space, rng, size)
    if space.name == "hyperbolic":
        return random_hyperbolic_points(space, rng, size)
    if space.name == "spd":
        return random_spd(space.dim, rng, size)
    return random_loci(space.tree, rng, size)


def make_spaces(rng):
    return [
        Euclidean(4),
        Sphere(3, 2.0),
        Hyperbolic(3, -0.5),
        SPD(3),
        TreeSpace(random_tree(rng)),
    ]


SPACE_IDS = ["euclidean", "sphere", "hyperbolic", "spd", "tree"]


@pytest.fixture(params=range(5), ids=SPACE_IDS)
def any_space(request):
    return make_spaces(np.random.default_rng(7))[request.param]


@pytest.fixture(params=range(4), ids=SPACE_IDS[:4])
def smooth_space(request):
    return make_spaces(np.random.default_rng(7))[request.param]


HALF_PI = math.pi / 2


# acceptance criteria outcomes, reported once at the end of the run
ACCEPTANCE = {}


def record_criterion(number, title, passed, detail=""):
    ACCEPTANCE[number] = (title, bool(passed), detail)
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(
            f"criterion {k:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        )
