"""Random instances shared by the test modules."""
import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from chandisc import Channel, UnitaryPair


def haar(d, rng):
    return unitary_group.rvs(d, random_state=rng)


def random_vector(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d, rng, rank=None):
    g = rng.standard_normal((d, rank or d)) + 1j * rng.standard_normal((d, rank or d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


def random_kraus(d, n, rng):
    """n Kraus operators cut from a random isometry C^d -> C^(n d)."""
    g = rng.standard_normal((n * d, d)) + 1j * rng.standard_normal((n * d, d))
    q, _ = np.linalg.qr(g)
    return [q[k * d:(k + 1) * d] for k in range(n)]


def random_povm(dim, n, rng):
    gs = [rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)) for _ in range(n)]
    ps = [g.conj().T @ g for g in gs]
    w, v = np.linalg.eigh(sum(ps))
    s = (v / np.sqrt(w)) @ v.conj().T
    return [s @ p @ s for p in ps]


def random_pair(d, rng, priors=(0.5, 0.5), spread=None):
    """U Haar, V = U exp(i t H); small ``t`` keeps D away from 0."""
    u = haar(d, rng)
    if spread is None:
        spread = rng.uniform(0.05, 3.0)
    h = random_hermitian(d, rng)
    h /= np.linalg.norm(h, 2)
    v = u @ expm(1j * spread * h)
    return UnitaryPair(u, v, *priors)


def kraus_channel(d, n, rng):
    return Channel.from_kraus(random_kraus(d, n, rng))
