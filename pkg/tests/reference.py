"""Independent brute-force oracles for the certificate recursions and
the total-boundedness combinatorics.

Everything here is written straight from the defining formulas with
naive scanning, no shortcuts, so it stays independent of the production
code paths it checks.
"""

from itertools import combinations

import numpy as np


# --- naive certificate recursions (literal definitions, full scans) --------


def naive_window_max(chi_fn, g_fn, n, r):
    return max(chi_fn(i, g_fn(i), r) for i in range(n + 1))


def naive_psi(k, g_fn, phi_fn, chi_fn, alpha_fn, beta_fn, gamma_fn):
    r = 2 * beta_fn(2 * k + 1) + 1
    p = gamma_fn(alpha_fn(r))
    x = 0
    for _ in range(p):
        x = phi_fn(naive_window_max(chi_fn, g_fn, x, r))
    return x


def naive_psi_tilde(k, g_fn, phi_fn, chi_fn, alpha_fn, beta_fn, gamma_fn, delta_fn, omega_fn):
    w = omega_fn(k)
    k0 = max(k, -((-(w - 1)) // 2)) if w >= 1 else k
    floored = lambda n, m, r: max(delta_fn(k), chi_fn(n, m, r))
    return naive_psi(k0, g_fn, phi_fn, floored, alpha_fn, beta_fn, gamma_fn)


def naive_psi_hat(k, g_fn, phi_hat_fn, chi_fn, alpha_fn, beta_fn, gamma_fn, xi_fn):
    r = 4 * beta_fn(2 * k + 1) + 3
    p = gamma_fn(alpha_fn(r)) + 1
    x = 0
    for _ in range(p):
        x = phi_hat_fn(naive_window_max(chi_fn, g_fn, x, r), xi_fn(r))
    return x


def naive_g_major(g_fn):
    return lambda n: max(g_fn(i) for i in range(n + 1))


def naive_omega(k, g_fn, delta, theta):
    """delta/theta: callables (k, g_fn) -> int."""
    gm = naive_g_major(g_fn)
    g_star = lambda n: n + gm(n)
    g_tilde = lambda l: (lambda m: g_star(max(l, m)))
    h = lambda n: g_star(max(n, theta(k, g_tilde(n))))
    a = delta(k, h)
    return max(a, theta(k, g_tilde(a)))


def naive_omega_tilde(k, g_fn, delta, f_fn):
    gm = naive_g_major(g_fn)
    f_m = lambda n: max(f_fn(i) for i in range(n + 1))
    l = f_m(k)
    g_l = lambda n: gm(n + l) + l
    return delta(k, g_l) + l


# --- finite metric-space combinatorics --------------------------------------


def pairwise_dists(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def max_separated_size(points, eps):
    """Largest subset with all pairwise distances > eps (exhaustive)."""
    m = len(points)
    d = pairwise_dists(points)
    best = 1
    order = range(m)
    for size in range(m, 0, -1):
        if size <= best:
            break
        for subset in combinations(order, size):
            ok = all(d[a, b] > eps for a, b in combinations(subset, 2))
            if ok:
                best = size
                break
        if best == size:
            break
    return best


def min_net_size(points, eps):
    """Smallest number of centers (from the point set) covering every
    point within eps (exhaustive)."""
    m = len(points)
    d = pairwise_dists(points)
    cover = [frozenset(j for j in range(m) if d[i, j] <= eps) for i in range(m)]
    everything = frozenset(range(m))
    for size in range(1, m + 1):
        for centers in combinations(range(m), size):
            hit = frozenset().union(*(cover[c] for c in centers))
            if hit == everything:
                return size
    return m


def has_close_pair(points, eps):
    """Plain double-loop oracle used by the pigeonhole tests."""
    m = len(points)
    for i in range(m):
        for j in range(i + 1, m):
            if np.linalg.norm(points[i] - points[j]) <= eps:
                return True
    return False
