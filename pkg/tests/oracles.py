"""Independent reference computations used only by the tests.

None of these share code paths with the package: they enumerate instead of
optimizing.
"""
import itertools

import numpy as np


def brute_force_codes(m, n):
    """Every m x n 0/1 matrix with no empty row or column, as row-major codes."""
    out = []
    for flat in itertools.product((0, 1), repeat=m * n):
        mat = [flat[i * n:(i + 1) * n] for i in range(m)]
        if all(any(r) for r in mat) and all(any(mat[i][j] for i in range(m)) for j in range(n)):
            out.append(int("".join(map(str, flat)), 2))
    return sorted(out)


def grid_best_allocation(x, S, C, u_bar, demand, avail, lam, step=0.25):
    """Exhaustive search over allocations on a ``step`` lattice.

    Returns ``(best_reward, best_u)``.  Shortfall is implied by demand.
    """
    x = np.asarray(x)
    m, n = x.shape
    fixed = float(np.sum(np.asarray(S)[x == 1]))
    # per-user column options: allocations from each active resource, sum <= demand
    partial_use = np.zeros((1, m))
    partial_cost = np.zeros(1)
    partial_u = np.zeros((1, m, 0))
    for j in range(n):
        levels = []
        for i in range(m):
            if x[i, j]:
                top = min(demand[j], avail[i], u_bar[i][j])
                levels.append(np.arange(0, int(round(top / step)) + 1) * step)
            else:
                levels.append(np.zeros(1))
        opts = np.array(list(itertools.product(*levels))).reshape(-1, m)
        opts = opts[opts.sum(axis=1) <= demand[j] + 1e-12]
        cost = opts @ np.asarray(C)[:, j] + lam * (demand[j] - opts.sum(axis=1))
        use = partial_use[:, None, :] + opts[None, :, :]
        tot = partial_cost[:, None] + cost[None, :]
        allu = np.concatenate(
            [np.repeat(partial_u[:, None], len(opts), axis=1),
             np.broadcast_to(opts[None, :, :, None], (len(partial_use), len(opts), m, 1))], axis=3)
        keep = (use <= np.asarray(avail) + 1e-12).all(axis=2)
        partial_use, partial_cost, partial_u = use[keep], tot[keep], allu[keep]
    best = int(np.argmin(partial_cost))
    return fixed - float(partial_cost[best]), partial_u[best]


def best_over_all_policies(rewards, P, terminal):
    """Max over every deterministic Markov policy of the expected total reward.

    ``rewards`` has shape (N-1, l, A); returns J_1 for each start state.
    """
    steps, l, A = rewards.shape
    slots = steps * l
    best = np.full(l, -np.inf)
    for choice in itertools.product(range(A), repeat=slots):
        pol = np.array(choice, dtype=int).reshape(steps, l) if slots else np.zeros((0, l), dtype=int)
        # forward evaluation from each start state separately
        for s0 in range(l):
            dist = np.zeros(l)
            dist[s0] = 1.0
            total = 0.0
            for k in range(steps):
                total += float(dist @ rewards[k, np.arange(l), pol[k]])
                dist = dist @ P[k]
            total += float(dist @ terminal)
            best[s0] = max(best[s0], total)
    return best
