"""Pure numpy versions of the RK4 kernels (fallback when the extension is absent)."""
import numpy as np

OK, HIT, BAD, LOW, HIGH = 0, 1, 2, 3, 4


def _rhs(p, q, u, v):
    return p * (1.0 - p) * (u * q - 1.0), q * (1.0 - q) * (v * p - 1.0)


def _step(p, q, u, v, h, h6):
    with np.errstate(all="ignore"):
        return _step_raw(p, q, u, v, h, h6)


def _step_raw(p, q, u, v, h, h6):
    a1, b1 = _rhs(p, q, u, v)
    a2, b2 = _rhs(p + 0.5 * h * a1, q + 0.5 * h * b1, u, v)
    a3, b3 = _rhs(p + 0.5 * h * a2, q + 0.5 * h * b2, u, v)
    a4, b4 = _rhs(p + h * a3, q + h * b3, u, v)
    pn = p + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    qn = q + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
    return pn, qn


def _where(p, q, sp, sq, r2):
    out = np.zeros(p.shape, dtype=np.int8)
    out[(p - 1.0) * (p - 1.0) + (q - 1.0) * (q - 1.0) <= r2] = HIGH
    out[p * p + q * q <= r2] = LOW
    out[(p - sp) * (p - sp) + (q - sq) * (q - sq) <= r2] = HIT
    return out


def rk4_final(p0, q0, u, v, h, n_steps, sp, sq, radius):
    p = np.array(p0, dtype=np.float64)
    q = np.array(q0, dtype=np.float64)
    status = np.zeros(p.shape, dtype=np.int8)
    r2 = radius * radius
    h6 = h / 6.0
    status = _where(p, q, sp, sq, r2)
    live = np.flatnonzero(status == OK)
    for _ in range(int(n_steps)):
        if live.size == 0:
            break
        pn, qn = _step(p[live], q[live], u, v, h, h6)
        finite = np.isfinite(pn) & np.isfinite(qn)
        pn = np.where(finite, np.clip(pn, 0.0, 1.0), pn)
        qn = np.where(finite, np.clip(qn, 0.0, 1.0), qn)
        p[live] = pn
        q[live] = qn
        where = _where(pn, qn, sp, sq, r2)
        where[~finite] = BAD
        status[live] = where
        live = live[where == OK]
    return p, q, status


def rk4_path(p0, q0, u, v, h, n_steps):
    ps = np.empty(int(n_steps) + 1)
    qs = np.empty(int(n_steps) + 1)
    p, q = float(p0), float(q0)
    ps[0], qs[0] = p, q
    h6 = h / 6.0
    for s in range(int(n_steps)):
        p, q = _step(p, q, u, v, h, h6)
        if not (np.isfinite(p) and np.isfinite(q)):
            return ps[:s + 1], qs[:s + 1], s + 1
        p = min(max(p, 0.0), 1.0)
        q = min(max(q, 0.0), 1.0)
        ps[s + 1], qs[s + 1] = p, q
    return ps, qs, -1
