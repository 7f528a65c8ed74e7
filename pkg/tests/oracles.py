"""Brute-force reference implementations used only by the tests.

Everything here is deliberately loop-based and shares no code with the
vectorized package paths it checks.
"""
import math


def hex_points(side, d, x0, y0, closed=True, reach=60):
    h = d * math.sqrt(3) / 2
    out = []
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            x = x0 + j * d + (i % 2) * d / 2
            y = y0 + i * h
            if closed:
                inside = -1e-9 <= x <= side + 1e-9 and -1e-9 <= y <= side + 1e-9
            else:
                inside = 0 < x < side and 0 < y < side
            if inside:
                out.append((x, y))
    return out


def dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def gain(d, exponent):
    return max(d, 1.0) ** (-exponent)


def dbm_w(p):
    return 10 ** ((p - 30) / 10)


def station_table(snap):
    """Plain-list view of a snapshot: (position, is_femto, per-PRB power, prb list)."""
    cfg = snap.config
    rows = []
    pm = dbm_w(cfg.macro_tx_power_dbm) / cfg.total_prbs
    size = cfg.total_prbs // cfg.n_fragments
    pf = dbm_w(cfg.femto_tx_power_dbm) / size
    for p in snap.macro_positions.tolist():
        rows.append((tuple(p), False, pm, list(range(cfg.total_prbs))))
    for p, f in zip(snap.femto_positions.tolist(), snap.femto_fragment.tolist()):
        rows.append((tuple(p), True, pf, list(range(f * size, (f + 1) * size))))
    return rows


def nearest_scan(snap):
    users = snap.user_positions.tolist()
    bss = snap.bs_positions.tolist()
    out = []
    for u in users:
        best, best_d = -1, math.inf
        for k, b in enumerate(bss):
            d = max(dist(u, b), 1.0)
            if d < best_d:
                best, best_d = k, d
        out.append(best)
    return out


def weight_direct(snap, fading, kind, bias_w=0.0, range_macro=1.0, range_femto=1.0, literal=False):
    """Association weight T_i * Z_i^-gamma, one (user, BS) pair at a time."""
    cfg = snap.config
    g = cfg.path_loss_exponent
    st = station_table(snap)
    users = snap.user_positions.tolist()
    W = []
    for u, up in enumerate(users):
        row = []
        for i, (bp, femto, pprb, _) in enumerate(st):
            z = gain(dist(up, bp), g)
            if kind == "nearest":
                t = 1.0
            elif kind == "max_power":
                t = dbm_w(cfg.femto_tx_power_dbm if femto else cfg.macro_tx_power_dbm)
            elif kind == "range_mod":
                p = dbm_w(cfg.femto_tx_power_dbm if femto else cfg.macro_tx_power_dbm)
                t = p * (range_femto if femto else range_macro)
            else:
                num = fading[u][i] * (pprb + (bias_w if femto else 0.0))
                terms = []
                for j, (jp, jf, jprb, _) in enumerate(st):
                    if j == i:
                        continue
                    power = jprb + (bias_w if jf else 0.0)
                    lj = 1.0 if literal else gain(dist(up, jp), g)
                    terms.append(fading[u][j] * power * lj)
                t = num / (math.fsum(terms) + cfg.noise_power_w)
            row.append(t * z)
        W.append(row)
    return W


def argmax_first(row):
    best, best_v = 0, row[0]
    for k, v in enumerate(row):
        if v > best_v:
            best, best_v = k, v
    return best


def max_sinr_reference(snap, fading):
    """Per-PRB SINR association: serving link / (all other links + N_0)."""
    cfg = snap.config
    g = cfg.path_loss_exponent
    st = station_table(snap)
    out = []
    for u, up in enumerate(snap.user_positions.tolist()):
        rx = [fading[u][k] * p * gain(dist(up, bp), g) for k, (bp, _, p, _) in enumerate(st)]
        sinrs = []
        for i in range(len(st)):
            others = math.fsum(rx[j] for j in range(len(st)) if j != i)
            sinrs.append(rx[i] / (others + cfg.noise_power_w))
        out.append(argmax_first(sinrs))
    return out


def overlap_by_index(a, b, n):
    return sum(1 for i in range(n) if i in a and i in b)


def round_robin_counts(p, users):
    """PRB counts from dealing PRBs one at a time to sorted users."""
    counts = {u: 0 for u in users}
    order = sorted(users)
    if not order:
        return counts
    for k in range(p):
        counts[order[k % len(order)]] += 1
    return counts


def sinr_direct(snap, fading, user_prbs, active, serving, alpha, noise_model="literal"):
    """Downlink SINR term by term for one user.

    ``user_prbs`` is the user's PRB set, ``active`` a list with the active
    PRB set of every BS.
    """
    cfg = snap.config
    g = cfg.path_loss_exponent
    st = station_table(snap)
    u, j = serving
    up = tuple(snap.user_positions[u].tolist())
    bp, _, pj, _ = st[j]
    signal = alpha * pj * fading[u][j] * gain(dist(up, bp), g)
    terms = []
    for k, (kp, _, pk, _) in enumerate(st):
        if k == j:
            continue
        beta = overlap_by_index(user_prbs, active[k], cfg.total_prbs)
        terms.append(beta * pk * fading[u][k] * gain(dist(up, kp), g))
    noise = cfg.noise_power_w if noise_model == "literal" else alpha * cfg.noise_power_w / cfg.total_prbs
    return signal / (math.fsum(terms) + noise)


def psi_sorted(rates, deltas):
    served = sorted(r for r in rates if r > 0)
    n = len(served)
    if n == 0:
        return None
    out = []
    for d in deltas:
        # empirical CDF at d: fraction of served rates <= d
        le = 0
        for r in served:
            if r <= d:
                le += 1
            else:
                break
        out.append((n - le) / n)
    return out
