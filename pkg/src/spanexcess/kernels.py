"""Hot numeric kernels.

Graphs enter as an ``int64`` array of neighbourhood bitmasks (bit ``j`` of
``adj[i]`` set iff ``ij`` is an edge), which caps kernel inputs at 62 vertices.
Every kernel is numba-compiled unless ``SPANEXCESS_DISABLE_NUMBA`` is set; the
``*_numpy`` batch drivers are the vectorised fallback used in that case.
"""

import numpy as np

from ._jit import njit, py

BIG = 1 << 30


# ---------------------------------------------------------------------------
# bit helpers
# ---------------------------------------------------------------------------


@njit
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def flood(adj, n, alive, seed):
    """Vertex mask of the component of ``alive`` containing the bits of ``seed``."""
    comp = seed
    frontier = seed
    while frontier:
        nxt = 0
        for v in range(n):
            if (frontier >> v) & 1:
                nxt |= adj[v]
        nxt &= alive & ~comp
        comp |= nxt
        frontier = nxt
    return comp


@njit
def count_components(adj, n, alive):
    rem = alive
    c = 0
    while rem:
        low = rem & -rem
        rem &= ~flood(adj, n, alive, low)
        c += 1
    return c


@njit
def component_masks(adj, n, alive, out):
    """Write the component masks of ``alive`` into ``out``; return their count."""
    rem = alive
    c = 0
    while rem:
        low = rem & -rem
        comp = flood(adj, n, alive, low)
        out[c] = comp
        rem &= ~comp
        c += 1
    return c


@njit
def is_connected_masks(adj, n):
    if n == 0:
        return False
    full = (np.int64(1) << n) - 1
    return flood(adj, n, full, np.int64(1)) == full


@njit
def masks_from_code(code, n, pu, pv):
    adj = np.zeros(n, np.int64)
    for e in range(pu.shape[0]):
        if (code >> e) & 1:
            adj[pu[e]] |= np.int64(1) << pv[e]
            adj[pv[e]] |= np.int64(1) << pu[e]
    return adj


@njit
def dense_from_masks(adj, n):
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if (adj[i] >> j) & 1:
                a[i, j] = 1.0
    return a


def pair_order(n):
    """Vertex pairs in graph6 (column-major upper triangle) order."""
    pu = [i for j in range(1, n) for i in range(j)]
    pv = [j for j in range(1, n) for i in range(j)]
    return np.array(pu, dtype=np.int64), np.array(pv, dtype=np.int64)


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------


@njit
def offdiag_norm(a):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return np.sqrt(s)


@njit
def jacobi_eigenvalues(a_in, tol, max_sweeps):
    """Cyclic Jacobi on a symmetric matrix.

    Returns ``(diagonal, off_norm, sweeps, converged)``. Once the Frobenius
    norm of the off-diagonal part is below ``tol`` every eigenvalue lies within
    ``tol`` of some diagonal entry.
    """
    a = a_in.copy()
    n = a.shape[0]
    off = offdiag_norm(a)
    sweeps = 0
    while off >= tol and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for r in range(n):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - s * arq
                    a[r, q] = s * arp + c * arq
                for r in range(n):
                    apr = a[p, r]
                    aqr = a[q, r]
                    a[p, r] = c * apr - s * aqr
                    a[q, r] = s * apr + c * aqr
                a[p, q] = 0.0
                a[q, p] = 0.0
        sweeps += 1
        off = offdiag_norm(a)
    d = np.empty(n)
    for i in range(n):
        d[i] = a[i, i]
    return d, off, sweeps, off < tol


@njit
def jacobi_max_eigenvalue(a, tol, max_sweeps):
    d, off, sweeps, ok = jacobi_eigenvalues(a, tol, max_sweeps)
    return d.max(), off, ok


@njit
def collatz_wielandt(a, shift, tol, max_iter):
    """Power iteration on ``a + shift*I`` from the all-ones vector.

    For a nonnegative irreducible ``a`` and any positive iterate ``v`` the
    ratios ``(Av)_i / v_i`` bracket the Perron root, so the returned
    ``(lo, hi, iters)`` is a certified interval even without convergence.
    """
    n = a.shape[0]
    v = np.ones(n)
    lo = -np.inf
    hi = np.inf
    it = 0
    while it < max_iter:
        w = a @ v + shift * v
        cur_lo = np.inf
        cur_hi = -np.inf
        for i in range(n):
            if v[i] <= 0.0:
                cur_lo = -np.inf
                cur_hi = np.inf
                break
            r = w[i] / v[i]
            if r < cur_lo:
                cur_lo = r
            if r > cur_hi:
                cur_hi = r
        if cur_lo > lo:
            lo = cur_lo
        if cur_hi < hi:
            hi = cur_hi
        it += 1
        if hi - lo < tol:
            break
        v = w / w.max()
    return lo - shift, hi - shift, it


# ---------------------------------------------------------------------------
# spanning trees with bounded total excess
# ---------------------------------------------------------------------------


@njit
def search_order(adj, n):
    """Edges sorted by descending min endpoint degree, ties lexicographic."""
    deg = np.zeros(n, np.int64)
    m = 0
    for v in range(n):
        deg[v] = popcount(adj[v])
        m += deg[v]
    m //= 2
    eu = np.empty(m, np.int64)
    ev = np.empty(m, np.int64)
    key = np.empty(m, np.int64)
    e = 0
    for u in range(n):
        for v in range(u + 1, n):
            if (adj[u] >> v) & 1:
                eu[e] = u
                ev[e] = v
                key[e] = -min(deg[u], deg[v]) * n * n + u * n + v
                e += 1
    idx = np.argsort(key)
    return eu[idx], ev[idx]


@njit
def excess_lower_bound(avail, inc, n, k, buf):
    """Lower bound on te(T, k) over spanning trees T with inc <= T <= avail.

    Removing ``v`` splits ``avail`` into components; a spanning tree needs at
    least one edge from ``v`` into each, and every committed edge counts.
    """
    full = (np.int64(1) << n) - 1
    lb = 0
    for v in range(n):
        alive = full & ~(np.int64(1) << v)
        c = component_masks(avail, n, alive, buf)
        d = 0
        for i in range(c):
            cnt = popcount(inc[v] & buf[i])
            d += cnt if cnt > 1 else 1
        if d > k:
            lb += d - k
    return lb


@njit
def bnb_search(adj, n, eu, ev, status0, k, best_init, stop_at):
    """Depth-first branch and bound over edge inclusion/exclusion.

    ``status0`` holds per-edge decisions (-1 open, 1 included, 0 excluded) in
    the branching order given by ``eu``/``ev``. Only trees with te strictly
    below ``best_init`` are accepted; the search stops once one with
    te <= ``stop_at`` is found or the root lower bound is met.

    Returns ``(best, best_status, nodes, found)``.
    """
    m = eu.shape[0]
    status = status0.copy()
    best_status = status0.copy()
    best = best_init
    found = False
    nodes = 0
    stack = np.empty(m + 1, np.int64)
    phase = np.empty(m + 1, np.int8)
    top = 0
    inc = np.zeros(n, np.int64)
    avail = np.zeros(n, np.int64)
    buf = np.zeros(n, np.int64)
    full = (np.int64(1) << n) - 1
    root_lb = -1
    if n <= 1:
        return 0 if 0 < best_init else best_init, best_status, 1, 0 < best_init
    while True:
        nodes += 1
        for v in range(n):
            inc[v] = 0
            avail[v] = 0
        n_inc = 0
        for e in range(m):
            st = status[e]
            if st != 0:
                bu = np.int64(1) << eu[e]
                bv = np.int64(1) << ev[e]
                avail[eu[e]] |= bv
                avail[ev[e]] |= bu
                if st == 1:
                    inc[eu[e]] |= bv
                    inc[ev[e]] |= bu
                    n_inc += 1
        descended = False
        if flood(avail, n, full, np.int64(1)) == full:
            lb = excess_lower_bound(avail, inc, n, k, buf)
            if root_lb < 0:
                root_lb = lb
            if lb < best:
                if n_inc == n - 1:
                    best = lb
                    best_status[:] = status
                    found = True
                    if best <= stop_at or best <= root_lb:
                        break
                else:
                    j = -1
                    for e in range(m):
                        if status[e] == -1:
                            j = e
                            break
                    if j >= 0:
                        u = eu[j]
                        w = ev[j]
                        if (flood(inc, n, full, np.int64(1) << u) >> w) & 1:
                            status[j] = 0
                            phase[top] = 1
                        else:
                            status[j] = 1
                            phase[top] = 0
                        stack[top] = j
                        top += 1
                        descended = True
        if not descended:
            resumed = False
            while top > 0:
                top -= 1
                j = stack[top]
                if phase[top] == 0:
                    status[j] = 0
                    phase[top] = 1
                    top += 1
                    resumed = True
                    break
                status[j] = -1
            if not resumed:
                break
    return best, best_status, nodes, found


@njit
def has_tree_within(adj, n, k, b):
    """Decision form: does some spanning tree have te(T, k) <= b?"""
    eu, ev = search_order(adj, n)
    status = np.full(eu.shape[0], -1, np.int8)
    best, st, nodes, found = bnb_search(adj, n, eu, ev, status, k, b + 1, b)
    return found


@njit
def tree_total_excess(tree_adj, n, k):
    te = 0
    for v in range(n):
        d = popcount(tree_adj[v])
        if d > k:
            te += d - k
    return te


@njit
def prufer_min_excess(adj, n, k):
    """Minimum te(T, k) over all labelled trees whose edges lie in ``adj``.

    Walks every Prufer sequence of length n-2 and decodes it; returns -1 when
    no labelled tree is a subgraph. Shares no code with :func:`bnb_search`.
    """
    if n == 1:
        return 0
    if n == 2:
        return 2 * max(0, 1 - k) if (adj[0] >> 1) & 1 else -1
    length = n - 2
    total = 1
    for _ in range(length):
        total *= n
    seq = np.zeros(length, np.int64)
    deg = np.zeros(n, np.int64)
    work = np.zeros(n, np.int64)
    best = -1
    for code in range(total):
        c = code
        for i in range(length):
            seq[i] = c % n
            c //= n
        for v in range(n):
            deg[v] = 1
        for i in range(length):
            deg[seq[i]] += 1
        te = 0
        for v in range(n):
            if deg[v] > k:
                te += deg[v] - k
        if best >= 0 and te >= best:
            continue
        for v in range(n):
            work[v] = deg[v]
        ok = True
        for i in range(length):
            a = seq[i]
            leaf = 0
            while work[leaf] != 1:
                leaf += 1
            if not (adj[leaf] >> a) & 1:
                ok = False
                break
            work[leaf] -= 1
            work[a] -= 1
        if ok:
            u = -1
            for v in range(n):
                if work[v] == 1:
                    if u < 0:
                        u = v
                    else:
                        if not (adj[u] >> v) & 1:
                            ok = False
                        break
        if ok:
            best = te
    return best


# ---------------------------------------------------------------------------
# cut condition  c(G - S) <= (k - 2)|S| + b + 2
# ---------------------------------------------------------------------------


@njit
def _precedes(a, cur):
    """Order on subsets: smaller size first, then lexicographic on sorted elements."""
    if cur < 0:
        return True
    pa = popcount(a)
    pc = popcount(cur)
    if pa != pc:
        return pa < pc
    d = a ^ cur
    if d == 0:
        return False
    return (a & (d & -d)) != 0


@njit
def cut_slack(adj, n, S, k, b):
    full = (np.int64(1) << n) - 1
    return count_components(adj, n, full & ~S) - ((k - 2) * popcount(S) + b + 2)


@njit
def win_scan(adj, n, k, b, include_empty):
    """Subset maximising the cut-condition slack over proper subsets S."""
    full = (np.int64(1) << n) - 1
    best_mask = np.int64(-1)
    best_slack = -BIG
    start = 0 if include_empty else 1
    for S in range(start, full):
        slack = cut_slack(adj, n, np.int64(S), k, b)
        if slack > best_slack or (slack == best_slack and _precedes(np.int64(S), best_mask)):
            best_slack = slack
            best_mask = np.int64(S)
    return best_mask, best_slack


@njit
def max_cut_slack(adj, n, k, b):
    """Like :func:`win_scan` over nonempty S, without tie-breaking."""
    full = (np.int64(1) << n) - 1
    best = -BIG
    for S in range(1, full):
        slack = cut_slack(adj, n, np.int64(S), k, b)
        if slack > best:
            best = slack
    return best


# ---------------------------------------------------------------------------
# exhaustive scans over labelled graphs (numba path)
# ---------------------------------------------------------------------------


@njit
def theorem_scan_chunk(n, start, stop, k, b, thr, filter_tol, use_filter, tol, max_sweeps, pu, pv, cap):
    """Scan labelled graphs with edge codes in ``[start, stop)``.

    Returns ``(counts, exc_codes, exc_rho, best_pass_margin, max_fail_rho, bad)``
    where ``counts = [scanned, connected, survivors, exceptions]``. Exceptions
    are survivors with no spanning tree of total excess <= b; at most ``cap``
    are stored. ``bad`` counts Jacobi runs that hit the sweep cap.
    """
    counts = np.zeros(4, np.int64)
    exc_codes = np.empty(cap, np.int64)
    exc_rho = np.empty(cap)
    best_pass_margin = np.inf
    max_fail_rho = -np.inf
    bad = 0
    for code in range(start, stop):
        counts[0] += 1
        adj = masks_from_code(np.int64(code), n, pu, pv)
        if not is_connected_masks(adj, n):
            continue
        counts[1] += 1
        rho, off, ok = jacobi_max_eigenvalue(dense_from_masks(adj, n), tol, max_sweeps)
        if not ok:
            bad += 1
        if use_filter and rho < thr - filter_tol:
            continue
        counts[2] += 1
        if has_tree_within(adj, n, k, b):
            if rho - thr < best_pass_margin:
                best_pass_margin = rho - thr
        else:
            if counts[3] < cap:
                exc_codes[counts[3]] = code
                exc_rho[counts[3]] = rho
            counts[3] += 1
            if rho > max_fail_rho:
                max_fail_rho = rho
    stored = min(counts[3], cap)
    return counts, exc_codes[:stored], exc_rho[:stored], best_pass_margin, max_fail_rho, bad


@njit
def cut_condition_scan_chunk(n, start, stop, k, b, pu, pv):
    """Check 'cut condition => bounded-excess tree' on labelled graphs.

    Returns ``(counts, first_failure)`` with ``counts = [connected,
    condition_holds, implication_failures, condition_fails_but_tree_exists]``.
    """
    counts = np.zeros(4, np.int64)
    first_failure = np.int64(-1)
    for code in range(start, stop):
        adj = masks_from_code(np.int64(code), n, pu, pv)
        if not is_connected_masks(adj, n):
            continue
        counts[0] += 1
        holds = max_cut_slack(adj, n, k, b) <= 0
        tree = has_tree_within(adj, n, k, b)
        if holds:
            counts[1] += 1
            if not tree:
                counts[2] += 1
                if first_failure < 0:
                    first_failure = code
        elif tree:
            counts[3] += 1
    return counts, first_failure


# ---------------------------------------------------------------------------
# vectorised numpy fallbacks
# ---------------------------------------------------------------------------


def dense_stack_numpy(codes, n):
    pu, pv = pair_order(n)
    bits = ((codes[:, None] >> np.arange(pu.shape[0], dtype=np.int64)) & 1).astype(np.float64)
    a = np.zeros((codes.shape[0], n, n))
    a[:, pu, pv] = bits
    a[:, pv, pu] = bits
    return a


def connected_numpy(a):
    """Connectivity of each matrix in a stack via repeated squaring of reachability."""
    n = a.shape[1]
    reach = (a + np.eye(n)) > 0
    steps = 1
    while steps < n:
        r = reach.astype(np.int32)
        reach = np.matmul(r, r) > 0
        steps *= 2
    return reach[:, 0, :].all(axis=1)


def jacobi_max_numpy(a_stack, tol, max_sweeps):
    """Cyclic Jacobi applied to a whole stack of symmetric matrices at once.

    Returns ``(max_eigenvalue, off_norm)`` per matrix.
    """
    a = np.array(a_stack, dtype=np.float64, copy=True)
    n = a.shape[1]
    mask = ~np.eye(n, dtype=bool)
    off = np.sqrt((a[:, mask] ** 2).sum(axis=1))
    for _ in range(max_sweeps):
        if not (off >= tol).any():
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                nz = apq != 0.0
                if not nz.any():
                    continue
                safe = np.where(nz, apq, 1.0)
                with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                    theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                    t = np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                    t = np.where(np.abs(theta) > 1e150, 0.5 / theta, t)
                t = np.where(nz, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, :, p].copy()
                cq = a[:, :, q].copy()
                a[:, :, p] = c[:, None] * cp - s[:, None] * cq
                a[:, :, q] = s[:, None] * cp + c[:, None] * cq
                rp = a[:, p, :].copy()
                rq = a[:, q, :].copy()
                a[:, p, :] = c[:, None] * rp - s[:, None] * rq
                a[:, q, :] = s[:, None] * rp + c[:, None] * rq
                a[nz, p, q] = 0.0
                a[nz, q, p] = 0.0
        off = np.sqrt((a[:, mask] ** 2).sum(axis=1))
    return np.diagonal(a, axis1=1, axis2=2).max(axis=1), off


def masks_from_dense(a):
    n = a.shape[-1]
    weights = np.int64(1) << np.arange(n, dtype=np.int64)
    return (a.astype(np.int64) * weights).sum(axis=-1)


def theorem_scan_chunk_numpy(n, start, stop, k, b, thr, filter_tol, use_filter, tol, max_sweeps, cap):
    """Vectorised counterpart of :func:`theorem_scan_chunk`."""
    codes = np.arange(start, stop, dtype=np.int64)
    a = dense_stack_numpy(codes, n)
    conn = connected_numpy(a)
    codes = codes[conn]
    a = a[conn]
    counts = np.zeros(4, np.int64)
    counts[0] = stop - start
    counts[1] = codes.shape[0]
    if codes.shape[0] == 0:
        return counts, np.empty(0, np.int64), np.empty(0), np.inf, -np.inf, 0
    rho, off = jacobi_max_numpy(a, tol, max_sweeps)
    bad = int((off >= tol).sum())
    keep = rho >= thr - filter_tol if use_filter else np.ones(rho.shape[0], dtype=bool)
    counts[2] = int(keep.sum())
    masks = masks_from_dense(a[keep])
    decide = py(has_tree_within)
    best_pass_margin = np.inf
    max_fail_rho = -np.inf
    exc_codes = []
    exc_rho = []
    for code, r, adj in zip(codes[keep], rho[keep], masks):
        if decide(adj, n, k, b):
            best_pass_margin = min(best_pass_margin, r - thr)
        else:
            exc_codes.append(code)
            exc_rho.append(r)
            max_fail_rho = max(max_fail_rho, r)
    counts[3] = len(exc_codes)
    return (counts, np.array(exc_codes[:cap], dtype=np.int64), np.array(exc_rho[:cap]),
            best_pass_margin, max_fail_rho, bad)


def cut_condition_scan_chunk_numpy(n, start, stop, k, b):
    """Fallback for :func:`cut_condition_scan_chunk` (connectivity vectorised)."""
    codes = np.arange(start, stop, dtype=np.int64)
    a = dense_stack_numpy(codes, n)
    conn = connected_numpy(a)
    masks = masks_from_dense(a[conn])
    counts = np.zeros(4, np.int64)
    counts[0] = masks.shape[0]
    first_failure = -1
    slack = py(max_cut_slack)
    decide = py(has_tree_within)
    for code, adj in zip(codes[conn], masks):
        holds = slack(adj, n, k, b) <= 0
        tree = decide(adj, n, k, b)
        if holds:
            counts[1] += 1
            if not tree:
                counts[2] += 1
                if first_failure < 0:
                    first_failure = int(code)
        elif tree:
            counts[3] += 1
    return counts, first_failure
