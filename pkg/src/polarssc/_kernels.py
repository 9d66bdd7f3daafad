"""Hot per-frame decoding kernels.

All functions here are numba ``@njit`` targets (see :mod:`polarssc._accel`);
they take plain numpy arrays plus scalar ints and avoid Python objects.

Conventions shared by every kernel:

- Factor-graph stages are numbered 0 (message side) to n (channel side).
  The building block between stages k and k+1 pairs rows j and j ^ 2^k;
  the row with bit k clear is the f (upper) input, the row with bit k set
  the g (lower) input.
- Soft values use a windowed store ``llr_w`` of length N-1: stage k
  (k < n) keeps only the 2^k entries of the row block currently live,
  at offset 2^k - 1, slot = row mod 2^k. Stage n is the channel LLR
  vector itself.
- ``hard`` is a flat (n+1)*N int8 array of hard values per stage; row j of
  stage k lives at hard[k*N + j]. For the syndrome-check decoders it holds
  the full transform of the current codeword estimate x (stage 0 is then
  the implied message); for SC/SCL it holds decided partial sums.
- Hard decisions map LLR >= 0 to bit 0 everywhere.
"""

import numpy as np

from ._accel import njit


@njit(cache=True)
def _ctz(i):
    t = 0
    while i & 1 == 0:
        t += 1
        i >>= 1
    return t


@njit(cache=True)
def _popcount(mask):
    c = 0
    while mask:
        c += mask & 1
        mask >>= 1
    return c


@njit(cache=True)
def transform_inplace(bits):
    """GF(2) transform x -> x.G in place; the transform is an involution."""
    N = bits.shape[0]
    half = 1
    while half < N:
        step = half << 1
        for base in range(0, N, step):
            for m in range(half):
                bits[base + m] ^= bits[base + half + m]
        half = step


@njit(cache=True)
def compute_hard_stages(x, hard, n, N):
    """Fill hard[k*N + j] with the stage-k hard values implied by channel-side x.

    Stage n is x itself; stage 0 is the implied message x.G.
    """
    for j in range(N):
        hard[n * N + j] = x[j]
    for k in range(n - 1, -1, -1):
        half = 1 << k
        step = half << 1
        for base in range(0, N, step):
            for m in range(half):
                j0 = base + m
                j1 = j0 + half
                hard[k * N + j0] = hard[(k + 1) * N + j0] ^ hard[(k + 1) * N + j1]
                hard[k * N + j1] = hard[(k + 1) * N + j1]


@njit(cache=True)
def harden_into(y, x):
    """Hard decision per channel LLR: bit 0 iff y >= 0."""
    for j in range(y.shape[0]):
        x[j] = 0 if y[j] >= 0.0 else 1


@njit(cache=True)
def _sc_llr_pass(y, i, n, N, llr_w, hard):
    """Stage updates for bit i under the in-order SC schedule; returns its LLR.

    Recomputes stages ctz(i)..0 (all stages for i = 0); g partial sums come
    from decided values hard[k*N + sibling row]. Valid only when bits are
    decoded strictly in index order.
    """
    if n == 0:
        return y[0]
    top = n - 1 if i == 0 else _ctz(i)
    for k in range(top, -1, -1):
        half = 1 << k
        off = half - 1
        offp = (half << 1) - 1
        blk = (i >> (k + 1)) << (k + 1)
        chan = k == n - 1
        if (i >> k) & 1 == 0:  # f
            for m in range(half):
                a = y[blk + m] if chan else llr_w[offp + m]
                b = y[blk + half + m] if chan else llr_w[offp + half + m]
                s = min(abs(a), abs(b))
                llr_w[off + m] = -s if (a < 0.0) != (b < 0.0) else s
        else:  # g, partial sum = decided stage-k value of the sibling row
            for m in range(half):
                a = y[blk + m] if chan else llr_w[offp + m]
                b = y[blk + half + m] if chan else llr_w[offp + half + m]
                ps = hard[k * N + blk + m]
                llr_w[off + m] = b + a if ps == 0 else b - a
    return llr_w[0]


@njit(cache=True)
def _sc_propagate(i, n, N, hard):
    """Propagate decided partial sums after fixing bit i (trailing-ones rule)."""
    k = 0
    ii = i
    while ii & 1 == 1 and k < n:
        blk = (i >> (k + 1)) << (k + 1)
        half = 1 << k
        for m in range(half):
            j0 = blk + m
            j1 = j0 + half
            hard[(k + 1) * N + j0] = hard[k * N + j0] ^ hard[k * N + j1]
            hard[(k + 1) * N + j1] = hard[k * N + j1]
        ii >>= 1
        k += 1


@njit(cache=True)
def sc_decode_batch(llrs, frozen, n):
    """Min-sum SC decode of a batch of LLR frames; returns message estimates."""
    F = llrs.shape[0]
    N = llrs.shape[1]
    u_hats = np.empty((F, N), dtype=np.int8)
    llr_w = np.empty(max(N - 1, 1), dtype=np.float64)
    hard = np.empty((n + 1) * N, dtype=np.int8)
    for f in range(F):
        y = llrs[f]
        for i in range(N):
            l0 = _sc_llr_pass(y, i, n, N, llr_w, hard)
            u = 0
            if frozen[i] == 0 and l0 < 0.0:
                u = 1
            u_hats[f, i] = u
            hard[i] = u
            _sc_propagate(i, n, N, hard)
    return u_hats


@njit(cache=True)
def _take_survivors(cand_metric, P2, L, taken):
    """Mark the min(L, P2) candidates with smallest (metric, index); return count."""
    nsurv = L if L < P2 else P2
    for c in range(P2):
        taken[c] = 0
    for _ in range(nsurv):
        best = -1
        for c in range(P2):
            if taken[c] == 1:
                continue
            if best < 0 or cand_metric[c] < cand_metric[best]:
                best = c
        taken[best] = 1
    return nsurv


@njit(cache=True)
def _plan_slots(taken, P, nslots, plan_src, plan_val, plan_copy, pend, used):
    """Assign surviving children to path slots.

    Child (parent p, value v) has candidate index 2p+v. Value-0 children stay
    in the parent slot; value-1 children stay only if the sibling died, and
    otherwise move to the lowest free slot (parents in ascending order).
    """
    for q in range(nslots):
        used[q] = 0
    pcnt = 0
    for p in range(P):
        h0 = taken[2 * p]
        h1 = taken[2 * p + 1]
        if h0 == 1:
            plan_src[p] = p
            plan_val[p] = 0
            plan_copy[p] = 0
            used[p] = 1
            if h1 == 1:
                pend[pcnt] = p
                pcnt += 1
        elif h1 == 1:
            plan_src[p] = p
            plan_val[p] = 1
            plan_copy[p] = 0
            used[p] = 1
    q = 0
    for t in range(pcnt):
        while used[q] == 1:
            q += 1
        plan_src[q] = pend[t]
        plan_val[q] = 1
        plan_copy[q] = 1
        used[q] = 1


@njit(cache=True)
def scl_decode_batch(llrs, frozen, L, n):
    """LLR path-metric SCL decode of a batch; returns winning message estimates.

    Penalty |l| accrues whenever a path's bit value contradicts its LLR sign;
    survivor ties break on (parent index, bit value 0); the winner is the
    smallest (metric, slot).
    """
    F = llrs.shape[0]
    N = llrs.shape[1]
    u_hats = np.empty((F, N), dtype=np.int8)

    llr_w = np.empty((L, max(N - 1, 1)), dtype=np.float64)
    hard = np.empty((L, (n + 1) * N), dtype=np.int8)
    metric = np.empty(L, dtype=np.float64)
    cand_metric = np.empty(2 * L, dtype=np.float64)
    taken = np.empty(2 * L, dtype=np.uint8)
    plan_src = np.empty(L, dtype=np.int64)
    plan_val = np.empty(L, dtype=np.int8)
    plan_copy = np.empty(L, dtype=np.uint8)
    pend = np.empty(L, dtype=np.int64)
    used = np.empty(L, dtype=np.uint8)
    path_llr = np.empty(L, dtype=np.float64)

    for f in range(F):
        y = llrs[f]
        P = 1
        metric[0] = 0.0
        for i in range(N):
            for p in range(P):
                path_llr[p] = _sc_llr_pass(y, i, n, N, llr_w[p], hard[p])
            if frozen[i] == 1:
                for p in range(P):
                    if path_llr[p] < 0.0:
                        metric[p] += -path_llr[p]
                    hard[p, i] = 0
                    _sc_propagate(i, n, N, hard[p])
            else:
                for p in range(P):
                    lp = path_llr[p]
                    hp = 0 if lp >= 0.0 else 1
                    cand_metric[2 * p + hp] = metric[p]
                    cand_metric[2 * p + 1 - hp] = metric[p] + abs(lp)
                nsurv = _take_survivors(cand_metric, 2 * P, L, taken)
                _plan_slots(taken, P, nsurv, plan_src, plan_val, plan_copy, pend, used)
                for q in range(nsurv):
                    if plan_copy[q] == 1:
                        src = plan_src[q]
                        for t in range(N - 1):
                            llr_w[q, t] = llr_w[src, t]
                        for t in range((n + 1) * N):
                            hard[q, t] = hard[src, t]
                for q in range(nsurv):
                    metric[q] = cand_metric[2 * plan_src[q] + plan_val[q]]
                for q in range(nsurv):
                    hard[q, i] = plan_val[q]
                    _sc_propagate(i, n, N, hard[q])
                P = nsurv
        best = 0
        for p in range(1, P):
            if metric[p] < metric[best]:
                best = p
        for j in range(N):
            u_hats[f, j] = hard[best, j]
    return u_hats


@njit(cache=True)
def targeted_pass(y, i, n, N, llr_w, wbase, hard):
    """Right-to-left LLR traversal for bit i over the current estimate x.

    g nodes take their partial sum from the stage-(k+1) hard values
    (x_upper ^ x_lower), so no decision feedback is needed. A stage window
    whose base already matches the target is reused without recomputation:
    a window's g inputs are implied-message values strictly below the target
    that positioned it, and refinements never alter positions below their
    own target, so matching windows are never stale. Returns (LLR of bit i,
    bitmask of stage levels recomputed).
    """
    if n == 0:
        return y[i], 0
    levels = 0
    for k in range(n - 1, -1, -1):
        half = 1 << k
        off = half - 1
        offp = (half << 1) - 1
        base = (i >> k) << k
        blk = (i >> (k + 1)) << (k + 1)
        if wbase[k] != base:
            chan = k == n - 1
            if (i >> k) & 1 == 0:  # f
                for m in range(half):
                    a = y[blk + m] if chan else llr_w[offp + m]
                    b = y[blk + half + m] if chan else llr_w[offp + half + m]
                    s = min(abs(a), abs(b))
                    llr_w[off + m] = -s if (a < 0.0) != (b < 0.0) else s
            else:  # g, partial sum from the stage k+1 hard values
                for m in range(half):
                    a = y[blk + m] if chan else llr_w[offp + m]
                    b = y[blk + half + m] if chan else llr_w[offp + half + m]
                    ps = hard[(k + 1) * N + blk + m] ^ hard[(k + 1) * N + blk + half + m]
                    llr_w[off + m] = b + a if ps == 0 else b - a
            wbase[k] = base
            levels |= 1 << k
    return llr_w[0], levels


@njit(cache=True)
def build_error_vector(y, i, n, N, llr_w, e_rows):
    """Left-to-right retrace for target bit i; fills e_rows with flip rows.

    At f stages the trace follows the input of smaller |LLR| (ties take the
    bit-k-clear row); at g stages it follows both inputs. Requires the stage
    windows for target i to be current (a completed targeted_pass). Returns
    the number of channel rows to flip (= 2^popcount(i)).
    """
    cnt = 1
    e_rows[0] = i
    for k in range(n):
        half = 1 << k
        offp = (half << 1) - 1
        mask = (half << 1) - 1
        chan = k + 1 == n
        if (i >> k) & 1 == 0:  # f: follow the weaker input
            for t in range(cnt):
                j0 = e_rows[t]
                j1 = j0 | half
                a = abs(y[j0]) if chan else abs(llr_w[offp + (j0 & mask)])
                b = abs(y[j1]) if chan else abs(llr_w[offp + (j1 & mask)])
                e_rows[t] = j0 if a <= b else j1
        else:  # g: follow both inputs
            for t in range(cnt):
                e_rows[cnt + t] = e_rows[t] ^ half
            cnt <<= 1
    return cnt


@njit(cache=True)
def apply_refine(x, e_rows, cnt, hard, n, N):
    """Flip e's rows into x and rebuild the hard stages.

    Cached LLR windows stay untouched: their values only depend on
    implied-message positions below the target that positioned them, which
    a refinement never changes (window reuse is gated by base matching in
    targeted_pass).
    """
    for t in range(cnt):
        x[e_rows[t]] ^= 1
    compute_hard_stages(x, hard, n, N)


@njit(cache=True)
def ssc_decode_batch(llrs, frozen, n):
    """Successive syndrome-check decode (SC based) of a batch of LLR frames.

    Returns (u_hats, rounds, steps_full, steps_memo, ok). steps_full charges n
    levels per refinement round; steps_memo counts only recomputed levels.
    ok=0 flags a violated progress/round guard (convention bug defense).
    """
    F = llrs.shape[0]
    N = llrs.shape[1]
    u_hats = np.empty((F, N), dtype=np.int8)
    rounds_out = np.zeros(F, dtype=np.int64)
    full_out = np.zeros(F, dtype=np.int64)
    memo_out = np.zeros(F, dtype=np.int64)
    ok_out = np.ones(F, dtype=np.uint8)

    x = np.empty(N, dtype=np.int8)
    hard = np.empty((n + 1) * N, dtype=np.int8)
    llr_w = np.empty(max(N - 1, 1), dtype=np.float64)
    wbase = np.empty(max(n, 1), dtype=np.int64)
    e_rows = np.empty(N, dtype=np.int64)

    for f in range(F):
        y = llrs[f]
        harden_into(y, x)
        compute_hard_stages(x, hard, n, N)
        for k in range(n):
            wbase[k] = -1
        rounds = 0
        memo = 0
        last_i = -1
        ok = 1
        while True:
            i = -1
            for j in range(last_i + 1, N):
                if frozen[j] == 1 and hard[j] == 1:
                    i = j
                    break
            if i < 0:
                break
            if rounds >= N or i <= last_i:
                ok = 0
                break
            _, lv = targeted_pass(y, i, n, N, llr_w, wbase, hard)
            memo += _popcount(lv)
            cnt = build_error_vector(y, i, n, N, llr_w, e_rows)
            apply_refine(x, e_rows, cnt, hard, n, N)
            rounds += 1
            last_i = i
        for j in range(N):
            u_hats[f, j] = hard[j]
        rounds_out[f] = rounds
        full_out[f] = n * rounds
        memo_out[f] = memo
        ok_out[f] = ok
    return u_hats, rounds_out, full_out, memo_out, ok_out


@njit(cache=True)
def ssc_list_decode_batch(llrs, frozen, L, n):
    """Syndrome-check list decode of a batch of LLR frames.

    Walks bit indices in order; info bits fork every path into a keeper
    (implied value, +0) and a refinement (flipped value, +|llr|), pruned to
    the L best like SCL. A round ends at the first frozen bit where any live
    path is violated; the decoder stops once the best path's syndrome is
    clear. Returns (u_hats, rounds, steps_full, steps_memo, ok); each counter
    includes one step per fork-and-prune event.
    """
    F = llrs.shape[0]
    N = llrs.shape[1]
    u_hats = np.empty((F, N), dtype=np.int8)
    rounds_out = np.zeros(F, dtype=np.int64)
    full_out = np.zeros(F, dtype=np.int64)
    memo_out = np.zeros(F, dtype=np.int64)
    ok_out = np.ones(F, dtype=np.uint8)

    xs = np.empty((L, N), dtype=np.int8)
    hard = np.empty((L, (n + 1) * N), dtype=np.int8)
    llr_w = np.empty((L, max(N - 1, 1)), dtype=np.float64)
    wbase = np.empty((L, max(n, 1)), dtype=np.int64)
    metric = np.empty(L, dtype=np.float64)
    path_llr = np.empty(L, dtype=np.float64)
    imp = np.empty(L, dtype=np.int8)
    cand_metric = np.empty(2 * L, dtype=np.float64)
    taken = np.empty(2 * L, dtype=np.uint8)
    plan_src = np.empty(L, dtype=np.int64)
    plan_val = np.empty(L, dtype=np.int8)
    plan_copy = np.empty(L, dtype=np.uint8)
    pend = np.empty(L, dtype=np.int64)
    used = np.empty(L, dtype=np.uint8)
    e_rows = np.empty(N, dtype=np.int64)

    for f in range(F):
        y = llrs[f]
        P = 1
        harden_into(y, xs[0])
        compute_hard_stages(xs[0], hard[0], n, N)
        for k in range(n):
            wbase[0, k] = -1
        metric[0] = 0.0
        rounds = 0
        full = 0
        memo = 0
        processed = -1
        ok = 1
        while True:
            best = 0
            for p in range(1, P):
                if metric[p] < metric[best]:
                    best = p
            clean = True
            for j in range(N):
                if frozen[j] == 1 and hard[best, j] == 1:
                    clean = False
                    break
            if clean:
                break
            if rounds >= N * L:
                ok = 0
                break
            # one round: walk forward until a violated frozen bit is settled
            pos = processed
            while pos < N - 1:
                pos += 1
                if frozen[pos] == 1:
                    lv_union = 0
                    any_viol = False
                    for p in range(P):
                        if hard[p, pos] == 1:
                            any_viol = True
                            lp, lv = targeted_pass(
                                y, pos, n, N, llr_w[p], wbase[p], hard[p]
                            )
                            lv_union |= lv
                            metric[p] += abs(lp)
                            cnt = build_error_vector(y, pos, n, N, llr_w[p], e_rows)
                            apply_refine(xs[p], e_rows, cnt, hard[p], n, N)
                    if any_viol:
                        memo += _popcount(lv_union)
                        full += n
                        break  # round settled at this frozen bit
                else:
                    lv_union = 0
                    for p in range(P):
                        lp, lv = targeted_pass(
                            y, pos, n, N, llr_w[p], wbase[p], hard[p]
                        )
                        path_llr[p] = lp
                        lv_union |= lv
                        imp[p] = hard[p, pos]
                    memo += _popcount(lv_union) + 1
                    full += n + 1
                    for p in range(P):
                        v = imp[p]
                        cand_metric[2 * p + v] = metric[p]
                        cand_metric[2 * p + 1 - v] = metric[p] + abs(path_llr[p])
                    nsurv = _take_survivors(cand_metric, 2 * P, L, taken)
                    _plan_slots(
                        taken, P, nsurv, plan_src, plan_val, plan_copy, pend, used
                    )
                    for q in range(nsurv):
                        if plan_copy[q] == 1:
                            src = plan_src[q]
                            for t in range(N):
                                xs[q, t] = xs[src, t]
                            for t in range((n + 1) * N):
                                hard[q, t] = hard[src, t]
                            for t in range(N - 1):
                                llr_w[q, t] = llr_w[src, t]
                            for k in range(n):
                                wbase[q, k] = wbase[src, k]
                    for q in range(nsurv):
                        src = plan_src[q]
                        metric[q] = cand_metric[2 * src + plan_val[q]]
                        if plan_val[q] != imp[src]:
                            cnt = build_error_vector(y, pos, n, N, llr_w[q], e_rows)
                            apply_refine(xs[q], e_rows, cnt, hard[q], n, N)
                    P = nsurv
            processed = pos
            rounds += 1
        best = 0
        for p in range(1, P):
            if metric[p] < metric[best]:
                best = p
        for j in range(N):
            u_hats[f, j] = hard[best, j]
        rounds_out[f] = rounds
        full_out[f] = full
        memo_out[f] = memo
        ok_out[f] = ok
    return u_hats, rounds_out, full_out, memo_out, ok_out
