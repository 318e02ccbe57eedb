"""Compiled kernels for sparse rank computation over prime fields.

Right-looking sparse Gaussian elimination with Markowitz-style pivot
selection (minimum (row_nnz-1)*(col_count-1) over a bounded, deterministic
candidate scan), switching to a dense echelon finish when the active
submatrix is small or has filled in.  All arithmetic is int64 modulo a
word-sized prime; all data structures evolve deterministically, so the
same input always takes the same pivot sequence.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# bucket index for columns with count >= _MAXB is capped at _MAXB
_MAXB = 64


@njit(cache=True, nogil=True)
def _powmod(a, e, p):
    r = 1
    a %= p
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


@njit(cache=True, nogil=True)
def _bsearch(arr, lo, hi, key):
    # first position in arr[lo:hi] with arr[pos] >= key
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, nogil=True)
def _dense_rank(rows_ptr, rows_len, row_alive, pool_col, pool_val,
                nrows, ncols, p, col_cnt, col_alive, rank_needed):
    """Echelon finish on the active submatrix; returns its rank.

    Streams the surviving rows one at a time against a dense echelon of
    the active columns; stops early once the echelon saturates.
    """
    # map active nonzero-count columns to 0..C-1 (ascending)
    colmap = np.full(ncols, -1, np.int64)
    C = 0
    for c in range(ncols):
        if col_alive[c] and col_cnt[c] > 0:
            colmap[c] = C
            C += 1
    if C == 0:
        return 0
    ech = np.zeros((C, C), np.int32)
    ech_pivrow = np.full(C, -1, np.int64)
    nech = 0
    vec = np.zeros(C, np.int64)
    cap = rank_needed if rank_needed < C else C
    for r in range(nrows):
        if nech >= cap:
            break
        if not row_alive[r] or rows_len[r] == 0:
            continue
        ptr = rows_ptr[r]
        ln = rows_len[r]
        lo = C
        for t in range(ptr, ptr + ln):
            j = colmap[pool_col[t]]
            vec[j] = pool_val[t]
            if j < lo:
                lo = j
        for j in range(lo, C):
            v = vec[j]
            if v == 0:
                continue
            e = ech_pivrow[j]
            if e >= 0:
                # echelon rows are normalized: pivot value 1
                for k in range(j, C):
                    w = ech[e, k]
                    if w != 0:
                        vec[k] = (vec[k] - v * w) % p
            else:
                inv = _powmod(v, p - 2, p)
                for k in range(j, C):
                    ech[nech, k] = (vec[k] * inv) % p
                    vec[k] = 0
                ech_pivrow[j] = nech
                nech += 1
                break
        for k in range(lo, C):
            vec[k] = 0
    return nech


@njit(cache=True, nogil=True)
def _rank_csr_mod_p(indptr, indices, data, nrows, ncols, p,
                    dense_cols, dense_density, dense_max_cols, scan_limit):
    """Rank over F_p of a CSR matrix with sorted column indices."""
    nnz0 = indptr[nrows]

    # --- load rows into the pool, reducing mod p and dropping zeros
    cap = 2 * nnz0 + 16
    pool_col = np.empty(cap, np.int32)
    pool_val = np.empty(cap, np.int64)
    rows_ptr = np.zeros(nrows, np.int64)
    rows_len = np.zeros(nrows, np.int64)
    row_alive = np.zeros(nrows, np.bool_)
    col_cnt = np.zeros(ncols, np.int64)
    pool_n = 0
    live_nnz = 0
    active_rows = 0
    for r in range(nrows):
        rows_ptr[r] = pool_n
        ln = 0
        for t in range(indptr[r], indptr[r + 1]):
            v = data[t] % p
            if v != 0:
                pool_col[pool_n] = indices[t]
                pool_val[pool_n] = v
                pool_n += 1
                ln += 1
        rows_len[r] = ln
        if ln > 0:
            row_alive[r] = True
            active_rows += 1
            for t in range(rows_ptr[r], rows_ptr[r] + ln):
                col_cnt[pool_col[t]] += 1
            live_nnz += ln
    col_alive = np.ones(ncols, np.bool_)
    active_cols = 0
    for c in range(ncols):
        if col_cnt[c] > 0:
            active_cols += 1

    # --- column -> rows adjacency (lazy linked lists, stale entries skipped)
    acap = 2 * nnz0 + 16
    adj_row = np.empty(acap, np.int64)
    adj_next = np.empty(acap, np.int64)
    adj_head = np.full(ncols, -1, np.int64)
    adj_n = 0
    for r in range(nrows):
        if row_alive[r]:
            for t in range(rows_ptr[r], rows_ptr[r] + rows_len[r]):
                c = pool_col[t]
                adj_row[adj_n] = r
                adj_next[adj_n] = adj_head[c]
                adj_head[c] = adj_n
                adj_n += 1

    # --- count buckets (lazy; stale entries dropped on scan)
    bcap = 4 * nnz0 + 16
    bk_col = np.empty(bcap, np.int64)
    bk_next = np.empty(bcap, np.int64)
    bk_head = np.full(_MAXB + 1, -1, np.int64)
    bk_n = 0
    for c in range(ncols):
        if col_cnt[c] > 0:
            b = col_cnt[c] if col_cnt[c] < _MAXB else _MAXB
            bk_col[bk_n] = c
            bk_next[bk_n] = bk_head[b]
            bk_head[b] = bk_n
            bk_n += 1

    seen_stamp = np.zeros(ncols, np.int64)
    touched = np.zeros(nrows, np.int64)
    step = 0
    rank = 0

    while True:
        if active_rows == 0 or active_cols == 0:
            return rank
        # dense switch test
        if active_cols <= dense_cols or (
                active_cols <= dense_max_cols
                and live_nnz * 5 > active_rows * active_cols):
            needed = active_rows if active_rows < active_cols else active_cols
            return rank + _dense_rank(rows_ptr, rows_len, row_alive,
                                      pool_col, pool_val, nrows, ncols, p,
                                      col_cnt, col_alive, needed)
        step += 1

        # --- pick pivot: scan the two lowest nonempty buckets
        best_cost = -1
        best_col = -1
        best_row = -1
        best_val = 0
        buckets_seen = 0
        for b in range(1, _MAXB + 1):
            # drop stale entries from the head, then walk the chain
            e = bk_head[b]
            prev = -1
            cand = 0
            while e >= 0:
                c = bk_col[e]
                nxt = bk_next[e]
                cb = col_cnt[c] if col_cnt[c] < _MAXB else _MAXB
                if (not col_alive[c]) or cb != b or seen_stamp[c] == step:
                    # stale or duplicate: unlink permanently
                    if prev < 0:
                        bk_head[b] = nxt
                    else:
                        bk_next[prev] = nxt
                    e = nxt
                    continue
                seen_stamp[c] = step
                cand += 1
                # best row in this column: min (len, row index)
                cnt = col_cnt[c]
                rbest = -1
                rlen = 0
                ae = adj_head[c]
                aprev = -1
                while ae >= 0:
                    rr = adj_row[ae]
                    anxt = adj_next[ae]
                    ok = False
                    if row_alive[rr]:
                        ptr = rows_ptr[rr]
                        pos = _bsearch(pool_col, ptr, ptr + rows_len[rr], c)
                        if pos < ptr + rows_len[rr] and pool_col[pos] == c:
                            ok = True
                    if not ok:
                        if aprev < 0:
                            adj_head[c] = anxt
                        else:
                            adj_next[aprev] = anxt
                        ae = anxt
                        continue
                    if rbest < 0 or rows_len[rr] < rlen or (
                            rows_len[rr] == rlen and rr < rbest):
                        rbest = rr
                        rlen = rows_len[rr]
                    aprev = ae
                    ae = anxt
                if rbest >= 0:
                    cost = (rlen - 1) * (cnt - 1)
                    if (best_cost < 0 or cost < best_cost or
                            (cost == best_cost and c < best_col)):
                        best_cost = cost
                        best_col = c
                        best_row = rbest
                prev = e
                e = nxt
                if cand >= scan_limit:
                    break
            if cand > 0:
                buckets_seen += 1
                if buckets_seen >= 2 or best_cost == 0:
                    break
        if best_col < 0:
            # no usable pivot; only zero-count columns remain
            return rank

        # --- eliminate best_col from every other row containing it
        pc = best_col
        pr = best_row
        pptr = rows_ptr[pr]
        plen = rows_len[pr]
        pos = _bsearch(pool_col, pptr, pptr + plen, pc)
        pval = pool_val[pos]
        pinv = _powmod(pval, p - 2, p)

        ae = adj_head[pc]
        aprev = -1
        while ae >= 0:
            rr = adj_row[ae]
            anxt = adj_next[ae]
            if rr == pr or not row_alive[rr] or touched[rr] == step:
                if rr != pr and not row_alive[rr]:
                    if aprev < 0:
                        adj_head[pc] = anxt
                    else:
                        adj_next[aprev] = anxt
                    ae = anxt
                    continue
                aprev = ae
                ae = anxt
                continue
            ptr = rows_ptr[rr]
            ln = rows_len[rr]
            pos = _bsearch(pool_col, ptr, ptr + ln, pc)
            if pos >= ptr + ln or pool_col[pos] != pc:
                # stale: row no longer contains the pivot column
                if aprev < 0:
                    adj_head[pc] = anxt
                else:
                    adj_next[aprev] = anxt
                ae = anxt
                continue
            touched[rr] = step
            g = (pool_val[pos] * pinv) % p

            # ensure pool capacity for the merged row
            need = ln + plen
            if pool_n + need > cap:
                # compact live rows; grow if still tight
                new_cap = cap
                live = 0
                for r2 in range(nrows):
                    if row_alive[r2]:
                        live += rows_len[r2]
                while live + need > new_cap // 2:
                    new_cap *= 2
                ncol_arr = np.empty(new_cap, np.int32)
                nval_arr = np.empty(new_cap, np.int64)
                pn = 0
                for r2 in range(nrows):
                    if row_alive[r2]:
                        op = rows_ptr[r2]
                        ol = rows_len[r2]
                        rows_ptr[r2] = pn
                        for t in range(op, op + ol):
                            ncol_arr[pn] = pool_col[t]
                            nval_arr[pn] = pool_val[t]
                            pn += 1
                pool_col = ncol_arr
                pool_val = nval_arr
                pool_n = pn
                cap = new_cap
                ptr = rows_ptr[rr]
                pptr = rows_ptr[pr]

            # merge rr <- rr - g*pivot
            out = pool_n
            i = ptr
            j = pptr
            iend = ptr + ln
            jend = pptr + plen
            newlen = 0
            while i < iend or j < jend:
                if j >= jend or (i < iend and pool_col[i] < pool_col[j]):
                    pool_col[out] = pool_col[i]
                    pool_val[out] = pool_val[i]
                    out += 1
                    newlen += 1
                    i += 1
                elif i >= iend or pool_col[j] < pool_col[i]:
                    c2 = pool_col[j]
                    v2 = (-g * pool_val[j]) % p
                    # v2 != 0 since g, pivot value nonzero mod prime p
                    pool_col[out] = c2
                    pool_val[out] = v2
                    out += 1
                    newlen += 1
                    # column gains a row
                    oldc = col_cnt[c2]
                    col_cnt[c2] = oldc + 1
                    live_nnz += 1
                    if oldc == 0:
                        active_cols += 1
                    ob = oldc if oldc < _MAXB else _MAXB
                    nb = oldc + 1 if oldc + 1 < _MAXB else _MAXB
                    if ob != nb:
                        if bk_n >= bcap:
                            bcap *= 2
                            t1 = np.empty(bcap, np.int64)
                            t2 = np.empty(bcap, np.int64)
                            t1[:bk_n] = bk_col[:bk_n]
                            t2[:bk_n] = bk_next[:bk_n]
                            bk_col = t1
                            bk_next = t2
                        bk_col[bk_n] = c2
                        bk_next[bk_n] = bk_head[nb]
                        bk_head[nb] = bk_n
                        bk_n += 1
                    if adj_n >= acap:
                        acap *= 2
                        t1 = np.empty(acap, np.int64)
                        t2 = np.empty(acap, np.int64)
                        t1[:adj_n] = adj_row[:adj_n]
                        t2[:adj_n] = adj_next[:adj_n]
                        adj_row = t1
                        adj_next = t2
                    adj_row[adj_n] = rr
                    adj_next[adj_n] = adj_head[c2]
                    adj_head[c2] = adj_n
                    adj_n += 1
                    j += 1
                else:
                    c2 = pool_col[i]
                    v2 = (pool_val[i] - g * pool_val[j]) % p
                    if v2 != 0:
                        pool_col[out] = c2
                        pool_val[out] = v2
                        out += 1
                        newlen += 1
                    else:
                        # column loses this row
                        oldc = col_cnt[c2]
                        col_cnt[c2] = oldc - 1
                        live_nnz -= 1
                        if oldc == 1:
                            active_cols -= 1
                        ob = oldc if oldc < _MAXB else _MAXB
                        nb = oldc - 1 if oldc - 1 < _MAXB else _MAXB
                        if ob != nb and oldc - 1 > 0:
                            if bk_n >= bcap:
                                bcap *= 2
                                t1 = np.empty(bcap, np.int64)
                                t2 = np.empty(bcap, np.int64)
                                t1[:bk_n] = bk_col[:bk_n]
                                t2[:bk_n] = bk_next[:bk_n]
                                bk_col = t1
                                bk_next = t2
                            bk_col[bk_n] = c2
                            bk_next[bk_n] = bk_head[nb]
                            bk_head[nb] = bk_n
                            bk_n += 1
                    i += 1
                    j += 1
            pool_n = out
            rows_ptr[rr] = out - newlen
            rows_len[rr] = newlen
            if newlen == 0:
                row_alive[rr] = False
                active_rows -= 1
            aprev = ae
            ae = anxt

        # retire the pivot row and column
        rank += 1
        row_alive[pr] = False
        active_rows -= 1
        col_alive[pc] = False
        col_cnt[pc] = 0
        active_cols -= 1
        for t in range(rows_ptr[pr], rows_ptr[pr] + rows_len[pr]):
            c2 = pool_col[t]
            if c2 == pc:
                live_nnz -= 1
                continue
            oldc = col_cnt[c2]
            col_cnt[c2] = oldc - 1
            live_nnz -= 1
            if oldc == 1:
                active_cols -= 1
            ob = oldc if oldc < _MAXB else _MAXB
            nb = oldc - 1 if oldc - 1 < _MAXB else _MAXB
            if ob != nb and oldc - 1 > 0:
                if bk_n >= bcap:
                    bcap *= 2
                    t1 = np.empty(bcap, np.int64)
                    t2 = np.empty(bcap, np.int64)
                    t1[:bk_n] = bk_col[:bk_n]
                    t2[:bk_n] = bk_next[:bk_n]
                    bk_col = t1
                    bk_next = t2
                bk_col[bk_n] = c2
                bk_next[bk_n] = bk_head[nb]
                bk_head[nb] = bk_n
                bk_n += 1
