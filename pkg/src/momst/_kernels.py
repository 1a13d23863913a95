"""Compiled inner loops.

Everything here works on 0-based node ids and plain numpy arrays; the public
modules wrap these with typed objects. Random numbers are drawn from a
``numpy.random.Generator`` passed in by the caller, so the stream is the same
whether a kernel is called once from Python or in a batch.
"""

import numpy as np
from numba import njit

OP_UNIFORM = 0
OP_EX1 = 1
OP_BEX1 = 2
OP_SG = 3
OP_SGS = 4
OP_USG = 5
OP_USGS = 6

# runs of tied scalar weights longer than this are re-sorted instead of insertion-sorted
_TIE_RUN_SORT = 16


# --------------------------------------------------------------------------
# union-find
# --------------------------------------------------------------------------

@njit(cache=True)
def uf_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def uf_union(parent, rank, a, b):
    ra = uf_find(parent, a)
    rb = uf_find(parent, b)
    if ra == rb:
        return False
    if rank[ra] < rank[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    if rank[ra] == rank[rb]:
        rank[ra] += 1
    return True


# --------------------------------------------------------------------------
# scalarised ordering and Kruskal
# --------------------------------------------------------------------------

@njit(cache=True)
def scalar_order(idx, c1, c2, lam):
    """Sort edge ids ``idx`` (ascending) by (w, mirrored w, edge id).

    ``w = lam*c1 + (1-lam)*c2``; the mirrored weight swaps the roles of the
    objectives so that exact ties at lam in {0, 1} resolve lexicographically.
    """
    k = idx.shape[0]
    w = np.empty(k)
    w2 = np.empty(k)
    mu = 1.0 - lam
    for i in range(k):
        e = idx[i]
        w[i] = lam * c1[e] + mu * c2[e]
        w2[i] = mu * c1[e] + lam * c2[e]
    order = np.argsort(w, kind="mergesort")
    i = 0
    while i < k:
        j = i + 1
        wi = w[order[i]]
        while j < k and w[order[j]] == wi:
            j += 1
        run = j - i
        if run > _TIE_RUN_SORT:
            seg = order[i:j].copy()
            sub = np.argsort(w2[seg], kind="mergesort")
            for a in range(run):
                order[i + a] = seg[sub[a]]
        elif run > 1:
            for a in range(i + 1, j):
                cur = order[a]
                b = a - 1
                while b >= i and w2[order[b]] > w2[cur]:
                    order[b + 1] = order[b]
                    b -= 1
                order[b + 1] = cur
        i = j
    out = np.empty(k, np.int64)
    for i in range(k):
        out[i] = idx[order[i]]
    return out


@njit(cache=True)
def kruskal_extend(order, eu, ev, parent, rank, out, pos, need):
    """Scan ``order`` and append up to ``need`` component-joining edges to ``out[pos:]``."""
    added = 0
    for t in range(order.shape[0]):
        if added == need:
            break
        e = order[t]
        if uf_union(parent, rank, eu[e], ev[e]):
            out[pos + added] = e
            added += 1
    return added


@njit(cache=True)
def kruskal_nodes(nodes, eid, eu, ev, c1, c2, lam):
    """MST of the sub-graph induced by ``nodes``; returns (edges, count)."""
    s = nodes.shape[0]
    n = eid.shape[0]
    local = np.full(n, -1, np.int64)
    for i in range(s):
        local[nodes[i]] = i
    cand = np.empty(s * (s - 1) // 2, np.int64)
    k = 0
    for i in range(s):
        for j in range(i + 1, s):
            e = eid[nodes[i], nodes[j]]
            if e >= 0:
                cand[k] = e
                k += 1
    cand = np.sort(cand[:k])
    order = scalar_order(cand, c1, c2, lam)
    parent = np.arange(s)
    rank = np.zeros(s, np.int64)
    out = np.empty(max(s - 1, 0), np.int64)
    added = 0
    for t in range(order.shape[0]):
        if added == s - 1:
            break
        e = order[t]
        if uf_union(parent, rank, local[eu[e]], local[ev[e]]):
            out[added] = e
            added += 1
    return np.sort(out[:added]), added


@njit(cache=True)
def kruskal_seeded(forest, n, eu, ev, c1, c2, lam, parent, rank):
    """Complete ``forest`` to a spanning tree; ``parent``/``rank`` already encode it."""
    m = eu.shape[0]
    out = np.empty(n - 1, np.int64)
    k = forest.shape[0]
    out[:k] = forest
    order = scalar_order(np.arange(m), c1, c2, lam)
    added = kruskal_extend(order, eu, ev, parent, rank, out, k, n - 1 - k)
    return np.sort(out[: k + added]), k + added


@njit(cache=True)
def sweep(n, eu, ev, c1, c2, lams):
    """Solve the scalarised MST for every lam; consecutive duplicates are skipped."""
    m = eu.shape[0]
    idx = np.arange(m)
    trees = np.empty((lams.shape[0], n - 1), np.int64)
    costs = np.empty((lams.shape[0], 2))
    kept = 0
    prev1 = -1.0
    prev2 = -1.0
    parent = np.empty(n, np.int64)
    rank = np.empty(n, np.int64)
    for li in range(lams.shape[0]):
        for v in range(n):
            parent[v] = v
            rank[v] = 0
        order = scalar_order(idx, c1, c2, lams[li])
        row = trees[kept]
        kruskal_extend(order, eu, ev, parent, rank, row, 0, n - 1)
        a = 0.0
        b = 0.0
        for t in range(n - 1):
            a += c1[row[t]]
            b += c2[row[t]]
        if a == prev1 and b == prev2:
            continue
        row.sort()
        costs[kept, 0] = a
        costs[kept, 1] = b
        prev1 = a
        prev2 = b
        kept += 1
    return trees[:kept], costs[:kept]


@njit(cache=True)
def prim_nodes(nodes, eid, c1, c2, lam):
    """Dense Prim on the sub-graph induced by ``nodes``; stops early if it is disconnected."""
    s = nodes.shape[0]
    mu = 1.0 - lam
    in_tree = np.zeros(s, np.bool_)
    best_w = np.full(s, np.inf)
    best_w2 = np.full(s, np.inf)
    best_e = np.full(s, -1, np.int64)
    out = np.empty(max(s - 1, 0), np.int64)
    in_tree[0] = True
    for j in range(1, s):
        e = eid[nodes[0], nodes[j]]
        if e < 0:
            continue
        best_w[j] = lam * c1[e] + mu * c2[e]
        best_w2[j] = mu * c1[e] + lam * c2[e]
        best_e[j] = e
    for t in range(s - 1):
        pick = -1
        for j in range(s):
            if in_tree[j]:
                continue
            if pick < 0:
                pick = j
                continue
            if best_w[j] < best_w[pick] or (
                best_w[j] == best_w[pick]
                and (best_w2[j] < best_w2[pick]
                     or (best_w2[j] == best_w2[pick] and best_e[j] < best_e[pick]))
            ):
                pick = j
        if best_e[pick] < 0:
            return np.sort(out[:t])
        in_tree[pick] = True
        out[t] = best_e[pick]
        for j in range(s):
            if in_tree[j]:
                continue
            e = eid[nodes[pick], nodes[j]]
            if e < 0:
                continue
            w = lam * c1[e] + mu * c2[e]
            w2 = mu * c1[e] + lam * c2[e]
            if w < best_w[j] or (w == best_w[j] and (w2 < best_w2[j] or (w2 == best_w2[j] and e < best_e[j]))):
                best_w[j] = w
                best_w2[j] = w2
                best_e[j] = e
    return np.sort(out)


# --------------------------------------------------------------------------
# tree helpers
# --------------------------------------------------------------------------

@njit(cache=True)
def tree_adjacency(tree, eu, ev, n):
    """CSR adjacency (ptr, neighbour, edge id) of a tree, in tree-edge order."""
    ptr = np.zeros(n + 1, np.int64)
    for t in range(tree.shape[0]):
        e = tree[t]
        ptr[eu[e] + 1] += 1
        ptr[ev[e] + 1] += 1
    for v in range(n):
        ptr[v + 1] += ptr[v]
    fill = ptr[:-1].copy()
    nbr = np.empty(2 * tree.shape[0], np.int64)
    teid = np.empty(2 * tree.shape[0], np.int64)
    for t in range(tree.shape[0]):
        e = tree[t]
        a = eu[e]
        b = ev[e]
        nbr[fill[a]] = b
        teid[fill[a]] = e
        fill[a] += 1
        nbr[fill[b]] = a
        teid[fill[b]] = e
        fill[b] += 1
    return ptr, nbr, teid


@njit(cache=True)
def is_spanning_tree(tree, eu, ev, n):
    if tree.shape[0] != n - 1:
        return False
    parent = np.arange(n)
    rank = np.zeros(n, np.int64)
    for t in range(tree.shape[0]):
        e = tree[t]
        if not uf_union(parent, rank, eu[e], ev[e]):
            return False
    return True


@njit(cache=True)
def bfs_limited(ptr, nbr, start, s, visited, nodes):
    """BFS on a tree from ``start`` that stops once ``s`` nodes are visited.

    ``visited[v]`` is set to (position in ``nodes``) + 1, so it doubles as the
    global-to-local node map. The caller resets it via ``nodes``.
    """
    visited[start] = 1
    nodes[0] = start
    cnt = 1
    if cnt == s:
        return cnt
    head = 0
    while head < cnt:
        v = nodes[head]
        head += 1
        for j in range(ptr[v], ptr[v + 1]):
            w = nbr[j]
            if visited[w] != 0:
                continue
            nodes[cnt] = w
            cnt += 1
            visited[w] = cnt
            if cnt == s:
                return cnt
    return cnt


@njit(cache=True)
def tree_cost(tree, c1, c2):
    a = 0.0
    b = 0.0
    for t in range(tree.shape[0]):
        a += c1[tree[t]]
        b += c2[tree[t]]
    return a, b


# --------------------------------------------------------------------------
# Pruefer codec (linear time)
# --------------------------------------------------------------------------

@njit(cache=True)
def prufer_encode(tree, eu, ev, n):
    ptr, nbr, _ = tree_adjacency(tree, eu, ev, n)
    parent = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    seen = np.zeros(n, np.bool_)
    top = 0
    stack[0] = n - 1
    seen[n - 1] = True
    top = 1
    while top > 0:
        top -= 1
        v = stack[top]
        for j in range(ptr[v], ptr[v + 1]):
            w = nbr[j]
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                stack[top] = w
                top += 1
    degree = np.empty(n, np.int64)
    for v in range(n):
        degree[v] = ptr[v + 1] - ptr[v]
    code = np.empty(max(n - 2, 0), np.int64)
    p = 0
    while degree[p] != 1:
        p += 1
    leaf = p
    for i in range(n - 2):
        nxt = parent[leaf]
        code[i] = nxt
        degree[nxt] -= 1
        if degree[nxt] == 1 and nxt < p:
            leaf = nxt
        else:
            p += 1
            while degree[p] != 1:
                p += 1
            leaf = p
    return code


@njit(cache=True)
def prufer_decode_pairs(code, n):
    degree = np.ones(n, np.int64)
    for x in code:
        degree[x] += 1
    pairs = np.empty((n - 1, 2), np.int64)
    p = 0
    while degree[p] != 1:
        p += 1
    leaf = p
    for i in range(code.shape[0]):
        v = code[i]
        pairs[i, 0] = leaf
        pairs[i, 1] = v
        degree[v] -= 1
        if degree[v] == 1 and v < p:
            leaf = v
        else:
            p += 1
            while degree[p] != 1:
                p += 1
            leaf = p
    pairs[n - 2, 0] = leaf
    pairs[n - 2, 1] = n - 1
    return pairs


@njit(cache=True)
def pairs_to_edges(pairs, eid):
    out = np.empty(pairs.shape[0], np.int64)
    for i in range(pairs.shape[0]):
        out[i] = eid[pairs[i, 0], pairs[i, 1]]
    return np.sort(out)


@njit(cache=True)
def all_prufer_trees(n, eid):
    """Every spanning tree of K_n as sorted edge-id rows (n**(n-2) rows)."""
    if n == 2:
        out = np.empty((1, 1), np.int64)
        out[0, 0] = eid[0, 1]
        return out
    total = n ** (n - 2)
    out = np.empty((total, n - 1), np.int64)
    code = np.zeros(n - 2, np.int64)
    for r in range(total):
        out[r] = pairs_to_edges(prufer_decode_pairs(code, n), eid)
        i = n - 3
        while i >= 0:
            code[i] += 1
            if code[i] < n:
                break
            code[i] = 0
            i -= 1
    return out


# --------------------------------------------------------------------------
# random spanning trees
# --------------------------------------------------------------------------

@njit(cache=True)
def broder(n, adj_ptr, adj_nbr, adj_eid, rng):
    """Random-walk (Aldous-Broder) spanning tree; graph must be connected."""
    out = np.empty(n - 1, np.int64)
    visited = np.zeros(n, np.bool_)
    cur = rng.integers(0, n)
    visited[cur] = True
    cnt = 1
    while cnt < n:
        d = adj_ptr[cur + 1] - adj_ptr[cur]
        j = adj_ptr[cur] + rng.integers(0, d)
        w = adj_nbr[j]
        if not visited[w]:
            visited[w] = True
            out[cnt - 1] = adj_eid[j]
            cnt += 1
        cur = w
    return np.sort(out)


# --------------------------------------------------------------------------
# mutation operators
# --------------------------------------------------------------------------

@njit(cache=True)
def sg_step(n, eu, ev, c1, c2, adj_ptr, adj_nbr, adj_eid, eid, tree, start, s, lam, visited, use_prim):
    """One sub-graph mutation with all random choices fixed."""
    ptr, nbr, _ = tree_adjacency(tree, eu, ev, n)
    nodes = np.empty(s, np.int64)
    cnt = bfs_limited(ptr, nbr, start, s, visited, nodes)
    nodes = nodes[:cnt]
    out = np.empty(n - 1, np.int64)
    k = 0
    for t in range(tree.shape[0]):
        e = tree[t]
        if visited[eu[e]] == 0 or visited[ev[e]] == 0:
            out[k] = e
            k += 1
    if use_prim:
        best = prim_nodes(nodes, eid, c1, c2, lam)
        for t in range(best.shape[0]):
            out[k] = best[t]
            k += 1
    else:
        cand = np.empty(cnt * (cnt - 1) // 2, np.int64)
        nc = 0
        for i in range(cnt):
            v = nodes[i]
            for j in range(adj_ptr[v], adj_ptr[v + 1]):
                w = adj_nbr[j]
                if v < w and visited[w] != 0:
                    cand[nc] = adj_eid[j]
                    nc += 1
        cand = np.sort(cand[:nc])
        order = scalar_order(cand, c1, c2, lam)
        parent = np.arange(cnt)
        rank = np.zeros(cnt, np.int64)
        added = 0
        for t in range(order.shape[0]):
            if added == cnt - 1:
                break
            e = order[t]
            if uf_union(parent, rank, visited[eu[e]] - 1, visited[ev[e]] - 1):
                out[k] = e
                k += 1
                added += 1
    for i in range(cnt):
        visited[nodes[i]] = 0
    return np.sort(out[:k]), nodes


@njit(cache=True)
def usg_step(n, eu, ev, c1, c2, tree, drop, lam):
    """One unconnected sub-graph mutation; ``drop[i]`` marks tree position i."""
    parent = np.arange(n)
    rank = np.zeros(n, np.int64)
    kept = np.empty(n - 1, np.int64)
    k = 0
    for t in range(tree.shape[0]):
        if not drop[t]:
            e = tree[t]
            uf_union(parent, rank, eu[e], ev[e])
            kept[k] = e
            k += 1
    out, _ = kruskal_seeded(kept[:k], n, eu, ev, c1, c2, lam, parent, rank)
    return out


@njit(cache=True)
def tree_path(n, eu, ev, tree, u, v):
    """Edge ids on the tree path from u to v, in walking order."""
    ptr, nbr, teid = tree_adjacency(tree, eu, ev, n)
    pred = np.full(n, -1, np.int64)
    pred_e = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    queue[0] = u
    pred[u] = u
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        if x == v:
            break
        for j in range(ptr[x], ptr[x + 1]):
            y = nbr[j]
            if pred[y] < 0:
                pred[y] = x
                pred_e[y] = teid[j]
                queue[tail] = y
                tail += 1
    path = np.empty(n - 1, np.int64)
    plen = 0
    x = v
    while x != u:
        path[plen] = pred_e[x]
        plen += 1
        x = pred[x]
    return path[:plen][::-1].copy()


@njit(cache=True)
def contains(tree, e):
    for t in range(tree.shape[0]):
        if tree[t] == e:
            return True
    return False


@njit(cache=True)
def exchange(tree, e_add, e_drop):
    out = tree.copy()
    for t in range(out.shape[0]):
        if out[t] == e_drop:
            out[t] = e_add
            break
    return np.sort(out)


@njit(cache=True)
def _round_half_up(lam):
    return 1.0 if lam >= 0.5 else 0.0


@njit(cache=True)
def mutate_one(op, n, eu, ev, c1, c2, adj_ptr, adj_nbr, adj_eid, eid, bias_cum,
               tree, sigma, s_min, force_s, use_prim, rng, visited):
    m = eu.shape[0]
    if op == OP_UNIFORM:
        code = prufer_encode(tree, eu, ev, n)
        pos = rng.integers(0, n - 2)
        code[pos] = rng.integers(0, n)
        return pairs_to_edges(prufer_decode_pairs(code, n), eid)
    if op == OP_EX1 or op == OP_BEX1:
        if op == OP_EX1:
            e = rng.integers(0, m)
        else:
            e = np.searchsorted(bias_cum, rng.random(), side="right")
            if e >= m:
                e = m - 1
        if contains(tree, e):
            return tree.copy()
        path = tree_path(n, eu, ev, tree, eu[e], ev[e])
        return exchange(tree, e, path[rng.integers(0, path.shape[0])])
    if op == OP_SG or op == OP_SGS:
        start = rng.integers(0, n)
        s = sigma if force_s else rng.integers(3, sigma + 1)
        lam = rng.random()
        if op == OP_SG:
            lam = _round_half_up(lam)
        res, _ = sg_step(n, eu, ev, c1, c2, adj_ptr, adj_nbr, adj_eid, eid, tree,
                         start, s, lam, visited, use_prim)
        return res
    # USG / USGS
    s = sigma if force_s else rng.integers(s_min, sigma + 1)
    pos = np.arange(n - 1)
    drop = np.zeros(n - 1, np.bool_)
    for i in range(s):
        j = i + rng.integers(0, n - 1 - i)
        tmp = pos[i]
        pos[i] = pos[j]
        pos[j] = tmp
        drop[pos[i]] = True
    lam = rng.random()
    if op == OP_USG:
        lam = _round_half_up(lam)
    return usg_step(n, eu, ev, c1, c2, tree, drop, lam)


@njit(cache=True)
def mutate_batch(op, n, eu, ev, c1, c2, adj_ptr, adj_nbr, adj_eid, eid, bias_cum,
                 parents, sigma, s_min, force_s, use_prim, rng, visited):
    k = parents.shape[0]
    out = np.empty((k, n - 1), np.int64)
    costs = np.empty((k, 2))
    for i in range(k):
        child = mutate_one(op, n, eu, ev, c1, c2, adj_ptr, adj_nbr, adj_eid, eid, bias_cum,
                           parents[i], sigma, s_min, force_s, use_prim, rng, visited)
        out[i] = child
        a, b = tree_cost(child, c1, c2)
        costs[i, 0] = a
        costs[i, 1] = b
    return out, costs


# --------------------------------------------------------------------------
# edge bias
# --------------------------------------------------------------------------

@njit(cache=True)
def domination_counts(c1, c2):
    """Number of edges whose cost vector dominates each edge (Fenwick sweep)."""
    m = c1.shape[0]
    order = np.argsort(c2, kind="mergesort")
    rank2 = np.empty(m, np.int64)
    r = 0
    for i in range(m):
        if i > 0 and c2[order[i]] != c2[order[i - 1]]:
            r += 1
        rank2[order[i]] = r + 1
    size = r + 2
    tree = np.zeros(size, np.int64)
    # sort by (c1, c2) and process equal-c1 groups together
    o1 = np.argsort(c2, kind="mergesort")
    o = o1[np.argsort(c1[o1], kind="mergesort")]
    counts = np.zeros(m, np.int64)
    i = 0
    while i < m:
        j = i
        while j < m and c1[o[j]] == c1[o[i]]:
            j += 1
        for t in range(i, j):
            x = rank2[o[t]]
            while x < size:
                tree[x] += 1
                x += x & (-x)
        for t in range(i, j):
            x = rank2[o[t]]
            acc = 0
            while x > 0:
                acc += tree[x]
                x -= x & (-x)
            counts[o[t]] = acc
        i = j
    # remove edges with an identical cost vector (they weakly but not strictly dominate)
    i = 0
    while i < m:
        j = i
        while j < m and c1[o[j]] == c1[o[i]] and c2[o[j]] == c2[o[i]]:
            j += 1
        for t in range(i, j):
            counts[o[t]] -= j - i
        i = j
    return counts


# --------------------------------------------------------------------------
# NSGA-II selection
# --------------------------------------------------------------------------

@njit(cache=True)
def nondominated_ranks(c):
    npts = c.shape[0]
    dom_count = np.zeros(npts, np.int64)
    dominated = np.zeros((npts, npts), np.bool_)
    for p in range(npts):
        for q in range(p + 1, npts):
            le = c[p, 0] <= c[q, 0] and c[p, 1] <= c[q, 1]
            ge = c[q, 0] <= c[p, 0] and c[q, 1] <= c[p, 1]
            if le and not ge:
                dominated[p, q] = True
                dom_count[q] += 1
            elif ge and not le:
                dominated[q, p] = True
                dom_count[p] += 1
    ranks = np.full(npts, -1, np.int64)
    current = np.empty(npts, np.int64)
    nxt = np.empty(npts, np.int64)
    nc = 0
    for p in range(npts):
        if dom_count[p] == 0:
            current[nc] = p
            nc += 1
            ranks[p] = 0
    level = 0
    while nc > 0:
        nn = 0
        for a in range(nc):
            p = current[a]
            for q in range(npts):
                if dominated[p, q]:
                    dom_count[q] -= 1
                    if dom_count[q] == 0:
                        ranks[q] = level + 1
                        nxt[nn] = q
                        nn += 1
        level += 1
        for a in range(nn):
            current[a] = nxt[a]
        nc = nn
    return ranks


@njit(cache=True)
def crowding(c, members):
    """Crowding distance of the mutually non-dominated points ``c[members]``.

    Identical cost vectors share one representative (the first occurrence);
    the copies get distance 0.
    """
    k = members.shape[0]
    dist = np.zeros(k)
    if k == 0:
        return dist
    o1 = np.argsort(c[members, 1], kind="mergesort")
    o = o1[np.argsort(c[members, 0][o1], kind="mergesort")]
    # first occurrence in input order represents a group of identical vectors
    rep = np.empty(k, np.int64)
    uniq = np.empty(k, np.int64)
    nu = 0
    i = 0
    while i < k:
        j = i
        first = o[i]
        while j < k and c[members[o[j]], 0] == c[members[o[i]], 0] and c[members[o[j]], 1] == c[members[o[i]], 1]:
            if o[j] < first:
                first = o[j]
            j += 1
        uniq[nu] = first
        nu += 1
        for t in range(i, j):
            rep[o[t]] = first
        i = j
    ud = np.zeros(nu)
    if nu <= 2:
        for t in range(nu):
            ud[t] = np.inf
    else:
        for obj in range(2):
            vals = np.empty(nu)
            for t in range(nu):
                vals[t] = c[members[uniq[t]], obj]
            so = np.argsort(vals, kind="mergesort")
            lo = vals[so[0]]
            hi = vals[so[nu - 1]]
            ud[so[0]] = np.inf
            ud[so[nu - 1]] = np.inf
            span = hi - lo
            if span <= 0.0:
                continue
            for t in range(1, nu - 1):
                ud[so[t]] += (vals[so[t + 1]] - vals[so[t - 1]]) / span
    for t in range(nu):
        dist[uniq[t]] = ud[t]
    return dist


@njit(cache=True)
def select_survivors(c, mu):
    """(mu + lambda) survival by (rank, crowding); returns (indices, rank, crowding)."""
    npts = c.shape[0]
    ranks = nondominated_ranks(c)
    crowd = np.zeros(npts)
    maxr = 0
    for p in range(npts):
        if ranks[p] > maxr:
            maxr = ranks[p]
    chosen = np.empty(mu, np.int64)
    nchosen = 0
    for r in range(maxr + 1):
        members = np.empty(npts, np.int64)
        k = 0
        for p in range(npts):
            if ranks[p] == r:
                members[k] = p
                k += 1
        members = members[:k]
        d = crowding(c, members)
        for t in range(k):
            crowd[members[t]] = d[t]
        if nchosen + k <= mu:
            for t in range(k):
                chosen[nchosen] = members[t]
                nchosen += 1
        else:
            need = mu - nchosen
            # descending crowding, ties by index
            so = np.argsort(-d, kind="mergesort")
            take = np.sort(members[so[:need]])
            for t in range(need):
                chosen[nchosen] = take[t]
                nchosen += 1
        if nchosen == mu:
            break
    return chosen, ranks[chosen], crowd[chosen]


@njit(cache=True)
def tournament(ranks, crowd, k, rng):
    npop = ranks.shape[0]
    out = np.empty(k, np.int64)
    for i in range(k):
        a = rng.integers(0, npop)
        b = rng.integers(0, npop)
        if ranks[a] < ranks[b] or (ranks[a] == ranks[b] and crowd[a] > crowd[b]):
            out[i] = a
        elif ranks[b] < ranks[a] or (ranks[a] == ranks[b] and crowd[b] > crowd[a]):
            out[i] = b
        else:
            out[i] = min(a, b)
    return out


@njit(cache=True)
def count_components(n, eu, ev):
    parent = np.arange(n)
    rank = np.zeros(n, np.int64)
    comps = n
    for i in range(eu.shape[0]):
        if uf_union(parent, rank, eu[i], ev[i]):
            comps -= 1
    return comps
