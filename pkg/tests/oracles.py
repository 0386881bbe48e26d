"""Independent brute-force references used to freeze expected values."""

from itertools import permutations, product


def labeled_category_classes(k, max_arrows):
    """Isomorphism classes of categories on objects 0..k-1, by exhaustive
    tables plus canonical relabeling.  Returns {n_arrows: count}."""
    counts = {}
    seen = set()
    pairs = [(a, b) for a in range(k) for b in range(k)]
    for sizes in product(range(max_arrows + 1), repeat=len(pairs)):
        H = dict(zip(pairs, sizes))
        if any(H[(a, a)] < 1 for a in range(k)) or sum(sizes) > max_arrows:
            continue
        arrows = []
        for (a, b) in pairs:
            for t in range(H[(a, b)]):
                arrows.append((a, b, t))  # t == 0 on a loop is the identity
        ident = {a: (a, a, 0) for a in range(k)}
        free = [(f, g) for f in arrows for g in arrows
                if f[1] == g[0] and f != ident[f[0]] and g != ident[g[0]]]
        opts = [[h for h in arrows if h[0] == f[0] and h[1] == g[1]] for f, g in free]
        for choice in product(*opts):
            T = dict(zip(free, choice))
            for f in arrows:
                for g in arrows:
                    if f[1] == g[0]:
                        if f == ident[f[0]]:
                            T[(f, g)] = g
                        elif g == ident[g[0]]:
                            T[(f, g)] = f
            if not all(T[(T[(f, g)], h)] == T[(f, T[(g, h)])]
                       for f in arrows for g in arrows for h in arrows
                       if f[1] == g[0] and g[1] == h[0]):
                continue
            key = _canon(k, arrows, T)
            if key in seen:
                continue
            seen.add(key)
            counts[len(arrows)] = counts.get(len(arrows), 0) + 1
    return counts


def _canon(k, arrows, T):
    best = None
    for pi in permutations(range(k)):
        blocks = {}
        for f in arrows:
            if f[2] != 0 or f[0] != f[1]:
                blocks.setdefault((f[0], f[1]), []).append(f)
        keys = sorted(blocks)
        choices = [list(permutations(range(len(blocks[b])))) for b in keys]
        for ch in product(*choices):
            ren = {}
            for b, perm in zip(keys, ch):
                off = 1 if b[0] == b[1] else 0
                for f, j in zip(blocks[b], perm):
                    ren[f] = (pi[b[0]], pi[b[1]], j + off)
            for a in range(k):
                ren[(a, a, 0)] = (pi[a], pi[a], 0)
            rep = tuple(sorted((ren[f], ren[g], ren[h]) for (f, g), h in T.items()))
            rep = (tuple(sorted(ren.values())), rep)
            if best is None or rep < best:
                best = rep
    return best
