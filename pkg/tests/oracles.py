"""Brute-force oracles that use explicit representations only.

Nothing here touches the derived-category or presentation code: objects
of mod A_2 are F_2 matrices V1 -> V2 and short exact sequences are found by
listing sub-representations.
"""
import itertools

import numpy as np

from extrifact import exactlin as el
from extrifact.repkernel import QuiverRep, rep_hom_oracle

# explicit F_2 representations V1 -> V2 of the three indecomposables
A2_REPS = {
    "I1": QuiverRep(2, (1, 0)),
    "P1": QuiverRep(2, (1, 1), [np.array([[1]])]),
    "P2": QuiverRep(2, (0, 1)),
}


def subspaces(d):
    """All subspaces of F_2^d as column-basis matrices (d <= 2)."""
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product((0, 1), repeat=d) if any(v)]
    seen, out = set(), [np.zeros((d, 0), dtype=np.int64)]
    for k in range(1, d + 1):
        for combo in itertools.combinations(vecs, k):
            m = np.stack(combo, axis=1)
            if el.rank(m, 2) != k:
                continue
            span = frozenset(tuple(np.mod(m @ np.array(c), 2)) for c in itertools.product((0, 1), repeat=k))
            if span not in seen:
                seen.add(span)
                out.append(m)
    return out


def a2_summands(d1, d2, r):
    # V1 -> V2 of rank r splits as r P1 + (d1 - r) I1 + (d2 - r) P2
    return ["P1"] * r + ["I1"] * (d1 - r) + ["P2"] * (d2 - r)


def short_exact_splittings(label):
    """(sub summands, quotient summands) for every subrepresentation."""
    x = A2_REPS[label]
    (f,) = x.maps
    out = []
    for u1 in subspaces(x.dims[0]):
        for u2 in subspaces(x.dims[1]):
            img = np.mod(f @ u1, 2)
            if el.rank(np.concatenate([u2, img], axis=1), 2) != u2.shape[1]:
                continue
            ru = el.rank(img, 2) if img.size else 0
            sub = a2_summands(u1.shape[1], u2.shape[1], ru)
            # quotient map rank: rank of f on V1 modulo U1, into V2 modulo U2
            full = el.rank(np.concatenate([u2, np.mod(f @ np.eye(x.dims[0], dtype=np.int64), 2)], axis=1), 2) if x.dims[1] else 0
            rq = full - u2.shape[1] if x.dims[0] - u1.shape[1] else 0
            quo = a2_summands(x.dims[0] - u1.shape[1], x.dims[1] - u2.shape[1], rq)
            out.append((sub, quo))
    return out


def brute_force_a2_pairs():
    labels = list(A2_REPS)
    hom = {(a, b): rep_hom_oracle(A2_REPS[a], A2_REPS[b], 2) for a in labels for b in labels}
    found = []
    for tm in itertools.product((0, 1), repeat=3):
        for fm in itertools.product((0, 1), repeat=3):
            t = {l for l, b in zip(labels, tm) if b}
            f = {l for l, b in zip(labels, fm) if b}
            if any(hom[(a, b)] for a in t for b in f):
                continue
            if all(any(set(s) <= t and set(q) <= f for s, q in short_exact_splittings(x)) for x in labels):
                found.append((frozenset(t), frozenset(f)))
    return found


