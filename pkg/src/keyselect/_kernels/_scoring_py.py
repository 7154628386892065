"""Pure-Python (numpy) implementations of the hot scoring kernels.

Mirrors the signatures of the compiled module ``_scoring_cy`` so either can
be selected at import time. Integer-valued kernels produce identical results
on both backends; the embedding trainer may differ in the last float bits
because numpy reductions reorder sums.
"""

import numpy as np


def labeled_neighbor_counts(tag_indptr, tag_lefts, cands, pos_flag, neg_flag):
    """Count, per candidate hashtag, the left nodes that also touch a labeled tag.

    ``pos_flag``/``neg_flag`` are uint8 arrays over left nodes, already
    restricted to the active (seed-expanded) subgraph: flag is 1 iff the left
    node is active and adjacent to at least one positively / negatively
    labeled hashtag. Returns (pos_counts, neg_counts) as int64 arrays.
    """
    pos_csum = np.concatenate(([0], np.cumsum(pos_flag[tag_lefts], dtype=np.int64)))
    neg_csum = np.concatenate(([0], np.cumsum(neg_flag[tag_lefts], dtype=np.int64)))
    lo = tag_indptr[cands]
    hi = tag_indptr[cands + 1]
    return pos_csum[hi] - pos_csum[lo], neg_csum[hi] - neg_csum[lo]


def cooccurrence_degrees(cands, tag_indptr, tag_lefts, left_indptr, left_tags, active):
    """Distinct co-occurring hashtags per candidate, over active left nodes.

    For each candidate c: the number of hashtags v != c such that some active
    left node is adjacent to both c and v.
    """
    out = np.zeros(len(cands), dtype=np.int64)
    for i, c in enumerate(cands):
        lefts = tag_lefts[tag_indptr[c]:tag_indptr[c + 1]]
        lefts = lefts[active[lefts] != 0]
        if len(lefts) == 0:
            continue
        chunks = [left_tags[left_indptr[u]:left_indptr[u + 1]] for u in lefts]
        tags = np.unique(np.concatenate(chunks))
        out[i] = len(tags) - int(c in tags)
    return out


def sgns_train(w_in, w_out, centers, contexts, negatives, lr):
    """One pass of skip-gram negative-sampling updates over prepared pairs.

    ``centers``/``contexts`` are parallel int32 arrays of token ids;
    ``negatives`` is (n_pairs, k) of pre-drawn noise token ids. Negative
    draws equal to the positive context are skipped. Updates ``w_in`` and
    ``w_out`` in place; returns the summed negative log-likelihood.
    """
    loss = 0.0
    for t in range(len(centers)):
        c = centers[t]
        vin = w_in[c]
        grad = np.zeros_like(vin)
        o = contexts[t]
        f = 1.0 / (1.0 + np.exp(-float(np.dot(vin, w_out[o]))))
        g = (1.0 - f) * lr
        grad += g * w_out[o]
        w_out[o] += g * vin
        loss -= np.log(max(f, 1e-12))
        for n in negatives[t]:
            if n == o:
                continue
            f = 1.0 / (1.0 + np.exp(-float(np.dot(vin, w_out[n]))))
            g = -f * lr
            grad += g * w_out[n]
            w_out[n] += g * vin
            loss -= np.log(max(1.0 - f, 1e-12))
        vin += grad
    return loss
