"""Brute-force BLEU oracle, coded independently of the package.

N-grams are materialized as explicit lists and clipped by counting with
``list.count``; the combination applies the same total-extension rules as
the library (drop undefined orders, renormalize weights, zero precision
forces a zero score) so the two paths are comparable everywhere.
"""

import math


def oracle_ngrams(tokens, n):
    out = []
    for start in range(len(tokens)):
        gram = tokens[start : start + n]
        if len(gram) == n:
            out.append(tuple(gram))
    return out


def oracle_precision(cand, ref, n):
    cand_grams = oracle_ngrams(cand, n)
    if not cand_grams:
        return None
    ref_grams = oracle_ngrams(ref, n)
    matched = 0
    for gram in set(cand_grams):
        matched += min(cand_grams.count(gram), ref_grams.count(gram))
    return matched / len(cand_grams)


def oracle_bleu(cand, ref, weights):
    if len(cand) > len(ref):
        bp = 1.0
    else:
        bp = math.exp(1.0 - len(ref) / len(cand))
    pairs = []
    for n, w in enumerate(weights, start=1):
        p = oracle_precision(cand, ref, n)
        if p is not None and w > 0:
            pairs.append((w, p))
    if not pairs:
        return 0.0
    total_w = sum(w for w, _ in pairs)
    if any(p == 0 for _, p in pairs):
        return 0.0
    return bp * math.exp(sum(w / total_w * math.log(p) for w, p in pairs))
