"""Reference values for the unit tests, computed without the C++ code.

Run: python3 tests/oracles/oracles.py
The printed numbers are pasted into the corresponding test files.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def hz_to_mel(f):
    return 2595.0 * math.log10(1.0 + f / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)


def filterbank_1khz():
    rate, n_fft, n_mels, win = 16000, 512, 26, 400
    t = np.arange(win + 1) / rate
    x = np.sin(2 * np.pi * 1000.0 * t)
    y = x[1:] - 0.97 * x[:-1]
    w = 0.54 - 0.46 * np.cos(2 * np.pi * np.arange(win) / (win - 1))
    frame = np.zeros(n_fft)
    frame[:win] = y * w
    # naive DFT, no FFT library
    mags = []
    for k in range(n_fft // 2 + 1):
        re = sum(frame[n] * math.cos(2 * math.pi * k * n / n_fft) for n in range(win))
        im = -sum(frame[n] * math.sin(2 * math.pi * k * n / n_fft) for n in range(win))
        mags.append(math.sqrt(re * re + im * im))
    edges = [mel_to_hz(hz_to_mel(0) + i * (hz_to_mel(rate / 2) - hz_to_mel(0)) / (n_mels + 1))
             for i in range(n_mels + 2)]
    energies = []
    for m in range(n_mels):
        lo, c, hi = edges[m], edges[m + 1], edges[m + 2]
        e = 0.0
        for k, p in enumerate(mags):
            f = k * rate / n_fft
            if lo < f <= c:
                e += p * (f - lo) / (c - lo)
            elif c < f < hi:
                e += p * (hi - f) / (hi - c)
        energies.append(e)
    best = int(np.argmax(energies))
    print("filterbank 1 kHz: argmax filter", best, "edges", edges[best], edges[best + 2])


def sse(points, labels, k):
    total = 0.0
    for c in range(k):
        members = [p for p, l in zip(points, labels) if l == c]
        if not members:
            continue
        mu = np.mean(members, axis=0)
        total += sum(float(np.sum((np.array(p) - mu) ** 2)) for p in members)
    return total


def brute_kmeans(points, k):
    best = None
    for labels in itertools.product(range(k), repeat=len(points)):
        v = sse(points, labels, k)
        if best is None or v < best:
            best = v
    return best


def kmeans_examples():
    pts = [(0, 0), (0, 1), (10, 10), (10, 11)]
    print("kmeans 4 points k=2 optimum", brute_kmeans(pts, 2))
    print("kmeans duplicated optimum", brute_kmeans(pts + pts, 2))


def tfidf_example():
    seqs = [[0, 0, 1], [1, 1, 1]]
    k, n = 2, len(seqs)
    df = [sum(1 for s in seqs if c in s) for c in range(k)]
    idf = [math.log((1 + n) / (1 + d)) + 1 for d in df]
    for s in seqs:
        print("tfidf", ["%.9f" % (s.count(c) / len(s) * idf[c]) for c in range(k)])


def pca_examples():
    for pts in ([(t, 2 * t) for t in (-2, -1, 0, 1, 2)], [(1, 0), (-1, 0), (0, 1), (0, -1)]):
        a = np.array(pts, dtype=float)
        cov = np.cov(a.T, ddof=1)
        vals, vecs = np.linalg.eigh(cov)
        print("pca eigenvalues", sorted(vals.tolist(), reverse=True), "top", vecs[:, -1].tolist())


def scoring_example():
    centered = np.array([(1, 0), (0, 2), (0, -1)], dtype=float)
    p = np.array([[1.0, 0.0]])
    d = [float(np.linalg.norm(x - p.T @ p @ x)) for x in centered]
    print("scoring distances", d, "scores", [1 / (1 + v) for v in d])


def ngrams(toks, n):
    return [tuple(toks[i:i + n]) for i in range(len(toks) - n + 1)]


def su_units(toks, gap=4):
    units = [(t,) for t in toks]
    for i in range(len(toks)):
        for j in range(i + 1, len(toks)):
            if j - i - 1 <= gap:
                units.append((toks[i], toks[j]))
    return units


def clipped(hyp_units, ref_units):
    pool = list(ref_units)
    hit = 0
    for u in hyp_units:
        if u in pool:
            pool.remove(u)
            hit += 1
    return hit


def prf(hyp_units, ref_units):
    o = clipped(hyp_units, ref_units)
    r = Fraction(o, len(ref_units)) if ref_units else Fraction(0)
    p = Fraction(o, len(hyp_units)) if hyp_units else Fraction(0)
    f = 2 * r * p / (r + p) if r + p else Fraction(0)
    return r, p, f


ROUGE_CASES = [
    ("a b c", "a b d"),
    ("a b c", "a c b"),
    ("the cat sat on the mat", "the cat is on the mat"),
    ("the the the", "the cat"),
    ("a b a b", "a b"),
    ("x y z", "p q r"),
    ("one", "one two three"),
    ("a b c d e f g", "a g"),
    ("a b c d e f g h", "a h"),
    ("we will meet on monday", "the meeting is monday we will meet"),
]


def rouge_table():
    for hyp, ref in ROUGE_CASES:
        h, r = hyp.split(), ref.split()
        row = []
        for name, hu, ru in (("r1", ngrams(h, 1), ngrams(r, 1)), ("r2", ngrams(h, 2), ngrams(r, 2)),
                             ("su4", su_units(h), su_units(r))):
            rr, pp, ff = prf(hu, ru)
            row.append("%s r=%s p=%s f=%s" % (name, rr, pp, ff))
        print(repr(hyp), repr(ref), " | ".join(row))


if __name__ == "__main__":
    filterbank_1khz()
    kmeans_examples()
    tfidf_example()
    pca_examples()
    scoring_example()
    rouge_table()
