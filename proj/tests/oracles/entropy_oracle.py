#!/usr/bin/env python3
"""Brute-force oracles for the frozen constants in the C++ test suites.

Run `python3 tests/oracles/entropy_oracle.py` and compare the printed
values with the literals in tests/. Everything here is computed from first
principles (direct counting and enumeration), independently of the library.
"""
import itertools
import math

def entropy(counts):
    total = sum(counts)
    return -sum(c / total * math.log2(c / total) for c in counts if c > 0)

# --- entropy -----------------------------------------------------------
print("entropy [9,5]          =", entropy([9, 5]))
print("entropy [2,2]          =", entropy([2, 2]))

# --- weather data: gain ratio of a multiway split on `outlook` ---------
# rows: (outlook, play)
weather = [
    ("sunny", "no"), ("sunny", "no"), ("overcast", "yes"), ("rainy", "yes"),
    ("rainy", "yes"), ("rainy", "no"), ("overcast", "yes"), ("sunny", "no"),
    ("sunny", "yes"), ("rainy", "yes"), ("sunny", "yes"), ("overcast", "yes"),
    ("overcast", "yes"), ("rainy", "no"),
]
labels = sorted({play for _, play in weather})
parent = [sum(1 for _, p in weather if p == lab) for lab in labels]
groups = {}
for outlook, play in weather:
    groups.setdefault(outlook, []).append(play)
info = sum(len(g) / len(weather) * entropy([g.count(lab) for lab in labels])
           for g in groups.values())
gain = entropy(parent) - info
split_info = entropy([len(g) for g in groups.values()])
print("weather outlook gain   =", gain)
print("weather outlook ratio  =", gain / split_info)

# --- XOR: every single-attribute partition has zero gain ---------------
xor_rows = [((0, 0), "a"), ((0, 1), "b"), ((1, 0), "b"), ((1, 1), "a")]
for attr in (0, 1):
    by_value = {}
    for (vals, lab) in xor_rows:
        by_value.setdefault(vals[attr], []).append(lab)
    parent = [sum(1 for _, lab in xor_rows if lab == c) for c in ("a", "b")]
    info = sum(len(g) / len(xor_rows) * entropy([g.count(c) for c in ("a", "b")])
               for g in by_value.values())
    print(f"xor attr {attr} gain       =", entropy(parent) - info)

# --- z-score of [2, 4] with the n-1 stddev ------------------------------
mean = 3.0
sd = math.sqrt(((2 - 3) ** 2 + (4 - 3) ** 2) / 1)
print("znorm [2,4]            =", (2 - mean) / sd, (4 - mean) / sd)

# --- Box-Muller fixed points --------------------------------------------
print("box_muller(0.5, 0.25)  =", math.sqrt(-2 * math.log(0.5)) * math.cos(2 * math.pi * 0.25))
print("box_muller(1.0, 0.7)   =", math.sqrt(-2 * math.log(1.0)) * math.cos(2 * math.pi * 0.7))
print("box_muller(e^-0.5, 0)  =", math.sqrt(-2 * math.log(math.exp(-0.5))) * math.cos(0.0))

# --- Wilcoxon signed rank by full sign enumeration ----------------------
def wilcoxon_exact_p(diffs):
    diffs = [d for d in diffs if d != 0]
    n = len(diffs)
    ranked = sorted(range(n), key=lambda i: abs(diffs[i]))
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and abs(diffs[ranked[j + 1]]) == abs(diffs[ranked[i]]):
            j += 1
        for k in range(i, j + 1):
            ranks[ranked[k]] = (i + 1 + j + 1) / 2
        i = j + 1
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    count = 0
    for signs in itertools.product([False, True], repeat=n):
        w = sum(r for r, neg in zip(ranks, signs) if neg)
        if w <= w_minus + 1e-9:
            count += 1
    return count / 2 ** n

print("wilcoxon 6 positives   =", wilcoxon_exact_p([1, 2, 3, 4, 5, 6]))
print("wilcoxon [1..5,-6]     =", wilcoxon_exact_p([1, 2, 3, 4, 5, -6]))

# --- Laplace / support / AdaBoost arithmetic ----------------------------
print("laplace tp9 fp1 c2     =", (9 + 1) / (9 + 1 + 2))
print("adaboost eps 0.25      =", math.log(0.75 / 0.25), 0.25 / 0.75)

# --- bootstrap distinct-row law -----------------------------------------
n = 1000
print("bootstrap distinct     =", 1 - (1 - 1 / n) ** n)
