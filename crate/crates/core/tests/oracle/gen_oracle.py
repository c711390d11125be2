"""Brute-force reference values for the entropy and update-operator checks.

Evaluates every quantity directly from its definition in 50-digit mpmath
arithmetic on the exact binary values of the float64 inputs. Regenerate with

    python3 gen_oracle.py > cases.json
"""

import json
import random

import mpmath as mp

mp.mp.dps = 50
FLOOR = mp.mpf("1e-15")
RULES = ["multiplicative", "softmax", "replicator"]


def shannon(p):
    return -mp.fsum(x * mp.log(x) for x in p if x > 0)


def renyi(p, q):
    return mp.log(mp.fsum(x ** q for x in p if x > 0)) / (1 - q)


def normalize(w):
    s = mp.fsum(w)
    return [x / s for x in w]


def feedback(p, a, rule):
    n = len(p)
    if rule == "multiplicative":
        w = [x ** (1 + a) if x > 0 else mp.mpf(0) for x in p]
    elif rule == "softmax":
        w = [x * mp.exp(a * n * x) for x in p]
    else:
        fbar = mp.fsum(x * x for x in p)
        w = [x * max(1 + a * (x - fbar), FLOOR) for x in p]
    return normalize(w)


def novelty(p, b):
    n = len(p)
    return normalize([(1 - b) * x + b / n for x in p])


def f(x):
    return float(x)


def case(rng, i):
    n = [2, 3, 5][i % 3]
    raw = [rng.random() for _ in range(n)]
    if i % 10 == 7:
        raw[rng.randrange(n)] = 0.0
    total = sum(raw)
    p = [x / total for x in raw]
    a = round(rng.uniform(0.0, 3.0), 6)
    b = round(rng.uniform(0.0, 1.0), 6)
    q = round(rng.uniform(0.2, 4.0), 6)
    if abs(q - 1) < 1e-3:
        q = 2.0
    rule = RULES[i % 3]
    mp_p = [mp.mpf(x) for x in p]
    a_, b_, q_ = mp.mpf(a), mp.mpf(b), mp.mpf(q)
    return {
        "p": p,
        "alpha": a,
        "beta": b,
        "q": q,
        "rule": rule,
        "shannon": f(shannon(mp_p)),
        "renyi": f(renyi(mp_p, q_)),
        "feedback": {r: [f(x) for x in feedback(mp_p, a_, r)] for r in RULES},
        "novelty": [f(x) for x in novelty(mp_p, b_)],
        "step": [f(x) for x in novelty(feedback(mp_p, a_, rule), b_)],
    }


def main():
    rng = random.Random(20240611)
    cases = [case(rng, i) for i in range(50)]
    print(json.dumps({"digits": mp.mp.dps, "cases": cases}, indent=1))


if __name__ == "__main__":
    main()
