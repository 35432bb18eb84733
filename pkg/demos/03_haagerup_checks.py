"""Finite-m checks of the Haagerup-type inequalities."""

import random

from freehaag import (b_model, circular, dominating_model, haagerup_constant, haar_unitary,
                      sharpness_haar, verify_main_lemma, verify_strong_haagerup)
from freehaag.haagerup import circular_closed_form_check, random_tensor

rng = random.Random(1)
T = random_tensor(rng, 2)
print(T.dumps())

for a in (circular(), haar_unitary(), b_model(1, 1)):
    c = haagerup_constant(a)
    lemma = verify_main_lemma(a, T, 3)
    strong = verify_strong_haagerup(a, T, 3)
    print(f"{a.name:10s} C_a={c.value:9.3f} ({c.regime}) lemma={lemma.verdict} strong={strong.verdict}")
    for row in lemma.rows:
        print(f"   m={row.m} ||T||_2m={row.lhs_float:.6f} bound={row.rhs_float:.6f}")

# Circular powers: C^{(n)}_m^{1/2m} stays below sqrt(e) sqrt(n+1)
print("closed form n<=10, m<=50:", all(circular_closed_form_check(n, 50).passed for n in range(1, 11)))

# A positive-cumulant element dominating the Haar unitary
b = dominating_model(haar_unitary())
print(b.name, [int(b.seq.alpha(k)) for k in range(1, 4)])

# u1+...+uk: 2m-norms creep towards 2 sqrt(k-1)
for k in (2, 5):
    r = sharpness_haar(k, 4)
    print(k, [round(x, 4) for x in r.norms], "target", round(r.target, 4),
          "ratio", round(r.ratio_target, 4))
