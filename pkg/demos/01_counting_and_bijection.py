"""Star pairings, multichains and the fattening bijection between them."""

from freehaag import (enumerate_multichains, enumerate_star_pairings, fuss_catalan, pattern,
                      phi_map, q_map)

# The word a a a* a* a a a* a* (n=2 letters per run, m=2 repetitions)
w = pattern(2, 2)
print(" ".join(w.to_symbols()))

# Its star pairings, each with the multichain it maps to
for pi in enumerate_star_pairings(2, 2):
    chain = phi_map(pi)
    print(pi.pairing, "->", " <= ".join(chain.to_text()))

# Both families are counted by Fuss-Catalan numbers
for n, m in [(1, 4), (2, 3), (3, 4)]:
    pairings = sum(1 for _ in enumerate_star_pairings(n, m))
    chains = sum(1 for _ in enumerate_multichains(n, m))
    print(f"n={n} m={m}: {pairings} pairings, {chains} chains, formula {fuss_catalan(n, m)}")

# Going back and forth is the identity
for chain in enumerate_multichains(3, 3):
    assert phi_map(q_map(chain)) == chain
print("round trips ok")
