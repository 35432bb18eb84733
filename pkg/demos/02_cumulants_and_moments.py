"""Moments from cumulants for circular and Haar unitary elements."""

from fractions import Fraction

from freehaag import (ParticleTensor, circular, fuss_catalan, haar_unitary, mixed_moment,
                      moment_from_cumulants, particle_moment)
from freehaag.cumulants import cumulants_from_moments, moment_functional
from freehaag.partitions import Partition

c, u = circular(), haar_unitary()

# The alternating cumulants of a Haar unitary are signed Catalan numbers
print("haar alpha:", [int(u.seq.alpha(k)) for k in range(1, 8)])

# phi[(c^n c*^n)^m] is a Fuss-Catalan number, (u^n u*^n)^m = 1
for n, m in [(1, 3), (2, 3), (3, 2)]:
    print(n, m, moment_from_cumulants(c.seq, n, m), fuss_catalan(n, m),
          moment_from_cumulants(u.seq, n, m))

# Mixed moments of free generators: only words that cancel survive
word = (("1", False), ("2", True), ("2", False), ("1", True))
print("phi(u1 u2* u2 u1*) =", mixed_moment(u.seq, word))

# Recover a cumulant from moments by Moebius inversion
phi = moment_functional(u.seq)
print("kappa_4[u,u*,u,u*] =", cumulants_from_moments(phi, [False, True, False, True], Partition.one(4)))

# 2m-norms of a tensor: u1+u2 has 4th moment 6, c1+c2 has 8
T = ParticleTensor(1, ("1", "2"), {("1",): 1, ("2",): 1})
print(particle_moment(u.seq, T, 2), particle_moment(c.seq, T, 2))
T2 = ParticleTensor(2, ("1", "2"), {("1", "2"): Fraction(1, 2), ("2", "1"): 1})
print("||T2||_6^6 (haar) =", particle_moment(u.seq, T2, 3))
