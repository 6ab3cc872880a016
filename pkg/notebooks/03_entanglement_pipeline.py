"""
The general bound at finite level
=================================

Given an action H on the torsion, an H-stable V, a divisibility parameter
d_A and an exponent m killing the relevant cohomology, the index of V in
Mat_{s x r}(Z/N) divides (d_A n m)^{rs}, where n collects the prime powers
at which the algebra spanned by H becomes a full matrix algebra.
"""

from torsionkummer.lattice import algebra_closure, entanglement_pipeline, subgroup_closure
from torsionkummer.oracle import OracleConfig, randomized_pipeline_suite
from torsionkummer.sext import ExtensionShape

shape = ExtensionShape(r=2, s=2, N=36)

# a congruence-type action: every generator is I + 6 X
H = [[[7, 6], [0, 1]], [[1, 0], [6, 7]], [[7, 0], [0, 1]], [[1, 6], [0, 7]]]
for ell, k in [(2, 2), (3, 2)]:
    alg = algebra_closure([[[x % ell**k for x in row] for row in h] for h in H], ell, k)
    print(f"mod {ell}^{k}: algebra exponent {alg.exponent}, closed: {alg.algebra.is_closed()}")

V = subgroup_closure([[[6, 0], [0, 0]], [[0, 2], [0, 0]]], H, shape)
rep = entanglement_pipeline(V, H, d_A=3, m_cohomology=4)
print("kernel exponent:", rep.kernel_exponent)
print("index:", rep.index, " bound:", rep.bound, " divides:", rep.divides)

# the run mod 36 agrees with the runs mod 4 and mod 9
for comp in rep.components:
    print(f"  mod {comp.shape.N}: index {comp.index}, divides {comp.divides}")
print("CRT consistent:", rep.crt_consistent)

# a seeded batch of random instances
suite = randomized_pipeline_suite(OracleConfig(trial_count=20))
print(suite.name, "checked", suite.checked, "violations", len(suite.violations), suite.stats)
