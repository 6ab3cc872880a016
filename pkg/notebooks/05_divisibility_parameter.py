"""
Divisibility parameters from generator matrices
===============================================

The columns of a generator matrix give coordinates of the generators of A
in a basis of the Mordell-Weil lattice. The Smith form yields an adapted
basis f_i with d_i f_i a basis of A, and the largest invariant factor is a
valid divisibility parameter.
"""

from torsionkummer.divisibility import GeneratorMatrix, divisibility_parameter, saturation_membership

g = GeneratorMatrix.from_rows([[2, 0], [0, 4]])
res = divisibility_parameter(g)
print("invariant factors:", res.divisors, " d_A =", res.d_A)

for i in range(res.rank):
    f = res.adapted_vector(i)
    print(f"f_{i + 1} = {f}:  f in A / saturation {saturation_membership(g, f)},"
          f"  d_A f in A {saturation_membership(g, [res.d_A * x for x in f])[0]}")

# a non-diagonal example: three generators in a rank three lattice
h = GeneratorMatrix.from_rows([[2, 4, 6], [6, 0, 12], [0, 0, 6]])
print(divisibility_parameter(h).divisors)
