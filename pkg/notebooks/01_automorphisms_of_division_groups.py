"""
Automorphisms of a finite division group
========================================

At level N the division group of a free group of rank r with s torsion
directions is modelled by integer numerators. An automorphism fixing the
free part is a pair (D, C): it adds D x to the torsion numerators and
applies the invertible matrix C to them.
"""

from torsionkummer.sext import (
    DivisionPoint,
    ExtensionShape,
    TorsionKummerElement,
    apply,
    compose,
    group_order,
    invert,
    verify_exact_sequence,
)

# rank 1, two torsion directions, level 4
shape = ExtensionShape(r=1, s=2, N=4)
print("group order:", group_order(shape))

# a Kummer-type element moves the point e_1/N by the column of D
a = TorsionKummerElement.from_lists([[1], [3]], [[1, 0], [0, 1]], shape)
print(apply(a, DivisionPoint((1,), (0, 0))))

# conjugating (D, I) by (0, C) gives (C D, I): the quotient acts on the
# kernel by left multiplication
g = TorsionKummerElement.from_lists([[0], [0]], [[1, 1], [0, 1]], shape)
conj = compose(compose(g, a), invert(g))
print("C D =", conj.D.tolist())

# exhaustive check of the exact sequence at this shape
report = verify_exact_sequence(shape)
print("passed:", report.passed, " pairs exhaustive:", report.pairs_exhaustive)
for name, ok in sorted(report.checks.items()):
    print(f"  {name:<28} {ok}")
