"""
Stable submodules and joint kernels
===================================

A subgroup V of Mat_{s x r}(Z/N) that is stable under left multiplication
by the full matrix ring contains n M, where n is the exponent of the
common kernel of its elements. Here we watch that happen on small shapes
and compare the fast closure with literal enumeration.
"""

from torsionkummer.lattice import (
    contains_scaled_full,
    index,
    joint_kernel,
    kernel_exponent,
    r_module_closure,
    subgroup_closure,
)
from torsionkummer.oracle import brute_submodule_closure, enumerate_submodules, exhaustive_kernel_containment
from torsionkummer.sext import ExtensionShape

shape = ExtensionShape(r=1, s=2, N=4)

# one vector spreads to everything once the full matrix ring acts
V = subgroup_closure([[[1], [0]]], [], shape)
W = r_module_closure(V)
print("|V| =", V.order(), " |R V| =", W.order())

# the same closure computed by breadth-first enumeration
H = [[[1, 1], [0, 1]]]
fast = subgroup_closure([[[2], [1]]], H, shape)
print("fast == brute:", fast == brute_submodule_closure([[[2], [1]]], H, shape))

# R-stable submodules of Mat_{2x1}(Z/4) and their kernel exponents
for sub in enumerate_submodules(shape, "r-stable"):
    n = kernel_exponent(joint_kernel(sub))
    print(f"index {index(sub)!s:>4}  kernel exponent {n}  contains nM: {contains_scaled_full(sub, n)}")

# the exhaustive check over every R-stable submodule
for dims in [(1, 1, 8), (2, 1, 4), (1, 2, 4)]:
    rep = exhaustive_kernel_containment(ExtensionShape(*dims))
    print(dims, "checked", rep.checked, "violations", len(rep.violations))
