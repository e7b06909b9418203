"""
Virtual bit-planes from four numeral systems
=============================================

Every 8-bit gray level can be written as a sum of distinct weights from a
numeral system.  Binary needs 8 weights; systems with slower-growing
weights need more, and each extra weight is an extra "virtual" bit-plane.
"""

from virtplane import canonical_encode, decode, decomposition_table, is_canonical, make_system
from virtplane.numeral import natural_plane_count

# How many planes does each system need to cover 0..255?
for name in ("binary", "fib:1", "prime", "natural"):
    s = make_system(name, k=8)
    print(f"{name:8s} n={s.n:2d}  weights={list(s.weights)}")

# The natural count also has a closed form
print("closed form for natural, k=8:", natural_plane_count(8))

###############################################################################
# Redundancy and the canonical form
# ---------------------------------
# With weights 3, 2, 1 the value 3 has two spellings.  The lexicographically
# highest one, "100", is the canonical form; "011" is never produced.

toy = make_system("natural", planes=3)
print(decode(toy, "100"), decode(toy, "011"))
print(is_canonical(toy, "100"), is_canonical(toy, "011"))
print([str(canonical_encode(toy, v)) for v in range(7)])

###############################################################################
# Decomposition tables
# --------------------
# The first rows of the natural and prime tables for 8-bit pixels.

natural = make_system("natural", 8)
prime = make_system("prime", 8)
for (v, a), (_, b) in zip(decomposition_table(natural, 0, 40), decomposition_table(prime, 0, 40)):
    print(f"{v:3d}  {a}  {b}")
