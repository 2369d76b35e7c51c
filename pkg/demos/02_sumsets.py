"""Walk sets on cycles via modular sumsets.

The endpoints of length-j walks in the n-cycle form an iterated sumset of
the step set {-1,+1}.  Its size follows a parity-dependent closed form:
j+1 for odd n, min(j+1, n/2) for even n, and the n-fold sets of both step
systems {-1,+1} and {-2,0,+2} cover a full parity class.  These sizes are
what make the universal-path and even-cycle gadgets tick.
"""

from cqcsp import ResidueSet, iterated_sumset, reachable_by_walk

print("size of the j-fold sumset of {-1,+1} mod n")
header = "n\\j " + " ".join(f"{j:>3}" for j in range(2, 10))
print(header)
for n in range(3, 13):
    steps = ResidueSet.of(n, [-1, 1])
    row = [f"{len(iterated_sumset(j, steps)):>3}" for j in range(2, min(10, n))]
    print(f"{n:>3} " + " ".join(row))

print("\nn-fold sets (full parity class):")
for n in (5, 6, 9, 10):
    a = iterated_sumset(n, ResidueSet.of(n, [-1, 1]))
    b = iterated_sumset(n, ResidueSet.of(n, [-2, 0, 2]))
    print(f"  n={n}: |n x {{-1,+1}}| = {len(a)}, |n x {{-2,0,+2}}| = {len(b)}")

print("\nwalk endpoints in the 6-cycle from vertex 0:")
for length in range(0, 7):
    print(f"  length {length}: {reachable_by_walk(6, length, 0).elements()}")
