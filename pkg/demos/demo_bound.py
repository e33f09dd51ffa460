"""Walk a manifold description through the full pipeline by hand.

Same steps the `asdimlab bound` subcommand performs, spelled out:
parse the description, compile it to a group expression, run the
bound engine, then read the proof trace.
"""

from asdimlab import bound, compile, consequences, parse_manifold, serialize_trace, to_canonical

PROGRAM = """\
dim 4;
-- two hyperbolic pieces glued along a flat 3-manifold
graph g {
    v a H3xE;
    v b H2xE2;
    e a b flat3;
    pi1_injective true;
}
"""

desc = parse_manifold(PROGRAM)
expr, verdict = compile(desc)
print("compiled group:", to_canonical(expr))
print("verdict:", verdict.status, "--", verdict.reason)

aspherical_dim = desc.dim if verdict.status == "Aspherical" else None
result = bound(expr, aspherical_dim=aspherical_dim)
print("bound:", result.bound)
print()
print("derivation:")
for line in serialize_trace(result.trace).splitlines():
    print("   ", line)

print()
print("what follows from it:")
for c in consequences(result.bound, aspherical=aspherical_dim is not None):
    print(f"    {c.kind}: {c.condition}")
