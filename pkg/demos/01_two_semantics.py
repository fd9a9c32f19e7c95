"""Two ways to read "how often does a rule hold" off one structure.

A three-person social network: alice smokes, friendships run both ways
between alice/bob and bob/eve.  The subset semantics asks how many width-2
fragments satisfy a closed formula outright; the substitution semantics asks
what fraction of injective variable assignments satisfy the matrix.  The two
disagree on the same formula, and both are exact rationals.
"""

from relmarg import GlobalExample, ModelA, MODEL_B, parse_formula, statistic

network = GlobalExample(
    ["alice", "bob", "eve"],
    [
        ("fr", ("alice", "bob")),
        ("fr", ("bob", "alice")),
        ("fr", ("bob", "eve")),
        ("fr", ("eve", "bob")),
        ("sm", ("alice",)),
    ],
)

alpha = parse_formula("forall X, Y: ~fr(X,Y) | sm(Y)")
beta = parse_formula("forall X, Y: ~fr(X,Y) | sm(X) | sm(Y)")

atoms = sorted((a.pred,) + a.args for a in network.atoms)
print("structure:", ", ".join(f"{t[0]}({', '.join(t[1:])})" for t in atoms))
print()

for name, f in (("friends-smoke", alpha), ("some-end-smokes", beta)):
    subset = statistic(f, network, ModelA(2))
    subst = statistic(f, network, MODEL_B)
    print(f"{name}:")
    print(f"  width-2 fragment probability  {subset}")
    print(f"  injective substitution share  {subst}")

# the fragment view scores whole 2-person sub-networks, so one bad pair sinks
# a fragment even when most substitutions inside it satisfy the matrix; that
# is why alpha scores 1/3 on fragments but 1/2 on substitutions
from relmarg import evaluate, fragment

print()
for pair in (("alice", "bob"), ("alice", "eve"), ("bob", "eve")):
    piece = fragment(network, pair)
    print(f"fragment {pair}: alpha holds = {evaluate(alpha, piece)}")
