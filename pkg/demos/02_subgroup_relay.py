"""Two terminals build a key across a relay that learns nothing.

Terminals 0 and 2 want a private key but also share pads with terminal 1.
Fresh random bits from terminal 0 are routed along max-flow paths; every
hop re-encrypts with the pad of that hop, so the relay sees only
ciphertext it cannot strip.
"""

from pinkey import (
    NetworkSpec,
    budget_graph,
    generate_pairwise_keys,
    max_flow,
    replay_key,
    run_subgroup,
)

spec = NetworkSpec.from_pairs(3, [(0, 1, 5), (0, 2, 4), (1, 2, 3)])
flow = max_flow(budget_graph(spec), 0, 2)
print("max flow from 0 to 2:", flow.value)
for path, amount in flow.paths:
    print(f"  {amount} bits along {' -> '.join(map(str, path))}")

store = generate_pairwise_keys(spec, seed=5)
result = run_subgroup(store, spec, s=0, t=2, seed=5)

print(f"\nkey ({len(result.key)} bits): {''.join(map(str, result.key))}")
print("transcript:")
print(result.transcript.to_text(), end="")

print("\nterminal 0 replays:", replay_key(result, 0) == result.key)
print("terminal 2 replays:", replay_key(result, 2) == result.key)
# The relay carries 3 of the 7 bits but never sees the direct-edge slice.
print("relay (terminal 1) can reconstruct the key:", replay_key(result, 1) is not None)
