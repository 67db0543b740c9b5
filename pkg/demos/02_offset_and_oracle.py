"""Closed-form offsets against the brute-force lifetime minimum.

The closed form is provably safe (never below the minimum) and exact in the
steady state; it keeps the frontier guarded through a layer's final window,
so shapes whose writes outpace the frontier near the end carry a few words
of slack.  The verdicts below show both behaviours side by side.
"""

from actplan import LayerSpec, verify_layer

shapes = [
    ("pointwise, one channel (lockstep)",
     LayerSpec(4, 4, 1, 1, 1, 1, 1, 0, 0, 1)),
    ("3x3 same padding, one channel",
     LayerSpec(4, 4, 1, 3, 3, 1, 1, 1, 1, 1)),
    ("3x3 same padding, 2 -> 2 channels",
     LayerSpec(5, 5, 2, 3, 3, 1, 1, 1, 1, 2)),
    ("channel doubling on a 2x2 image (end-of-layer slack)",
     LayerSpec(2, 2, 1, 1, 1, 1, 1, 0, 0, 2)),
    ("depthwise 3x3, 2 channels",
     LayerSpec(5, 5, 2, 3, 3, 1, 1, 1, 1, 2, groups=2)),
    ("stride-2 with right-edge run-out",
     LayerSpec(5, 5, 1, 1, 1, 2, 2, 0, 0, 1)),
]

print(f"{'shape':52s} {'closed':>7} {'minimum':>8}  verdict")
for label, layer in shapes:
    rep = verify_layer(layer)
    print(f"{label:52s} {rep.d_closed_form:>7} {rep.d_oracle:>8}  {rep.verdict}")

print("\nA verdict of closed_form_conservative means the plan spends a few")
print("extra words; UNSAFE would mean data loss and never occurs in the sweep")
print("domain (see `actplan sweep`).")
