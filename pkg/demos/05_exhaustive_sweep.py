"""The full verification story in one run.

Every square layer shape up to 6x6 images, 3x3 kernels, stride 2, one-pixel
padding and 3 channels (plus depthwise and packed variants) is checked
against the brute-force lifetime minimum, and 100 seeded random networks are
executed bit-exactly in their planned arenas.
"""

from actplan import run_exec_sweep, run_layer_sweep

s = run_layer_sweep()
print(f"layer sweep over {s.total} configurations:")
print(f"  exact        {s.match}")
print(f"  conservative {s.conservative} (at most {s.max_gap} words of slack)")
print(f"  UNSAFE       {s.unsafe}")

e = run_exec_sweep(seed=0, count=100)
print(f"\nexecution of {e.networks} seeded random networks:")
print(f"  bit-exact under the planned offsets   {e.bit_exact}/{e.networks}")
print(f"  bit-exact under the oracle's offsets  {e.oracle_plan_bit_exact}/{e.networks}")
print(f"  clobbers when a constraint-bound offset drops below the minimum: "
      f"{e.tight_probe_clobbers}/{e.tight_probes}")

print("\nzero UNSAFE verdicts and universal bit-exactness are the safety")
print("claims; the conservative counts are the price of guarding the")
print("frontier through each layer's final window.")
