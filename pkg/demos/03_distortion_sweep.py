"""
Distortion across systems and planes
====================================

The worst case for plane l is a change of W(l) in every carrying pixel.
Natural weights grow linearly, prime weights like l ln l, binary weights
like 2**l, so at the same plane index natural embedding distorts least.

Here a repeated text fills each plane of a synthetic cover and the
theoretical and measured figures are compared.
"""

from virtplane import synthesize
from virtplane.metrics import reports_to_csv, sweep, weight_curves
from virtplane.stego import fill_bits

cover = synthesize("random", 96, 96, seed=7)
message = fill_bits(b"sandipan", cover.pixels.size)
reports = sweep(cover, message, ["binary", "fib:1", "prime", "natural"])

print(f"{'system':8s} {'l':>3s} {'W':>4s} {'PSNR worst':>10s} {'PSNR':>8s} {'KL nats':>10s} {'cap':>6s}")
for r in reports:
    print(f"{r.system:8s} {r.plane:3d} {r.weight:4d} {r.psnr_worst_db:10.2f} "
          f"{r.psnr_empirical_db:8.2f} {r.kl_nats:10.2e} {r.capacity_fraction:6.3f}")

###############################################################################
# Weight curves
# -------------
# The three growth rates side by side.

curves = weight_curves(["binary", "prime", "natural"], 16)
for plane in range(16):
    print(plane, *(curves[name][plane] for name in curves))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    for name, w in weight_curves(["prime", "natural"], 23).items():
        ax.plot(w, label=name)
    ax.set_xlabel("plane")
    ax.set_ylabel("weight")
    ax.legend()
    fig.savefig("weights.png")

with open("sweep.csv", "w") as f:
    reports_to_csv(reports, f)
