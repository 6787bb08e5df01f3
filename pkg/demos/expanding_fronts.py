"""Watch reachable sets grow in a heterogeneous medium.

Runs the front engine on a 1-d sine-modulated speed field and on a 2-d
time-dependent one, then checks the computed sets against the only bounds
that hold universally: balls of radius alpha*t and beta*t.
"""

import numpy as np

from frontlab import EnvironmentSpec, Mode, build_environment, reach

sine = build_environment(
    EnvironmentSpec(dim=1, kind="periodic", alpha=1.0, beta=3.0,
                    modes=(Mode(freq=(1,), amplitude=1.0, phase=-np.pi / 2),)))

print("1-d medium: a(x) = 2 + sin(2 pi x), front started at x = 0")
print(f"{'t':>5} {'left':>9} {'right':>9} {'alpha*t':>9} {'beta*t':>9}")
for t in (0.5, 1.0, 2.0, 4.0):
    res = reach(sine, np.array([0.0]), 0.0, t, h=1 / 64)
    lft, rgt = res.endpoints()
    print(f"{t:5.1f} {lft:9.4f} {rgt:9.4f} {t * sine.alpha:9.4f} "
          f"{t * sine.beta:9.4f}")
print("endpoints stay between the two cones, closer to the slow one on the")
print("left of the period and the fast one on the right\n")

wavy = build_environment(
    EnvironmentSpec(dim=2, kind="periodic", alpha=1.0, beta=3.0,
                    modes=(Mode(freq=(1, 0), amplitude=0.5, phase=0.3,
                                tfreq=1, tphase=0.7),
                           Mode(freq=(0, 1), amplitude=0.5, phase=1.1,
                                tfreq=2, tphase=0.2))))

t = 1.5
res = reach(wavy, np.zeros(2), 0.0, t, h=1 / 32)
pts = res.grid.occupied_points()
radii = np.linalg.norm(pts, axis=1)
print(f"2-d time-dependent medium, t={t}: {res.grid.count} cells")
print(f"radius range [{radii.min():.3f}, {radii.max():.3f}], "
      f"speed cones give [{t * wavy.alpha}, {t * wavy.beta}]")

# coarse ASCII picture of the occupancy, cropped to the front itself
occ = res.grid.occ
rows = np.nonzero(occ.any(axis=1))[0]
cols = np.nonzero(occ.any(axis=0))[0]
occ = occ[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1]
step = max(occ.shape[0] // 32, 1)
print("\nfront footprint (low resolution):")
for i in range(0, occ.shape[0], step):
    row = occ[i, ::step]
    print("".join("#" if c else "." for c in row))
