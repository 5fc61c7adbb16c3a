"""Run every exact certification criterion over a small state zoo.

Each criterion returns a certified lower bound on the Schmidt number
together with the margin by which the deciding inequality was beaten.
The zoo covers the interesting regimes: maximal entanglement, white
noise at several strengths, the bound-entangled-flavoured mixture
rho_w whose dimensionality only the stronger criteria see, and a
product state as the null case.
"""

from dimcert import compare_all, isotropic, max_entangled, rho_w
from dimcert.states import PureState
import numpy as np


def product(d):
    vec = np.zeros(d * d, dtype=complex)
    vec[0] = 1.0
    return PureState(d, d, vec).to_density()


zoo = [
    ("max entangled d=3", max_entangled(3).to_density()),
    ("isotropic p=0.25", isotropic(3, 0.25)),
    ("isotropic p=0.60", isotropic(3, 0.60)),
    ("isotropic p=0.90", isotropic(3, 0.90)),
    ("rho_w (4x4)", rho_w()),
    ("product d=3", product(3)),
]

for name, rho in zoo:
    report = compare_all(rho)
    print(f"{name}:  best bound {report.best_bound}")
    for cert in report.certificates:
        extra = f", margin {cert.margin:.4f}" if cert.margin > 0 else ""
        print(f"    {cert.criterion_id:<14} -> {cert.certified_lower_bound}"
              f"{extra}")
    print()
