import numpy as np
from symest import cells_from_bits, simulate_symbolic, RngStream, GibbsConfig
from symest.strength_mcmc import run_strength_chain

bits = simulate_symbolic(-1.71, 0.8, 1000)
data = cells_from_bits(bits[:600].copy())
config = GibbsConfig()
pairs = {
    "level2 contenders": (-1.7290909090909092, -1.7127272727272727),
    "level3 contenders": (-1.710495867768595, -1.70900826446281),
}
for label, (ta, tb) in pairs.items():
    for theta in (ta, tb):
        ces = [run_strength_chain(theta, data, config, RngStream(7000 + i, 0)).best_ces
               for i in range(4)]
        print(f"{label} theta={theta:.6f} |err|={abs(theta+1.71):.2e} "
              f"ces={ces} mean={np.mean(ces):.0f} sd={np.std(ces):.0f}", flush=True)
