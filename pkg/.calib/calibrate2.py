import json
import numpy as np
from symest import cells_from_bits, simulate_symbolic, RngStream, GibbsConfig
from symest.grid_search import GridSpec, evaluate_grid, zoom
from symest.errors import GridEdgeError

bits = simulate_symbolic(-1.71, 0.8, 1000)
data = cells_from_bits(bits[:600].copy())
config = GibbsConfig()

def manual_zoom(seed, levels=3):
    grid = GridSpec(-1.5, -0.045, 12)
    rng = RngStream(seed)
    out = {"seed": seed, "levels": []}
    for level in range(1, levels + 1):
        table = evaluate_grid(grid, data, config, rng, level=level)
        rows = [(r.theta, r.best_ces, r.y0) for r in table]
        best = int(np.argmax([r[1] for r in rows]))
        out["levels"].append({"rows": rows, "best": best})
        print(f"seed {seed} level {level}: argmax={rows[best][0]:.6f} ces={rows[best][1]}", flush=True)
        if level < levels:
            try:
                grid = zoom(grid, best)
            except GridEdgeError as e:
                out["edge_error"] = f"level {level} argmax index {best}"
                print(f"seed {seed}: EDGE at level {level} index {best}", flush=True)
                return out
    return out

results = [manual_zoom(s) for s in (4, 5)]
with open('/root/pkg/.calib/calib2.json', 'w') as fh:
    json.dump(results, fh, indent=1)
print("DONE", flush=True)
