"""Generate the three synthetic network families and measure them.

Run: python3 demos/01_generate_and_measure.py

All three generators are tuned to the same mean degree (<k> ~= 10) so
their epidemic behaviour is directly comparable; what differs is the
degree distribution, and the power-law fit makes that visible.
"""

from netepi.graphs import generate_ba, generate_er, generate_ws, metrics_report

N = 1000

graphs = {
    "Erdos-Renyi      ER(n=1000, p=0.01)": generate_er(N, 0.01, seed=0),
    "Watts-Strogatz   WS(n=1000, k=10, p_rewire=0.1)": generate_ws(N, 10, 0.1, seed=0),
    "Barabasi-Albert  BA(n=1000, m=5)": generate_ba(N, 5, seed=0),
}

for name, g in graphs.items():
    report = metrics_report(g)
    print(name)
    print(f"  edges        : {report['edges']}")
    print(f"  mean degree  : {report['avg_degree']:.2f}")
    print(f"  density      : {report['density']:.4%}")
    exponent = report["power_law_exponent"]
    print(f"  fit exponent : {exponent:.2f}" if exponent else "  fit exponent : n/a")
    print(f"  scale-free   : {report['scale_free']}")
    print()

print("Only the BA graph lands in the scale-free band (2 < exponent < 3);")
print("the homogeneous ER and WS degree distributions decay far faster, so")
print("their fitted exponents are much larger.")
