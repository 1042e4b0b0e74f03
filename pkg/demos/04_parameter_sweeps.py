"""Sweep the ensemble's three knobs and watch the trade-offs: more nets buy
accuracy at linear cost, training time grows linearly with epochs, and extra
features per member stop paying past about half the feature count.

    python3 demos/04_parameter_sweeps.py      (takes a minute or two)
"""

from deepbalance.data import generate_synthetic
from deepbalance.experiment import DeepBalanceMethod, run_sweep

data = generate_synthetic(n_majority=2000, n_minority=200, d=10, class_separation=1.0, seed=0)
base = DeepBalanceMethod(mtry=5, total_nets=5, max_it=50)
seeds = (1, 2, 3)


def show(title, rows):
    print(f"\n{title}")
    print(f"{'value':>6} {'mean auc':>9} {'sd':>7} {'train s':>8}")
    for row in rows:
        print(f"{row.value:>6} {row.mean_auc:>9.4f} {row.sd_auc:>7.4f} "
              f"{row.mean_train_seconds:>8.3f}")


# ensemble width: AUC climbs with diminishing returns, time is linear
show("total_nets 1..10", run_sweep(data, base, "total_nets", list(range(1, 11)), seeds))

# epochs: accuracy saturates once converged, time keeps growing linearly
show("max_it 20..100", run_sweep(data, base, "max_it", [20, 40, 60, 80, 100], seeds))

# features per member: half the columns already captures the signal
show("mtry 1..10", run_sweep(data, base, "mtry", list(range(1, 11)), seeds))
