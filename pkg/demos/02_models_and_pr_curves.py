"""Five risk scorers behind one contract, compared by area under the PR curve.

Both binary framings are evaluated: short-term readmission (<30 days vs the
rest, heavily skewed) and any readmission (<30 or >30 vs never). On skewed
data the PR curve is the informative lens; a scorer at chance sits at the
positive-class prevalence.
"""

import os
import tempfile

import numpy as np

from _common import demo_rows
from readmit.config import RunConfig
from readmit.ingest import write_dataset
from readmit.metrics import pr_curve
from readmit.models import train_model
from readmit.pipeline import prepare
from readmit.preprocess import Task

rows = demo_rows()

# reuse the pipeline's preparation via a throwaway config
path = os.path.join(tempfile.gettempdir(), "readmit_demo_model_input.csv")
write_dataset(rows, path)
config = RunConfig(dataset=path, mappings="unused", seed=1999,
                   forest_trees=60, adaboost_rounds=25, mlp_max_iters=60)
prepared = prepare(config)
train = prepared.dataset.subset_by_ids(prepared.split.train_ids)
test = prepared.dataset.subset_by_ids(prepared.split.test_ids)
print(f"\ntrain {len(train)} / test {len(test)} encounters")

for task in (Task.SHORT_TERM, Task.ANY_READMISSION):
    y_test = test.labels(task)
    print(f"\n=== task: {task.value} (prevalence {np.mean(y_test):.3f}) ===")
    print(f"{'model':<16} {'AUPRC':>7}   first PR points (threshold, recall, precision)")
    for kind in ("naive_bayes", "bayes_net", "random_forest", "adaboost", "mlp"):
        scorer = train_model(kind, train, task, config.seed,
                             config.model_options(kind))
        curve = pr_curve(scorer.score(test), y_test)
        head = "  ".join(f"({t:.2f}, {r:.2f}, {p:.2f})" for t, r, p in curve.points[:3])
        print(f"{kind:<16} {curve.area:>7.4f}   {head}")

print("\nhigher area = better ranking of true readmissions; compare the")
print("models' areas against the chance level (the prevalence above).")
