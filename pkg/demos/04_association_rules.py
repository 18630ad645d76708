"""Class-sensitive association rules: factor groups that travel together.

Apriori mines frequent itemsets inside one readmission class, then every
itemset is profiled on the FULL dataset: how many encounters match it, and
what fraction of the matches fall in each readmission class. Sorting
ascending by the <30 fraction puts the safest rules first and the riskiest
last, which is how the reports read.
"""

from _common import demo_rows
from readmit.rules import class_stats, mine_class_sensitive, transactions_from_raw

rows = demo_rows()
transactions = transactions_from_raw(rows)
print(f"\n{transactions.n_rows} transactions over {len(transactions.items)} "
      f"distinct (feature = value) items")

min_support = max(20, transactions.n_rows // 400)
mined = mine_class_sensitive(transactions, "NO", min_support=min_support, max_len=3)
print(f"mined {len(mined)} itemsets frequent among never-readmitted encounters "
      f"(support >= {min_support})")

stats = class_stats(mined, transactions)
print(f"\n{'itemset':<58} {'<30%':>6} {'>30%':>6} {'NO%':>6} {'total':>7}")
show = stats[:6] + stats[-6:]
for row in show:
    name = str(row.itemset)
    if len(name) > 56:
        name = name[:53] + "..."
    print(f"{name:<58} {100 * row.fraction_lt30:>6.2f} "
          f"{100 * row.fraction_gt30:>6.2f} {100 * row.fraction_no:>6.2f} "
          f"{row.total_matches:>7}")

print("\ntop rows: factor combinations whose matches rarely return early;")
print("bottom rows: combinations with the highest early-readmission fraction.")
