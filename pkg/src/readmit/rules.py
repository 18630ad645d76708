"""Apriori frequent-itemset mining over nominal features with class-wise stats.

Items are (feature, value) pairs from the nominal features only; diagnoses
use their disease-group value. Transactions are built straight from raw rows
without row filtering so class-wise match counts are computed on the same
full-dataset basis as the published tables; a missing field simply
contributes no item. Rules are reported as itemsets with per-class match
fractions (the fractions double as the classical confidence of
itemset => class).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .ingest import RawEncounter, READMITTED_VALUES
from .preprocess import Dataset, FEATURE_KINDS, _nominal_value

ARM_FEATURES = tuple(name for name, kind in FEATURE_KINDS if kind == "nominal")

CLASS_READMITTED = "READMITTED"  # union of "<30" and ">30"
RULE_CLASSES = READMITTED_VALUES + (CLASS_READMITTED,)


@dataclass(frozen=True, order=True)
class Item:
    feature: str
    value: str

    def __str__(self) -> str:
        return f"{self.feature}={self.value}"


@dataclass(frozen=True)
class ItemSet:
    """Sorted items (one per feature) with their support in the mined rows."""

    items: tuple[Item, ...]
    support_count: int

    def __str__(self) -> str:
        return "; ".join(str(i) for i in self.items)


@dataclass(frozen=True)
class ClassRuleStats:
    itemset: ItemSet
    total_matches: int  # matches over the full dataset
    fraction_lt30: float
    fraction_gt30: float
    fraction_no: float


class Transactions:
    """Item universe + per-item row masks over one dataset."""

    def __init__(self, item_values: dict[str, list[str | None]],
                 readmitted: np.ndarray):
        self.readmitted = np.asarray(readmitted, dtype=np.uint8)
        self.n_rows = len(self.readmitted)
        self.items: list[Item] = []
        self.feature_of: list[str] = []
        masks = []
        for feature in ARM_FEATURES:
            column = item_values[feature]
            observed = sorted({v for v in column if v is not None})
            arr = np.array([v if v is not None else "" for v in column])
            for value in observed:
                self.items.append(Item(feature, value))
                self.feature_of.append(feature)
                masks.append(arr == value)
        self.masks = np.array(masks) if masks else np.zeros((0, self.n_rows), dtype=bool)
        self._index = {item: i for i, item in enumerate(self.items)}

    def item_id(self, feature: str, value: str) -> int:
        try:
            return self._index[Item(feature, value)]
        except KeyError:
            raise DataError(f"unknown item {feature}={value}") from None

    def itemset_mask(self, item_ids: tuple[int, ...]) -> np.ndarray:
        mask = self.masks[item_ids[0]].copy()
        for i in item_ids[1:]:
            mask &= self.masks[i]
        return mask

    def class_mask(self, class_name: str) -> np.ndarray:
        if class_name == CLASS_READMITTED:
            return self.readmitted != READMITTED_VALUES.index("NO")
        if class_name in READMITTED_VALUES:
            return self.readmitted == READMITTED_VALUES.index(class_name)
        raise DataError(f"unknown readmission class {class_name!r}; "
                        f"expected one of {RULE_CLASSES}")


def transactions_from_raw(rows: list[RawEncounter]) -> Transactions:
    """Build transactions from unfiltered raw rows (missing values skipped)."""
    item_values: dict[str, list[str | None]] = {f: [] for f in ARM_FEATURES}
    readmitted = np.empty(len(rows), dtype=np.uint8)
    for i, row in enumerate(rows):
        readmitted[i] = READMITTED_VALUES.index(row.readmitted)
        for feature in ARM_FEATURES:
            item_values[feature].append(_nominal_value(row, feature))
    return Transactions(item_values, readmitted)


def transactions_from_dataset(dataset: Dataset) -> Transactions:
    """Build transactions from an encoded dataset (nominal features only)."""
    item_values: dict[str, list[str | None]] = {}
    for j, feature in enumerate(dataset.schema.features):
        if feature.kind != "nominal":
            continue
        codes = dataset.values[:, j].astype(np.int64)
        item_values[feature.name] = [feature.values[c] for c in codes]
    return Transactions(item_values, dataset.readmitted)


def mine_frequent(transactions: Transactions, min_support: int,
                  max_len: int, row_mask: np.ndarray | None = None) -> list[ItemSet]:
    """All itemsets of size <= max_len with support >= min_support.

    Level-wise Apriori: candidates are generated by joining frequent
    (k-1)-sets and pruned by downward closure before counting. Items of the
    same feature never co-occur, so candidates mixing values of one feature
    are skipped outright.
    """
    if min_support < 1:
        raise DataError("mine_frequent: min_support must be >= 1")
    if max_len < 1:
        raise DataError("mine_frequent: max_len must be >= 1")
    masks = transactions.masks if row_mask is None else transactions.masks & row_mask
    supports = masks.sum(axis=1)

    result: list[ItemSet] = []
    current: dict[tuple[int, ...], int] = {}
    for i in range(len(transactions.items)):
        if supports[i] >= min_support:
            current[(i,)] = int(supports[i])
    level = 1
    while current and level < max_len:
        for ids, support in sorted(current.items()):
            result.append(ItemSet(tuple(transactions.items[i] for i in ids), support))
        frequent = set(current)
        keys = sorted(current)
        candidates: list[tuple[int, ...]] = []
        for a in range(len(keys)):
            for b in range(a + 1, len(keys)):
                if keys[a][:-1] != keys[b][:-1]:
                    break  # keys are sorted: no later b shares the prefix
                cand = keys[a] + (keys[b][-1],)
                if transactions.feature_of[cand[-1]] == transactions.feature_of[cand[-2]]:
                    continue
                if level >= 2 and any(
                    cand[:j] + cand[j + 1:] not in frequent for j in range(len(cand) - 2)
                ):
                    continue  # downward closure: some (k-1)-subset is infrequent
                candidates.append(cand)
        current = {}
        for cand in candidates:
            mask = masks[cand[0]].copy()
            for i in cand[1:]:
                mask &= masks[i]
            support = int(np.count_nonzero(mask))
            if support >= min_support:
                current[cand] = support
        level += 1
    for ids, support in sorted(current.items()):
        result.append(ItemSet(tuple(transactions.items[i] for i in ids), support))
    return result


def class_stats(itemsets: list[ItemSet], transactions: Transactions) -> list[ClassRuleStats]:
    """Full-dataset matches and class fractions per itemset, sorted ascending
    by the fraction readmitted within 30 days (lowest-risk rules first)."""
    lt30 = transactions.class_mask("<30")
    gt30 = transactions.class_mask(">30")
    out = []
    for itemset in itemsets:
        ids = tuple(transactions.item_id(i.feature, i.value) for i in itemset.items)
        mask = transactions.itemset_mask(ids)
        total = int(np.count_nonzero(mask))
        if total == 0:
            continue  # cannot happen for itemsets mined from these transactions
        n_lt = int(np.count_nonzero(mask & lt30))
        n_gt = int(np.count_nonzero(mask & gt30))
        out.append(ClassRuleStats(
            itemset, total,
            n_lt / total, n_gt / total, (total - n_lt - n_gt) / total,
        ))
    out.sort(key=lambda r: (r.fraction_lt30, str(r.itemset)))
    return out


def mine_class_sensitive(transactions: Transactions, class_name: str,
                         min_support: int, max_len: int) -> list[ItemSet]:
    """Apriori restricted to one readmission class' rows.

    Support counts are within the class subset; combine with class_stats for
    full-dataset fractions.
    """
    mask = transactions.class_mask(class_name)
    if not mask.any():
        raise DataError(f"mine_class_sensitive: no rows in class {class_name!r}")
    return mine_frequent(transactions, min_support, max_len, row_mask=mask)
