"""Grade filtering and deterministic balanced train/test splitting."""

import numpy as np

from ..errors import InsufficientMinorityClass
from .manifest import DatasetManifest, Grade, ImageRecord, Label, Split


def filter_by_grade(manifest: DatasetManifest) -> DatasetManifest:
    """Drop REJECT-graded records; idempotent."""
    kept = [r for r in manifest.records if r.grade is not Grade.REJECT]
    return DatasetManifest(records=kept, seed=manifest.seed)


def _allocate_quota(counts: list[int], total: int) -> list[int]:
    """Largest-remainder apportionment of `total` over `counts`, capped per bin."""
    pool = sum(counts)
    if pool == 0:
        return [0] * len(counts)
    raw = [total * c / pool for c in counts]
    quota = [min(int(q), c) for q, c in zip(raw, counts)]
    remainders = sorted(
        range(len(counts)),
        key=lambda i: (raw[i] - int(raw[i]), counts[i]),
        reverse=True,
    )
    short = total - sum(quota)
    idx = 0
    while short > 0 and idx < 10 * len(counts):
        i = remainders[idx % len(counts)]
        if quota[i] < counts[i]:
            quota[i] += 1
            short -= 1
        idx += 1
    return quota


def build_splits(
    manifests: list[DatasetManifest],
    seed: int,
    test_per_class: int = 105,
) -> DatasetManifest:
    """Merge manifests and hold out a balanced, dataset-stratified test set.

    The test set takes exactly `test_per_class` records of each label, with
    per-source-dataset quotas proportional to each dataset's share of the
    eligible pool; everything else becomes TRAIN. Deterministic under seed.
    """
    records = [r for m in manifests for r in m.records]
    merged = filter_by_grade(DatasetManifest(records=records, seed=seed))
    rng = np.random.default_rng(seed)

    test_ids: set[str] = set()
    for label in (Label.AMD, Label.NON_AMD):
        eligible = sorted(merged.subset(label=label), key=lambda r: r.id)
        if len(eligible) < test_per_class:
            raise InsufficientMinorityClass(
                f"{label.value}: {len(eligible)} eligible records cannot fill a "
                f"test set of {test_per_class}"
            )
        sources = sorted({r.source_dataset for r in eligible}, key=lambda s: s.value)
        per_source = [[r for r in eligible if r.source_dataset == s] for s in sources]
        quotas = _allocate_quota([len(g) for g in per_source], test_per_class)
        for group, quota in zip(per_source, quotas):
            picks = rng.choice(len(group), size=quota, replace=False)
            test_ids.update(group[i].id for i in picks)

    out: list[ImageRecord] = []
    for r in merged.records:
        out.append(r.with_split(Split.TEST if r.id in test_ids else Split.TRAIN))
    return DatasetManifest(records=out, seed=seed)
