from __future__ import annotations

import numpy as np
import pytest

import swinglab as sl

PRESET_DATA_SEED = 42


def preset_pipeline(data_seed: int = PRESET_DATA_SEED):
    """Run the full extraction over the 14-swing default preset."""
    feats, records = [], []
    for i, arch in enumerate(sl.default_preset(), start=1):
        sid = f"s{i:02d}"
        clip, roi, labels = sl.generate_swing(
            arch, sl.derive_seed(data_seed, "swing", sid), clip_id=sid
        )
        feats.append(sl.extract_swing_features(clip, roi))
        records.extend(labels)
    by_criterion: dict[str, dict[str, str]] = {}
    for r in records:
        by_criterion.setdefault(r.criterion, {})[r.clip_id] = r.label
    return feats, by_criterion


@pytest.fixture(scope="session")
def preset_features():
    """(feature vectors, {criterion: {swing_id: label}}) for the default preset."""
    return preset_pipeline()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
