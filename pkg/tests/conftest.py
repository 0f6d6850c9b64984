import logging

import pytest

from scenenav.dataset import DatasetManifest, build_dataset

logging.getLogger("scenenav").setLevel(logging.ERROR)


@pytest.fixture(scope="session")
def small_dataset():
    """200 scenes (3 and 5 objects), 5 simple + 5 complex each."""
    return build_dataset(DatasetManifest(seed=99, n_scenes=200, object_counts=(3, 5)))
