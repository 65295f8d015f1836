import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_image(rng, h, w):
    return rng.integers(0, 256, (h, w, 3), dtype=np.uint8)


def block_saliency(h, w, y0, y1, x0, x1):
    """Saliency map that binarizes exactly to the given rectangle."""
    sal = np.zeros((h, w))
    sal[y0:y1, x0:x1] = 1.0
    return sal
