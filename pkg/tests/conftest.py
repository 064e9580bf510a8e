import os
import random
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from linctx.generate import LPCF_TYPES, NLPCF_TYPES, GenConfig, RandomGenerator  # noqa: E402

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@st.composite
def typed_terms(draw, fragment="NLPCF", max_size=10, types=None):
    """(term, type) pairs from the package generator, seeded by hypothesis."""
    types = types or (NLPCF_TYPES if fragment == "NLPCF" else LPCF_TYPES)
    ty = draw(st.sampled_from(types))
    seed = draw(st.integers(0, 2**32 - 1))
    size = draw(st.integers(3, max_size))
    cfg = GenConfig(seed=seed, max_size=size, fragment=fragment)
    return RandomGenerator(cfg, random.Random(seed)).term(ty), ty


@st.composite
def programs(draw, fragment="NLPCF", max_size=10):
    return draw(typed_terms(fragment, max_size))[0]
