"""
Model factories for evaluation run history.
"""
import factory

from apps.core.constants import METHOD_BASELINE, METHOD_PROPOSED, REGION_MASKED
from apps.evaluation.models import SweepResult, SweepRun


class SweepRunFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = SweepRun

    seed = factory.Sequence(int)
    trials = 3
    region = REGION_MASKED
    methods = factory.LazyFunction(lambda: [METHOD_PROPOSED, METHOD_BASELINE])
    widths = factory.LazyFunction(lambda: [8, 16, 24])
    n_images = 9
    config = factory.LazyFunction(dict)


class SweepResultFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = SweepResult

    run = factory.SubFactory(SweepRunFactory)
    method = METHOD_PROPOSED
    width = factory.Sequence(lambda n: 7 + n)
    psnr_mean = 30.0
    psnr_std = 1.5
    ssim_mean = 0.9
    ssim_std = 0.02
    trials = 3
