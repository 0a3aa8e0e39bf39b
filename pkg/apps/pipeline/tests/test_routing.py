"""
Tests for strip routing.
"""
from apps.pipeline.config import PipelineConfig
from apps.pipeline.routing import StripKind, classify, route_strips


def spans(plan):
    return [(s.start, s.stop, s.kind) for s in plan]


def test_classification_threshold():
    cfg = PipelineConfig()
    assert classify(7, cfg) == StripKind.NARROW
    assert classify(8, cfg) == StripKind.WIDE
    assert classify(20, cfg.evolve(multiscale=False)) == StripKind.NARROW


def test_strips_cover_the_image(make_mask):
    plan = route_strips(make_mask(200, 16, [(20, 5), (100, 12)]), PipelineConfig())

    assert spans(plan) == [
        (0, 12, StripKind.CLEAN),
        (12, 33, StripKind.NARROW),
        (33, 92, StripKind.CLEAN),
        (92, 120, StripKind.WIDE),
        (120, 200, StripKind.CLEAN),
    ]
    assert plan.shadow_counts() == {'narrow': 1, 'wide': 1}
    assert sum(s.width for s in plan) == 200


def test_overlapping_strips_merge_to_wider_class(make_mask):
    plan = route_strips(make_mask(200, 16, [(20, 5), (35, 10)]), PipelineConfig())

    wide = plan.of_kind(StripKind.WIDE)
    assert [(s.start, s.stop) for s in wide] == [(12, 53)]
    assert wide[0].shadows == ((20, 5), (35, 10))
    assert plan.of_kind(StripKind.NARROW) == []
    assert plan.shadow_counts() == {'narrow': 0, 'wide': 2}


def test_margin_clipped_at_edges(make_mask):
    plan = route_strips(make_mask(40, 8, [(0, 3), (36, 4)]), PipelineConfig())
    assert spans(plan) == [
        (0, 11, StripKind.NARROW),
        (11, 28, StripKind.CLEAN),
        (28, 40, StripKind.NARROW),
    ]


def test_clean_mask_is_one_strip(make_mask):
    plan = route_strips(make_mask(50, 8, []), PipelineConfig())
    assert spans(plan) == [(0, 50, StripKind.CLEAN)]
    assert plan.shadow_counts() == {'narrow': 0, 'wide': 0}


def test_routing_follows_shifted_shadows(make_mask):
    cfg = PipelineConfig()
    base = route_strips(make_mask(200, 16, [(20, 5), (100, 12)]), cfg)
    shifted = route_strips(make_mask(200, 16, [(25, 5), (105, 12)]), cfg)

    def shadow_spans(plan, offset=0):
        return [
            (s.start + offset, s.stop + offset, s.kind, tuple((a + offset, w) for a, w in s.shadows))
            for s in plan if s.kind != StripKind.CLEAN
        ]

    assert shadow_spans(shifted) == shadow_spans(base, offset=5)
