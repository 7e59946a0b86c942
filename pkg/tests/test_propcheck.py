"""
Tests for propcheck.py - Seeded property campaign
"""
import pytest


def test_small_campaign_passes():
    """A short campaign runs every check and passes"""
    from propcheck import run_campaign

    report = run_campaign(seed=3, count=10, max_n=5)
    assert report.ok, report.to_dict()["violations"]
    assert report.checks["named_instances"] == 1
    assert report.checks["ip"] == 10
    assert report.checks["round_trips"] == 10
    for tag in ("discrete", "strongly-rigid", "pseudorectangle"):
        assert report.checks[f"closure_{tag}"] == 1


def test_campaign_is_deterministic():
    """Equal seeds give equal campaigns"""
    from propcheck import run_campaign

    first = run_campaign(seed=11, count=5, max_n=4).to_dict()
    second = run_campaign(seed=11, count=5, max_n=4).to_dict()
    assert first["checks"] == second["checks"]
    assert first["violations"] == second["violations"]


def test_campaign_on_tiny_spaces():
    """max_n below 4 swaps the pseudorectangle samples for rigid ones"""
    from propcheck import run_campaign

    report = run_campaign(seed=2, count=6, max_n=2)
    assert report.ok
    assert report.checks["closure_pseudorectangle"] == 1


def test_campaign_argument_errors():
    """Sizes and counts are checked before sampling"""
    from construct import BadSize
    from groups import TooLarge
    from propcheck import run_campaign

    with pytest.raises(BadSize):
        run_campaign(seed=1, count=5, max_n=0)
    with pytest.raises(BadSize):
        run_campaign(seed=1, count=-1, max_n=3)
    with pytest.raises(TooLarge):
        run_campaign(seed=1, count=5, max_n=9)


def test_report_collects_violations():
    """Failures are recorded with the offending space instead of raised"""
    from construct import rectangle_345
    from propcheck import CampaignReport

    report = CampaignReport(seed=0, count=0, max_n=1)

    def fails():
        raise AssertionError("broken")

    report.run("demo", fails, rectangle_345())
    report.run("demo", lambda: "message")
    report.run("demo", lambda: None)
    assert not report.ok
    assert report.checks["demo"] == 3
    first, second = report.violations
    assert first.detail == "AssertionError: broken"
    assert first.space["points"] == ["a", "b", "c", "d"]
    assert second.space is None
    assert report.to_dict()["violations"][1]["detail"] == "message"


def test_distinct_sizes_relation():
    """Block sizes 1, 2, 3, ... as far as n allows"""
    from partition import partition_from_relation
    from propcheck import _distinct_sizes_relation

    for n, expected in ((2, [1]), (6, [1, 2, 3]), (9, [1, 2, 3])):
        sizes = sorted(partition_from_relation(_distinct_sizes_relation(n, 4)).sizes())
        assert sizes == expected

