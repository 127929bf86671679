"""Shared fixtures and corpus-building helpers."""

from __future__ import annotations

import json

import pytest

from sbrkit.corpus import BugReport, Corpus


def make_report(
    report_id="r1",
    source="other",
    title="crash on login",
    description="stack trace attached",
    label="non-security",
    created_at=None,
    closed_at=None,
):
    return BugReport(
        id=report_id,
        source=source,
        title=title,
        description=description,
        label=label,
        created_at=created_at,
        closed_at=closed_at,
    )


def make_corpus(*reports):
    return Corpus(tuple(reports))


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    return path


def record(report_id, label="non-security", **overrides):
    base = {
        "id": report_id,
        "source": "other",
        "title": f"title {report_id}",
        "description": f"description {report_id}",
        "label": label,
        "created_at": None,
        "closed_at": None,
    }
    base.update(overrides)
    return base


@pytest.fixture(scope="session")
def signal_corpus():
    """Small corpus whose classes are separated perfectly by one token."""
    reports = []
    for i in range(30):
        reports.append(
            make_report(
                report_id=f"sec-{i}",
                title=f"daemon breach window{i % 7}",
                description=f"handler breach path{i % 5} widget{i % 3}",
                label="security",
            )
        )
    for i in range(70):
        reports.append(
            make_report(
                report_id=f"non-{i}",
                title=f"daemon window{i % 7} flicker",
                description=f"handler path{i % 5} widget{i % 3} cosmetic",
                label="non-security",
            )
        )
    return make_corpus(*reports)
