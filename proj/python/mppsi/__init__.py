# Copyright 2026 The mppsi Authors.
# SPDX-License-Identifier: Apache-2.0
"""Information-theoretic multi-party private set intersection."""

import json

from ._mppsi import (
    MppsiError,
    audit,
    client_privacy,
    cost_table,
    demo,
    demo_names,
    field_size,
    leader_privacy,
    run,
)

__all__ = [
    "MppsiError",
    "audit",
    "client_privacy",
    "cost_table",
    "demo",
    "demo_names",
    "field_size",
    "leader_privacy",
    "make_config",
    "run",
]


def make_config(universe_size, parties, leader=None, seed=0, transport="mem"):
    """Builds a config document.

    `parties` is a list of (databases, elements) pairs; party ids follow the
    list order starting at 1.
    """
    doc = {
        "universe_size": universe_size,
        "parties": [
            {"id": i, "databases": n, "set": sorted(s)}
            for i, (n, s) in enumerate(parties, start=1)
        ],
        "seed": seed,
        "transport": transport,
    }
    if leader is not None:
        doc["leader"] = leader
    return json.dumps(doc)
