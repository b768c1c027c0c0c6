"""Verifier views for zero-knowledge testing.

A view is the ordered record of everything a (possibly malicious) verifier
sees in a run: prover messages, its own coins, and oracle answers.  Real
and simulated runs drive the same verifier strategy and record views in
the same format, so distributions can be compared bin-for-bin.
"""

from __future__ import annotations

from .transcript import view_key


class View:
    __slots__ = ("items",)

    def __init__(self):
        self.items: list = []

    def msg(self, label: str, payload):
        self.items.append(("msg", label, payload))

    def coin(self, value):
        self.items.append(("coin", int(value)))

    def oracle(self, label: str, kind: str, args, answer: int):
        self.items.append(("oracle", label, kind, tuple(int(a) for a in args), int(answer)))

    def note(self, label: str, payload=None):
        self.items.append(("note", label, payload))

    def key(self) -> str:
        return view_key(self.items)

    def __repr__(self):
        return f"View({len(self.items)} items)"


class ViewedOracle:
    """Oracle adapter that records every answer into a view."""

    def __init__(self, oracle, view: View, label: str | None = None):
        self.oracle = oracle
        self.view = view
        self.label = label if label is not None else oracle.label

    @property
    def field(self):
        return self.oracle.field

    @property
    def m(self):
        return self.oracle.m

    @property
    def distinct_queries(self):
        return self.oracle.distinct_queries

    @property
    def query_log(self):
        return self.oracle.query_log

    def query(self, point) -> int:
        ans = self.oracle.query(point)
        self.view.oracle(self.label, "point", tuple(point), ans)
        return ans

    def prefix_query(self, prefix) -> int:
        ans = self.oracle.prefix_query(prefix)
        self.view.oracle(self.label, "prefix", tuple(prefix), ans)
        return ans


class RecordingChannel:
    """Channel-compatible recorder that mirrors protocol messages into a view
    (and optionally into a real transcript channel).  base_round offsets the
    round indices of nested subprotocols."""

    def __init__(self, view: View, channel=None, prefix: str = "",
                 base_round: int = 0):
        self.view = view
        self.channel = channel
        self.prefix = prefix
        self.base_round = base_round
        self._round = base_round

    def offset(self, k: int, prefix: str | None = None) -> "RecordingChannel":
        return RecordingChannel(self.view, self.channel,
                                self.prefix if prefix is None else prefix,
                                self.base_round + k)

    def set_round(self, r: int):
        self._round = self.base_round + r
        if self.channel is not None:
            self.channel.set_round(self._round)

    def prover_says(self, kind: str, payload):
        self.view.msg(self.prefix + kind, payload)
        if self.channel is not None:
            self.channel.prover_says(kind, payload)

    def verifier_says(self, kind: str, payload):
        # verifier messages are part of its own view only when they are coins;
        # strategies record coins themselves, so only mirror to the transcript
        if self.channel is not None:
            self.channel.verifier_says(kind, payload)

    def note(self, sender: str, payload):
        if self.channel is not None:
            self.channel.note(sender, payload)
