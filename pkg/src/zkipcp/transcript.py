"""Protocol transcripts: typed ordered events, canonical serialization,
byte-identical replay from (parameters, seed).

Events carry plain data (ints, tuples, lists, strings); serialization is
line-oriented JSON with sorted keys, so equal transcripts serialize to
equal bytes.
"""

from __future__ import annotations

import hashlib
import json

FORMAT_VERSION = 1

# payload kinds
ORACLE_SEND = "oracle-send"
SCALAR = "scalar"
POLY = "polynomial"
CHALLENGE = "challenge"
POINT = "point"
ABORT = "abort"
VERDICT = "verdict"
OUTPUT_CLAIM = "output-claim"
NOTE = "note"


class TranscriptError(ValueError):
    pass


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in sorted(v.items())}
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if hasattr(v, "item"):  # numpy scalar
        return int(v)
    raise TranscriptError(f"cannot serialize payload of type {type(v).__name__}")


class Transcript:
    """Ordered protocol record with a header and typed events."""

    def __init__(self, protocol: str, params: dict | None = None, seed=None):
        self.protocol = protocol
        self.params = _plain(params or {})
        self.seed = seed if seed is None or isinstance(seed, (int, str)) else str(seed)
        self.events: list[dict] = []
        self.verdict = None
        self.output_claims: list = []

    def append(self, sender: str, kind: str, payload, *, channel: str = "main",
               round_index: int | None = None):
        ev = {
            "i": len(self.events),
            "sender": sender,
            "channel": channel,
            "kind": kind,
            "payload": _plain(payload),
        }
        if round_index is not None:
            ev["round"] = round_index
        self.events.append(ev)
        if kind == VERDICT:
            self.verdict = payload
        if kind == OUTPUT_CLAIM:
            self.output_claims.append(payload)
        return ev

    def rounds(self) -> int:
        """Number of interaction rounds (round indices are 1-based; oracle
        sends and setup happen at round 0)."""
        seen = [e.get("round") for e in self.events if e.get("round") is not None]
        return max(seen) if seen else 0

    # -- serialization ------------------------------------------------------

    def to_bytes(self) -> bytes:
        head = {
            "version": FORMAT_VERSION,
            "protocol": self.protocol,
            "params": self.params,
            "seed": self.seed,
            "events": len(self.events),
        }
        lines = [json.dumps(head, sort_keys=True, separators=(",", ":"))]
        for ev in self.events:
            lines.append(json.dumps(ev, sort_keys=True, separators=(",", ":")))
        return ("\n".join(lines) + "\n").encode()

    @staticmethod
    def from_bytes(data: bytes) -> "Transcript":
        lines = data.decode().splitlines()
        if not lines:
            raise TranscriptError("empty transcript")
        try:
            head = json.loads(lines[0])
        except json.JSONDecodeError as e:
            raise TranscriptError(f"corrupt header: {e}")
        if head.get("version") != FORMAT_VERSION:
            raise TranscriptError(f"unsupported version {head.get('version')}")
        t = Transcript(head["protocol"], head["params"], head.get("seed"))
        want = head["events"]
        if len(lines) - 1 != want:
            raise TranscriptError(
                f"truncated transcript: header says {want} events, found {len(lines) - 1}")
        for i, line in enumerate(lines[1:]):
            try:
                ev = json.loads(line)
            except json.JSONDecodeError:
                raise TranscriptError(f"corrupt payload at event {i}")
            if ev.get("i") != i:
                raise TranscriptError(f"event index mismatch at event {i}")
            t.events.append(ev)
            if ev["kind"] == VERDICT:
                t.verdict = ev["payload"]
            if ev["kind"] == OUTPUT_CLAIM:
                t.output_claims.append(ev["payload"])
        return t

    def digest(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()

    def __eq__(self, other):
        return isinstance(other, Transcript) and self.to_bytes() == other.to_bytes()


class Channel:
    """A verifier<->prover message queue that records into a transcript.

    One channel per prover; the verifier is the only cross-channel
    synchronization point.  There is deliberately no prover-to-prover send.
    """

    def __init__(self, transcript: Transcript, name: str = "main"):
        self.transcript = transcript
        self.name = name
        self._round = 0

    def set_round(self, r: int):
        self._round = r

    def prover_says(self, kind: str, payload):
        return self.transcript.append("prover", kind, payload,
                                      channel=self.name, round_index=self._round)

    def verifier_says(self, kind: str, payload):
        return self.transcript.append("verifier", kind, payload,
                                      channel=self.name, round_index=self._round)

    def note(self, sender: str, payload):
        return self.transcript.append(sender, NOTE, payload, channel=self.name)


def view_key(view) -> str:
    """Canonical hashable key for a verifier view (for binning/equality)."""
    return json.dumps(_plain(view), sort_keys=True, separators=(",", ":"))
