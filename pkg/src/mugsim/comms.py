"""Line-of-sight RF links, short-range acoustic commands, and store-and-forward relaying.

Nodes carry their own geometry (set by the engine each tick): position is
(x east, y north, z up) in meters with z negative underwater, and
antenna_height is the RF antenna elevation above the sea surface (0 while
submerged, which kills RF). Telemetry is delivered at-least-once: origins
retain unacked messages and retransmit; receivers suppress duplicates by
message id.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

HORIZON_COEFF = 3570.0      # m per sqrt(m), 4/3-earth radio horizon
SOUND_SPEED = 1500.0        # m/s
ACOUSTIC_RANGE_DEFAULT = 300.0
ACOUSTIC_MAX_PAYLOAD = 32   # bytes, simple commands only
QUEUE_CAPACITY_DEFAULT = 10_000
ACK_PAYLOAD_SIZE = 16


class MsgKind(str, Enum):
    TELEMETRY = "telemetry"
    COMMAND = "command"
    ACK = "ack"


@dataclass
class Message:
    origin: str
    seq: int
    kind: MsgKind
    dest: str
    payload_size: int
    created_at: float
    hops: list[str] = field(default_factory=list)
    delivered_at: Optional[float] = None
    payload: Optional[dict] = None
    ack_for: Optional[tuple[str, int]] = None

    def __post_init__(self) -> None:
        if not self.hops:
            self.hops = [self.origin]

    @property
    def msg_id(self) -> tuple[str, int]:
        return (self.origin, self.seq)

    def clone_for_retry(self) -> "Message":
        return Message(
            origin=self.origin,
            seq=self.seq,
            kind=self.kind,
            dest=self.dest,
            payload_size=self.payload_size,
            created_at=self.created_at,
            hops=[self.origin],
            payload=self.payload,
            ack_for=self.ack_for,
        )


@dataclass
class RadioNode:
    node_id: str
    antenna_height: float = 0.0   # m above surface; 0 means no RF
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    frequency: float = 433e6      # Hz, informational
    bandwidth: float = 2400.0     # bytes/s
    powered: bool = True
    is_relay: bool = False        # accepts traffic for later forwarding (UAV)
    underwater_capable: bool = False  # has an acoustic modem
    queue_capacity: int = QUEUE_CAPACITY_DEFAULT
    retry_interval: float = 120.0  # s between retransmissions of unacked telemetry
    queue: deque = field(default_factory=deque)
    retained: dict = field(default_factory=dict)   # msg_id -> (Message, last_tx)
    seen: set = field(default_factory=set)         # msg_ids ever accepted here
    _seq: int = 0

    def next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def queue_depth(self) -> int:
        return len(self.queue)


@dataclass(frozen=True)
class LinkState:
    endpoints: tuple[str, str]
    available: bool
    distance: float
    horizon: float


@dataclass(frozen=True)
class CommEvent:
    time: float
    event: str   # delivered | dropped | duplicate | acoustic | retry | shore
    msg_id: tuple[str, int]
    kind: str
    origin: str
    dest: str
    hops: tuple[str, ...] = ()
    detail: str = ""


@dataclass
class MessageRecord:
    created_at: float
    origin: str
    dest: str
    kind: MsgKind
    delivered_at: Optional[float] = None


class CommsLedger:
    """World-level registry of every message ever created."""

    def __init__(self) -> None:
        self.records: dict[tuple[str, int], MessageRecord] = {}
        self.created = 0
        self.delivered = 0
        self.duplicates = 0
        self.drop_events = 0

    def register(self, msg: Message) -> None:
        if msg.msg_id in self.records:
            raise ValueError(f"duplicate message id {msg.msg_id}")
        self.records[msg.msg_id] = MessageRecord(
            msg.created_at, msg.origin, msg.dest, msg.kind
        )
        self.created += 1

    def mark_delivered(self, msg: Message, now: float) -> bool:
        """Record first delivery; returns False for a duplicate arrival."""
        rec = self.records[msg.msg_id]
        if rec.delivered_at is not None:
            self.duplicates += 1
            return False
        rec.delivered_at = now
        self.delivered += 1
        return True


def distance_3d(a: tuple[float, float, float], b: tuple[float, float, float]) -> float:
    return math.sqrt(
        (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2
    )


def radio_horizon(h1: float, h2: float) -> float:
    """Maximum line-of-sight range (m) for antenna heights h1, h2 (m)."""
    if h1 < 0 or h2 < 0:
        raise ValueError("antenna heights must be >= 0")
    return HORIZON_COEFF * (math.sqrt(h1) + math.sqrt(h2))


def link_available(a: RadioNode, b: RadioNode) -> LinkState:
    """Instantaneous RF link state between two nodes.

    A link exists when both nodes are powered, both antennas are above the
    surface, and the 3-D separation is within the mutual radio horizon.
    """
    dist = distance_3d(a.position, b.position)
    horizon = radio_horizon(max(a.antenna_height, 0.0), max(b.antenna_height, 0.0))
    ok = (
        a.powered
        and b.powered
        and a.antenna_height > 0.0
        and b.antenna_height > 0.0
        and dist <= horizon
    )
    return LinkState((a.node_id, b.node_id), ok, dist, horizon)


def acoustic_command(
    sender: RadioNode,
    receiver: RadioNode,
    payload_size: int,
    acoustic_range: float = ACOUSTIC_RANGE_DEFAULT,
    dt: float = 1.0,
) -> tuple[bool, int]:
    """Short-range command channel; works at any depth within range.

    Returns (delivered, latency in whole ticks). Oversized payloads are
    rejected outright.
    """
    if payload_size > ACOUSTIC_MAX_PAYLOAD:
        raise ValueError(
            f"acoustic payload {payload_size} exceeds {ACOUSTIC_MAX_PAYLOAD} bytes"
        )
    if not (sender.underwater_capable and receiver.underwater_capable):
        return (False, 0)
    dist = distance_3d(sender.position, receiver.position)
    if dist > acoustic_range:
        return (False, 0)
    latency_ticks = max(1, math.ceil(dist / SOUND_SPEED / dt))
    return (True, latency_ticks)


def available_links(
    nodes: dict[str, RadioNode],
    rng=None,
    dropout: float = 0.0,
) -> dict[tuple[str, str], LinkState]:
    """All currently-available unordered links, keyed by sorted id pair.

    When dropout is enabled, one Bernoulli draw is made per otherwise
    available link, in sorted pair order (documented RNG draw order).
    """
    ids = sorted(nodes)
    links: dict[tuple[str, str], LinkState] = {}
    for i, a_id in enumerate(ids):
        a = nodes[a_id]
        if not a.powered or a.antenna_height <= 0.0:
            continue
        for b_id in ids[i + 1:]:
            b = nodes[b_id]
            if not b.powered or b.antenna_height <= 0.0:
                continue
            state = link_available(a, b)
            if state.available and dropout > 0.0 and rng is not None:
                if rng.random() < dropout:
                    state = LinkState(state.endpoints, False, state.distance, state.horizon)
            if state.available:
                links[(a_id, b_id)] = state
    return links


def connectivity_oracle(nodes: dict[str, RadioNode]) -> set:
    """Brute-force deliverable (src, dst) pairs via at most one relay.

    Uses link_available only; this is the independent reference the
    store-and-forward step is tested against.
    """
    ids = sorted(nodes)
    direct = set()
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if link_available(nodes[a], nodes[b]).available:
                direct.add((a, b))
                direct.add((b, a))
    deliverable = set(direct)
    for s in ids:
        for d in ids:
            if s == d or (s, d) in deliverable:
                continue
            for mid in ids:
                if mid in (s, d):
                    continue
                if (s, mid) in direct and (mid, d) in direct:
                    deliverable.add((s, d))
                    break
    return deliverable


def enqueue_new(node: RadioNode, msg: Message, ledger: CommsLedger, events: list) -> None:
    """Create a message at its origin node (registers it in the ledger)."""
    ledger.register(msg)
    node.seen.add(msg.msg_id)
    _enqueue(node, msg, ledger, events, msg.created_at)


def _enqueue(node: RadioNode, msg: Message, ledger: CommsLedger, events: list, now: float) -> None:
    if len(node.queue) >= node.queue_capacity:
        victim = node.queue.popleft()
        ledger.drop_events += 1
        events.append(
            CommEvent(now, "dropped", victim.msg_id, victim.kind.value,
                      victim.origin, victim.dest, tuple(victim.hops),
                      f"queue overflow at {node.node_id}")
        )
    node.queue.append(msg)


def _pick_target(
    msg: Message,
    sender: RadioNode,
    neighbor_ids: list,
    nodes: dict[str, RadioNode],
) -> Optional[str]:
    """Next hop for a message, or None to hold it.

    Priority: the destination itself; then (from the origin only) a neighbor
    that can currently reach the destination; then a designated relay for
    dynamic ferrying. A message that already took one relay hop waits for its
    destination: routing is single-relay by design.
    """
    if msg.dest in neighbor_ids:
        return msg.dest
    if len(msg.hops) > 1:
        return None
    dest_node = nodes.get(msg.dest)
    for nid in neighbor_ids:
        if nid in msg.hops or nid == msg.origin:
            continue
        if dest_node is not None and link_available(nodes[nid], dest_node).available:
            return nid
    for nid in neighbor_ids:
        if nid in msg.hops or nid == msg.origin:
            continue
        if nodes[nid].is_relay:
            return nid
    return None


def comms_step(
    nodes: dict[str, RadioNode],
    dt: float,
    now: float,
    ledger: CommsLedger,
    rng=None,
    dropout: float = 0.0,
) -> list:
    """One network tick: per-link bandwidth-limited transfers plus retries.

    Transfers preserve queue order per link, never exceed bandwidth*dt bytes
    per link per tick, and suppress duplicates by message id. Delivered
    telemetry generates an opportunistic ack back to the origin; origins
    retain telemetry until acked and retransmit on a timer.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    events: list[CommEvent] = []
    links = available_links(nodes, rng=rng, dropout=dropout)
    if not links:
        return events

    neighbors: dict[str, list] = {nid: [] for nid in nodes}
    budget: dict[tuple[str, str], float] = {}
    for (a_id, b_id), state in links.items():
        neighbors[a_id].append(b_id)
        neighbors[b_id].append(a_id)
        budget[(a_id, b_id)] = min(nodes[a_id].bandwidth, nodes[b_id].bandwidth) * dt
    for lst in neighbors.values():
        lst.sort()

    for sender_id in sorted(nodes):
        sender = nodes[sender_id]
        if not sender.queue or not neighbors[sender_id]:
            continue
        blocked: set = set()
        kept: deque = deque()
        while sender.queue:
            msg = sender.queue.popleft()
            target_id = _pick_target(msg, sender, neighbors[sender_id], nodes)
            if target_id is None:
                kept.append(msg)
                continue
            pair = (min(sender_id, target_id), max(sender_id, target_id))
            if pair in blocked:
                kept.append(msg)
                continue
            if budget[pair] < msg.payload_size:
                # Head-of-line per link: later traffic must not overtake.
                blocked.add(pair)
                kept.append(msg)
                continue
            budget[pair] -= msg.payload_size
            _transfer(msg, sender, nodes[target_id], ledger, events, now)
        sender.queue = kept

    _run_retries(nodes, neighbors, ledger, events, now)
    return events


def _transfer(
    msg: Message,
    sender: RadioNode,
    receiver: RadioNode,
    ledger: CommsLedger,
    events: list,
    now: float,
) -> None:
    if msg.kind is MsgKind.TELEMETRY and sender.node_id == msg.origin:
        sender.retained[msg.msg_id] = (msg.clone_for_retry(), now)
    msg.hops.append(receiver.node_id)
    if receiver.node_id == msg.dest:
        if ledger.mark_delivered(msg, now):
            msg.delivered_at = now
            receiver.seen.add(msg.msg_id)
            events.append(
                CommEvent(now, "delivered", msg.msg_id, msg.kind.value,
                          msg.origin, msg.dest, tuple(msg.hops))
            )
            if msg.kind is MsgKind.TELEMETRY:
                ack = Message(
                    origin=receiver.node_id,
                    seq=receiver.next_seq(),
                    kind=MsgKind.ACK,
                    dest=msg.origin,
                    payload_size=ACK_PAYLOAD_SIZE,
                    created_at=now,
                    ack_for=msg.msg_id,
                )
                enqueue_new(receiver, ack, ledger, events)
        else:
            events.append(
                CommEvent(now, "duplicate", msg.msg_id, msg.kind.value,
                          msg.origin, msg.dest, tuple(msg.hops))
            )
        if msg.kind is MsgKind.ACK and msg.ack_for is not None:
            receiver.retained.pop(msg.ack_for, None)
    else:
        if msg.msg_id in receiver.seen:
            events.append(
                CommEvent(now, "duplicate", msg.msg_id, msg.kind.value,
                          msg.origin, msg.dest, tuple(msg.hops),
                          f"suppressed at {receiver.node_id}")
            )
            return
        receiver.seen.add(msg.msg_id)
        _enqueue(receiver, msg, ledger, events, now)


def _run_retries(nodes, neighbors, ledger, events, now) -> None:
    for nid in sorted(nodes):
        node = nodes[nid]
        if not node.retained or not neighbors.get(nid):
            continue
        queued_ids = {m.msg_id for m in node.queue}
        for msg_id in sorted(node.retained):
            original, last_tx = node.retained[msg_id]
            if now - last_tx < node.retry_interval:
                continue
            if ledger.records[msg_id].delivered_at is not None:
                node.retained.pop(msg_id)
                continue
            if msg_id in queued_ids:
                continue
            node.retained[msg_id] = (original, now)
            node.queue.append(original.clone_for_retry())
            events.append(
                CommEvent(now, "retry", msg_id, original.kind.value,
                          original.origin, original.dest)
            )


def conservation_scan(nodes: dict[str, RadioNode], ledger: CommsLedger) -> dict:
    """Partition every created message into delivered / in-flight / dropped.

    A message counts as in-flight while any live copy exists in a queue or an
    origin retention buffer; it is dropped only once no copy survives.
    """
    live: set = set()
    for node in nodes.values():
        live.update(m.msg_id for m in node.queue)
        live.update(node.retained.keys())
    delivered = {mid for mid, rec in ledger.records.items() if rec.delivered_at is not None}
    in_flight = {mid for mid in ledger.records if mid not in delivered and mid in live}
    dropped = {mid for mid in ledger.records if mid not in delivered and mid not in live}
    return {
        "created": len(ledger.records),
        "delivered": len(delivered),
        "in_flight": len(in_flight),
        "dropped": len(dropped),
        "balanced": len(ledger.records) == len(delivered) + len(in_flight) + len(dropped),
    }
