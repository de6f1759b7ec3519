"""Benchmark harness: per-phase wall-clock statistics over repeated trials,
pairing- and group-operation counters per role, and serialized sizes.

Wall-clock numbers are desktop figures; the published SIM-card prototype's
validation envelope (184.25 ms battery-on, 266.52 ms battery-off) is
reported alongside as context only and is not an acceptance target.  The
counter columns are the assertable part: the card performs zero pairings,
the with-keys validator zero, the public validator four per ticket."""

import json
import statistics
import time
from dataclasses import dataclass, field

from . import protocol as pr
from . import setmember as sm
from .actors import World, fresh_view
from .group import GROUP_OPS
from .rng import Rng

REFERENCE_SIMCARD_MS = {"validation_battery_on": 184.25,
                        "validation_battery_off": 266.52}


@dataclass
class BenchReport:
    trials: int
    phases: dict = field(default_factory=dict)   # name -> (mean_ms, stddev_ms)
    pairing_counts: dict = field(default_factory=dict)
    group_ops: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=dict)
    reference_ms: dict = field(default_factory=lambda: dict(REFERENCE_SIMCARD_MS))

    def to_json(self):
        return json.dumps({
            "trials": self.trials,
            "phases_ms": {k: {"mean": m, "stddev": s}
                          for k, (m, s) in self.phases.items()},
            "pairing_counts": self.pairing_counts,
            "group_ops": self.group_ops,
            "sizes_bytes": self.sizes,
            "reference_simcard_ms": self.reference_ms,
        }, indent=2)

    def table(self):
        rows = [f"{'phase':<28}{'mean ms':>12}{'stddev':>10}"]
        for name, (mean, std) in self.phases.items():
            rows.append(f"{name:<28}{mean:>12.3f}{std:>10.3f}")
        rows.append("")
        for label, val in [("pairing counts", self.pairing_counts),
                           ("group ops", self.group_ops),
                           ("sizes (bytes)", self.sizes)]:
            rows.append(f"{label}: " + ", ".join(
                f"{k}={v}" for k, v in val.items()))
        return "\n".join(rows)


def _timed(fn, trials):
    samples = []
    for _ in range(trials):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1e3)
    mean = statistics.fmean(samples)
    std = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return mean, std


def bench(trials=50, seed=1, out=None):
    rng = Rng(seed)
    world = World.build(max_ticket=max(trials, 10) + 2, seed=seed)
    card = world.new_card("bench")
    world.register(card)
    world.request_token(card)
    pp_card = card.pp
    pp_secret = world.validator.pp
    pp_public = fresh_view(world.pp)
    token = card.token
    report = BenchReport(trials=trials)
    ph = report.phases

    seq = iter(range(10 ** 6))

    def one_token_request():
        u = world.new_card(f"bench-user-{next(seq)}")
        world.register(u)
        pr.run_token_request(world.ta.pp, world.ta.keys, world.ta.ledger.reg,
                             u.user, rng)

    ph["token_request"] = _timed(one_token_request, max(3, trials // 10))

    ks = iter(range(1, token.max_ticket + 1))
    sessions = []
    ph["ticket_precompute"] = _timed(
        lambda: sessions.append(pr.ticket_precompute(pp_card, token, next(ks), rng)),
        trials)
    report.sizes["ticket_session"] = len(sessions[0].serialize())

    ch = rng.scalar_nonzero(pp_card.ctx.p)
    now = world.clock.now
    tickets = []
    sess_iter = iter(sessions)
    issue_ops0 = GROUP_OPS.count
    ph["ticket_issue"] = _timed(
        lambda: tickets.append(pr.ticket_issue(next(sess_iter), ch, now)), trials)
    report.group_ops["card_issue_total"] = GROUP_OPS.count - issue_ops0

    report.sizes["ticket_wire_public"] = len(tickets[0].serialize())
    report.sizes["ticket_payload_fig7"] = len(tickets[0].serialize()) - 1
    report.sizes["ticket_wire_secret_mode"] = len(tickets[0].serialize(include_cd=False))

    mode_secret = pr.SecretKeys(world.ta.keys.gamma, world.ta.keys.y)
    t_iter = iter(tickets)
    pp_secret.ctx.reset_pairing_count()
    ph["ticket_verify_with_keys"] = _timed(
        lambda: pr.ticket_verify(pp_secret, next(t_iter), ch, mode_secret), trials)
    report.pairing_counts["validator_with_keys"] = pp_secret.ctx.pairing_count

    t_iter = iter(tickets)
    pp_public.ctx.reset_pairing_count()
    ph["ticket_verify_public"] = _timed(
        lambda: pr.ticket_verify(pp_public, next(t_iter), ch, pr.PUBLIC), trials)
    report.pairing_counts["validator_public"] = pp_public.ctx.pairing_count
    report.pairing_counts["validator_public_per_ticket"] = \
        pp_public.ctx.pairing_count // trials

    # standalone set-membership proof
    sset = pp_card.signed_set
    h_T = pp_card.h_T
    smp_sessions = []
    ph["smp_precompute"] = _timed(
        lambda: smp_sessions.append(sm.smp_precompute(
            pp_card.ctx, sset, 1 + rng.randint_below(sset.max_ticket),
            rng.scalar_nonzero(pp_card.ctx.p), h_T, rng)), trials)
    s_iter = iter(smp_sessions)
    proofs = []
    ph["smp_finalize"] = _timed(
        lambda: proofs.append(sm.smp_finalize(next(s_iter), ch)), trials)
    report.sizes["smp_proof_public"] = len(proofs[0].serialize())
    report.sizes["smp_proof_secret_mode"] = len(proofs[0].serialize(include_d=False))

    p_iter = iter(proofs)
    pp_secret.ctx.reset_pairing_count()
    ph["smp_verify_with_keys"] = _timed(
        lambda: sm.smp_verify(pp_secret.ctx, next(p_iter), ch,
                              sm.SecretKey(world.ta.keys.y), h_T), trials)
    report.pairing_counts["smp_with_keys"] = pp_secret.ctx.pairing_count

    p_iter = iter(proofs)
    pp_public.ctx.reset_pairing_count()
    ph["smp_verify_public"] = _timed(
        lambda: sm.smp_verify(pp_public.ctx, next(p_iter), ch,
                              sm.Public(sset.Y), h_T), trials)
    report.pairing_counts["smp_public_per_proof"] = \
        pp_public.ctx.pairing_count // trials

    report.pairing_counts["card"] = pp_card.ctx.pairing_count

    assert report.pairing_counts["card"] == 0
    assert report.pairing_counts["validator_with_keys"] == 0
    assert report.pairing_counts["validator_public_per_ticket"] == 4
    assert report.pairing_counts["smp_with_keys"] == 0
    assert report.pairing_counts["smp_public_per_proof"] == 2
    assert report.group_ops["card_issue_total"] == 0

    if out:
        with open(out, "w") as fh:
            fh.write(report.to_json() + "\n")
    return report
