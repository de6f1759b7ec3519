"""Command-line simulator.

A system directory (--dir, default ./mtkt-state) holds the public
parameters, the authority keys, per-user card files, and the ledger.
MTKT_SEED in the environment fixes all randomness, making scenario
transcripts byte-identical across runs.
"""

import os
import sys
import time
from pathlib import Path

import click

from . import persist, protocol as pr
from .bench import bench as run_bench
from .errors import MtktError
from .group import decode_g1, default_context
from .ledger import Ledger, UsedTicketRecord, db_load, db_store
from .rng import from_env
from .scenarios import SCENARIOS, ScenarioConfig, run_scenario


class SystemDir:
    def __init__(self, root):
        self.root = Path(root)

    def path(self, name):
        return self.root / name

    def write(self, name, data):
        self.path(name).write_bytes(data)

    def read(self, name):
        return self.path(name).read_bytes()

    def load_pp(self):
        return persist.load_pp(self.read("pp.bin"))

    def load_ledger(self):
        p = self.path("ledger.db")
        return db_load(p) if p.exists() else Ledger()

    def store_ledger(self, ledger):
        db_store(self.path("ledger.db"), ledger)

    def card_path(self, id_u):
        return self.path(f"card-{id_u}.bin")

    def load_card(self, id_u, ctx):
        return persist.load_card(self.card_path(id_u).read_bytes(), ctx)

    def store_card(self, user, token):
        self.card_path(user.id_u).write_bytes(persist.save_card(user, token))


@click.group()
@click.option("--dir", "root", default="mtkt-state", show_default=True,
              help="system state directory")
@click.pass_context
def main(clickctx, root):
    clickctx.obj = SystemDir(root)


@main.command()
@click.option("--max-ticket", default=10, show_default=True)
@click.option("--deadline", default=None, type=int,
              help="token validity end, unix seconds (default: now + 30 days)")
@click.option("--threshold", default="2,3", show_default=True,
              help="t,n revocation threshold")
@click.option("--out", default=None, help="alias for --dir")
@click.pass_obj
def setup(sysdir, max_ticket, deadline, threshold, out):
    """Generate all keys and parameters, publish the signed set."""
    if out:
        sysdir = SystemDir(out)
    t, n = (int(x) for x in threshold.split(","))
    if deadline is None:
        deadline = int(time.time()) + 30 * 86400
    rng = from_env()
    sysdir.root.mkdir(parents=True, exist_ok=True)
    pp, ta, rev = pr.setup(max_ticket, deadline, t, n, rng)
    sysdir.write("pp.bin", persist.save_pp(pp))
    sysdir.write("ta.bin", persist.save_ta(ta))
    sysdir.write("revocation.bin", persist.save_revocation(rev))
    sysdir.store_ledger(Ledger())
    click.echo(f"system initialized in {sysdir.root} "
               f"(max_ticket={max_ticket}, threshold {t}-of-{n})")


@main.command()
@click.option("--id", "id_u", required=True)
@click.pass_obj
def register(sysdir, id_u):
    """Register a new user with the transport authority."""
    pp = sysdir.load_pp()
    ledger = sysdir.load_ledger()
    rng = from_env()
    user = pr.user_keygen(pp.ctx, id_u, rng)
    pr.run_registration(pp, ledger.reg, user, rng)
    sysdir.store_card(user, None)
    sysdir.store_ledger(ledger)
    click.echo(f"registered {id_u}")


@main.command("request-token")
@click.option("--id", "id_u", required=True)
@click.pass_obj
def request_token(sysdir, id_u):
    """Run the permission token request for a registered user."""
    pp = sysdir.load_pp()
    ta = persist.load_ta(sysdir.read("ta.bin"))
    ledger = sysdir.load_ledger()
    rng = from_env()
    user, _ = sysdir.load_card(id_u, pp.ctx)
    token, _ = pr.run_token_request(pp, ta, ledger.reg, user, rng)
    sysdir.store_card(user, token)
    sysdir.store_ledger(ledger)
    click.echo(f"token issued: {token.max_ticket} tickets until {token.deadline}")


@main.command()
@click.option("--id", "id_u", required=True)
@click.option("--with-keys", is_flag=True,
              help="validator holds the signing secrets (pairing-free path)")
@click.option("--ticket-out", default=None, help="write the wire ticket here")
@click.pass_obj
def validate(sysdir, id_u, with_keys, ticket_out):
    """Validate one m-ticket (auth, challenge, issue, verify, store)."""
    pp = sysdir.load_pp()
    ta = persist.load_ta(sysdir.read("ta.bin"))
    ledger = sysdir.load_ledger()
    rng = from_env()
    user, token = sysdir.load_card(id_u, pp.ctx)
    if token is None:
        raise click.ClickException(f"{id_u} has no permission token")
    now = int(time.time())
    pr.run_validator_auth(pp, token, ta.validator_rsa, now, rng)
    k = min(token.remaining)
    session = pr.ticket_precompute(pp, token, k, rng)
    ch = rng.scalar_nonzero(pp.ctx.p)
    ticket = pr.ticket_issue(session, ch, now)
    mode = pr.SecretKeys(ta.gamma, ta.y) if with_keys else pr.PUBLIC
    pp.ctx.reset_pairing_count()
    verdict = pr.ticket_verify(pp, ticket, ch, mode)
    if not verdict:
        raise click.ClickException(f"verification failed: {verdict.failed_check}")
    ledger.used.append(UsedTicketRecord(ticket, "CLI", now))
    sysdir.store_card(user, token)
    sysdir.store_ledger(ledger)
    if ticket_out:
        Path(ticket_out).write_bytes(ticket.serialize())
    click.echo(f"ticket validated (serial {ticket.B_k.encode().hex()[:16]}..., "
               f"pairings={pp.ctx.pairing_count})")


@main.command()
@click.option("--id", "id_u", required=True)
@click.pass_obj
def report(sysdir, id_u):
    """Report all unused tickets (post-payment)."""
    pp = sysdir.load_pp()
    ta = persist.load_ta(sysdir.read("ta.bin"))
    ledger = sysdir.load_ledger()
    rng = from_env()
    user, token = sysdir.load_card(id_u, pp.ctx)
    now = int(time.time())
    rep = pr.report_unused(pp, token, now, rng)
    verdicts = pr.verify_report(pp, rep, pr.SecretKeys(ta.gamma, ta.y))
    if not all(verdicts):
        raise click.ClickException("report verification failed")
    pr.absorb_report(ledger.used, rep, now)
    sysdir.store_card(user, token)
    sysdir.store_ledger(ledger)
    click.echo(f"reported {len(rep.tickets)} unused tickets")


@main.command("revoke-user")
@click.option("--ticket", "ticket_file", required=True, type=click.Path(exists=True))
@click.pass_obj
def revoke_user(sysdir, ticket_file):
    """Recover the identity behind a validated ticket (threshold decryption)."""
    pp = sysdir.load_pp()
    rev = persist.load_revocation(sysdir.read("revocation.bin"))
    ledger = sysdir.load_ledger()
    ticket = pr.MTicket.deserialize(Path(ticket_file).read_bytes())
    t = rev.elgamal.shares[0].threshold
    uid = pr.ident_user(pp, rev.elgamal.shares[:t], ledger.reg, ticket)
    click.echo(f"user: {uid if uid is not None else '<not registered>'}")


@main.command("revoke-tickets")
@click.option("--id", "id_u", required=True)
@click.pass_obj
def revoke_tickets(sysdir, id_u):
    """List every serial number a user's token can produce."""
    pp = sysdir.load_pp()
    rev = persist.load_revocation(sysdir.read("revocation.bin"))
    ledger = sysdir.load_ledger()
    record = ledger.reg.latest_token_record(id_u)
    if record is None:
        raise click.ClickException(f"{id_u} has no token on record")
    t = rev.paillier.shares[0].threshold
    serials = pr.ident_ticket(pp, rev.paillier.shares[:t], record)
    for i, s in enumerate(serials, start=1):
        click.echo(f"{i:3d} {s.encode().hex()}")


@main.command("ident-duplicate")
@click.option("--serial", required=True, help="hex-encoded serial number")
@click.pass_obj
def ident_duplicate(sysdir, serial):
    """Count occurrences of a serial number in DB_UsedTickets."""
    ledger = sysdir.load_ledger()
    needle = decode_g1(bytes.fromhex(serial))
    click.echo(str(pr.ident_duplicate(needle, ledger.used)))


@main.command()
@click.argument("name", type=click.Choice(sorted(SCENARIOS)))
@click.option("--seed", default=None, type=int, help="overrides MTKT_SEED")
@click.option("--transcript", "transcript_out", default=None,
              help="transcript file (default <dir>/transcript-<name>.log)")
@click.pass_obj
def scenario(sysdir, name, seed, transcript_out):
    """Run a scripted multi-actor scenario; exit 0 iff all checks hold."""
    if seed is None:
        seed = int(os.environ.get("MTKT_SEED", "0"))
    cfg = ScenarioConfig(seed=seed)
    result = run_scenario(name, cfg)
    sysdir.root.mkdir(parents=True, exist_ok=True)
    out = Path(transcript_out) if transcript_out else \
        sysdir.path(f"transcript-{name}.log")
    out.write_text(result.transcript)
    for desc, ok in result.checks:
        click.echo(f"{'PASS' if ok else 'FAIL'} {desc}")
    click.echo(f"transcript: {out}")
    sys.exit(result.exit_code)


@main.command("bench")
@click.option("--trials", default=50, show_default=True)
@click.option("--out", default=None, help="machine-readable JSON report path")
@click.option("--seed", default=None, type=int)
@click.pass_obj
def bench_cmd(sysdir, trials, out, seed):
    """Per-phase timings plus pairing/group-op counters."""
    if seed is None:
        seed = int(os.environ.get("MTKT_SEED", "1"))
    report = run_bench(trials=trials, seed=seed, out=out)
    click.echo(report.table())
    if out:
        click.echo(f"json report: {out}")


if __name__ == "__main__":
    main()
