"""Operator entry point: one binary, one subcommand per job.

serve            run the web service
simulate         run attack scenarios and print result lines
challenge-create persist a challenge offline and print its link + token
answers-list     dump the answers stored for a challenge
outbox-list      list queued notification mails
outbox-show      print one queued mail verbatim
notify-retry     re-send the notification for a stored answer

Exit codes: 0 success, 1 invalid config or input, 2 bind failure,
3 delivery failure. stdout carries data, stderr carries diagnostics.
"""

from __future__ import annotations

import argparse
import os
import secrets
import socket
import sys
from pathlib import Path

from .clonesim.montecarlo import run_trials
from .clonesim.scenario import (
    ScenarioError,
    format_result_line,
    load_scenarios,
    write_csv,
)
from .config import ConfigError, ServiceConfig, load_config, transport_from_config
from .core import ChallengeError, Language, build_answer_url, hash_token, new_challenge
from .notify import FileOutboxTransport, TransportFailure, compose_notification, send
from .store import NotFound, Store, StoreError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BIND = 2
EXIT_TRANSPORT = 3

CONFIG_ENV_VAR = "SNKNOCK_CONFIG"


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INVALID


def _load(args: argparse.Namespace) -> ServiceConfig:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    return load_config(path)


def _open_store(config: ServiceConfig) -> Store:
    return Store(config.data_dir, config.max_upload_bytes)


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
        if args.bind:
            config.bind_address = args.bind
        host, port = config.bind_host_port()
    except ConfigError as exc:
        return _fail(str(exc))
    try:
        sock = socket.create_server((host, port))
    except (OSError, OverflowError) as exc:
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_BIND

    # deferred so the offline subcommands never pay the web-stack import
    import uvicorn

    from .gateway import create_app

    app = create_app(config)
    bound = sock.getsockname()
    print(f"listening on http://{bound[0]}:{bound[1]}", flush=True)
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    try:
        server.run(sockets=[sock])
    finally:
        app.state.store.close()
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenarios = load_scenarios(args.scenario)
    except ScenarioError as exc:
        return _fail(str(exc))
    rows = []
    for scenario in scenarios:
        try:
            result = run_trials(scenario, args.seed, args.trials)
        except ValueError as exc:
            return _fail(str(exc))
        print(format_result_line(scenario, result))
        rows.append((scenario, result))
    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                write_csv(fh, rows)
        except OSError as exc:
            return _fail(f"cannot write {args.csv}: {exc}")
    return EXIT_OK


def _cmd_challenge_create(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _fail(str(exc))
    language = Language(args.lang) if args.lang else config.language_default
    try:
        challenge = new_challenge(args.email, args.question or [], language)
    except ChallengeError as exc:
        return _fail(str(exc))
    token = secrets.token_hex(16)
    try:
        store = _open_store(config)
    except StoreError as exc:
        return _fail(str(exc))
    try:
        stored = store.put_challenge(challenge, owner_token_hash=hash_token(token))
    except StoreError as exc:
        return _fail(str(exc))
    finally:
        store.close()
    print(build_answer_url(config.public_base_url, language, stored.id))
    print(f"owner-token: {token}")
    return EXIT_OK


def _cmd_answers_list(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
        store = _open_store(config)
    except (ConfigError, StoreError) as exc:
        return _fail(str(exc))
    try:
        answers = store.list_answers(args.challenge)
    except NotFound as exc:
        return _fail(str(exc))
    finally:
        store.close()
    for a in answers:
        print(
            f"{a.id}\t{a.decision.value}\t{a.media_type}\t{a.size_bytes}"
            f"\t{a.submitted_at.isoformat()}\t{a.audio_name}"
        )
    return EXIT_OK


def _outbox_dir(config: ServiceConfig) -> Path:
    return config.data_dir / "outbox"


def _cmd_outbox_list(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _fail(str(exc))
    outbox = FileOutboxTransport(_outbox_dir(config))
    for entry in outbox.entries():
        print(f"{entry.sequence:08d}\t{entry.message.to}\t{entry.message.subject}")
    return EXIT_OK


def _cmd_outbox_show(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _fail(str(exc))
    path = _outbox_dir(config) / f"{args.sequence:08d}.eml"
    try:
        sys.stdout.write(path.read_text(encoding="utf-8"))
    except OSError:
        return _fail(f"no outbox entry {args.sequence}")
    return EXIT_OK


def _cmd_notify_retry(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
        store = _open_store(config)
    except (ConfigError, StoreError) as exc:
        return _fail(str(exc))
    try:
        answer = store.get_answer(args.answer)
        challenge = store.get_challenge(answer.challenge_id)
    except NotFound as exc:
        return _fail(str(exc))
    finally:
        store.close()
    message = compose_notification(challenge, answer, config.public_base_url)
    try:
        receipt = send(message, transport_from_config(config))
    except TransportFailure as exc:
        print(f"error: delivery failed: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    print(f"delivered via {receipt.transport}: {receipt.reference}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snknock",
        description="Voice challenge-response friend verification service"
        " and profile-cloning attack simulator.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_config(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--config",
            metavar="PATH",
            help=f"YAML config file (default: ${CONFIG_ENV_VAR} or built-ins)",
        )

    p = sub.add_parser("serve", help="run the web service")
    add_config(p)
    p.add_argument("--bind", metavar="HOST:PORT", help="override bind_address")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("simulate", help="run attack scenarios")
    p.add_argument("--scenario", metavar="PATH", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--csv", metavar="PATH", help="also write results as CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("challenge-create", help="store a challenge, print its link")
    add_config(p)
    p.add_argument("--email", required=True, help="owner email address")
    p.add_argument(
        "--question",
        action="append",
        metavar="TEXT",
        help="question line; repeat for several",
    )
    p.add_argument("--lang", choices=[l.value for l in Language])
    p.set_defaults(func=_cmd_challenge_create)

    p = sub.add_parser("answers-list", help="list stored answers for a challenge")
    add_config(p)
    p.add_argument("--challenge", type=int, required=True)
    p.set_defaults(func=_cmd_answers_list)

    p = sub.add_parser("outbox-list", help="list queued notification mails")
    add_config(p)
    p.set_defaults(func=_cmd_outbox_list)

    p = sub.add_parser("outbox-show", help="print one queued mail")
    add_config(p)
    p.add_argument("sequence", type=int)
    p.set_defaults(func=_cmd_outbox_show)

    p = sub.add_parser("notify-retry", help="re-send an answer notification")
    add_config(p)
    p.add_argument("--answer", type=int, required=True)
    p.set_defaults(func=_cmd_notify_retry)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
