"""Service configuration: YAML file plus SNKNOCK_* environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .core import Language
from .notify import FileOutboxTransport, SmtpTransport, Transport
from .store import DEFAULT_BLOB_CAP


class ConfigError(Exception):
    pass


@dataclass
class MailConfig:
    relay_host: str | None = None
    relay_port: int = 25
    username: str | None = None
    password: str | None = None
    sender: str = "snknock@localhost"
    use_tls: bool = False


@dataclass
class ServiceConfig:
    bind_address: str = "127.0.0.1:8000"
    public_base_url: str = "http://127.0.0.1:8000"
    language_default: Language = Language.EN
    max_upload_bytes: int = DEFAULT_BLOB_CAP
    admin_listing_enabled: bool = False
    owner_token_required: bool = True
    upload_rate_per_hour: int = 30  # per source address; <= 0 disables
    data_dir: Path = Path("snknock-data")
    mail: MailConfig = field(default_factory=MailConfig)

    def validate(self) -> None:
        if not self.public_base_url:
            raise ConfigError("public_base_url must not be empty")
        if self.public_base_url.endswith("/"):
            raise ConfigError("public_base_url must not end with a slash")
        self.bind_host_port()  # raises on malformed bind_address

    def bind_host_port(self) -> tuple[str, int]:
        host, sep, port = self.bind_address.rpartition(":")
        if not sep or not host:
            raise ConfigError(
                f"bind_address must be host:port, got {self.bind_address!r}"
            )
        try:
            return host, int(port)
        except ValueError:
            raise ConfigError(f"bind_address port is not a number: {port!r}") from None


_ENV_OVERRIDES = {
    "SNKNOCK_BIND": "bind_address",
    "SNKNOCK_BASE_URL": "public_base_url",
    "SNKNOCK_LANGUAGE": "language_default",
    "SNKNOCK_MAX_UPLOAD_BYTES": "max_upload_bytes",
    "SNKNOCK_DATA_DIR": "data_dir",
}

_ENV_MAIL_OVERRIDES = {
    "SNKNOCK_RELAY_HOST": "relay_host",
    "SNKNOCK_RELAY_PORT": "relay_port",
    "SNKNOCK_MAIL_SENDER": "sender",
    "SNKNOCK_MAIL_USERNAME": "username",
    "SNKNOCK_MAIL_PASSWORD": "password",
}


def load_config(path: Path | str | None = None, env: dict | None = None) -> ServiceConfig:
    """Build the service config from an optional YAML file, then apply
    environment overrides. Unknown keys are an error, not a warning."""
    env = os.environ if env is None else env
    raw: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        try:
            loaded = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file is not valid YAML: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a mapping at top level")
        raw = loaded

    mail_raw = raw.pop("mail", {}) or {}
    if not isinstance(mail_raw, dict):
        raise ConfigError("mail section must be a mapping")

    config = ServiceConfig()
    _apply(config, raw, "config")
    _apply(config.mail, mail_raw, "mail config")

    for var, attr in _ENV_OVERRIDES.items():
        if var in env:
            _apply(config, {attr: env[var]}, f"env {var}")
    for var, attr in _ENV_MAIL_OVERRIDES.items():
        if var in env:
            _apply(config.mail, {attr: env[var]}, f"env {var}")

    config.validate()
    return config


def _apply(target, values: dict, origin: str) -> None:
    for key, value in values.items():
        if not hasattr(target, key):
            raise ConfigError(f"unknown {origin} key: {key!r}")
        current = getattr(target, key)
        try:
            if isinstance(current, bool):
                value = _as_bool(value)
            elif isinstance(current, int):
                value = int(value)
            elif isinstance(current, Language):
                value = Language(value)
            elif isinstance(current, Path):
                value = Path(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {origin} key {key!r}: {value!r}") from exc
        setattr(target, key, value)


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false", "1", "0", "yes", "no"):
        return value.lower() in ("true", "1", "yes")
    raise ValueError(value)


def transport_from_config(config: ServiceConfig) -> Transport:
    """SMTP relay when one is configured, file outbox otherwise."""
    mail = config.mail
    if mail.relay_host:
        return SmtpTransport(
            host=mail.relay_host,
            port=mail.relay_port,
            sender=mail.sender,
            username=mail.username,
            password=mail.password,
            use_tls=mail.use_tls,
        )
    return FileOutboxTransport(config.data_dir / "outbox")
