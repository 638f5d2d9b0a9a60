"""Scenario files: YAML in, Scenario objects out, plus result formatting.

A file holds either one scenario mapping or a top-level ``scenarios:``
list. Each scenario expands to one run per entry in its ``policies`` list,
so the same world can be measured under every defense tier.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Any, Iterable, TextIO

import yaml

from .model import AttackPlan, InvalidPlan, PolicyKind, SimResult, VictimPolicy
from .montecarlo import Scenario


class ScenarioError(Exception):
    """Unusable scenario file; message carries location context."""


_SCENARIO_KEYS = {
    "name",
    "victim_degree",
    "visibility_fraction",
    "policies",
    "plan",
    "friend",
    "victim",
    "root_activity",
    "fake_activity",
}
_PLAN_KEYS = {
    "list1_size",
    "n_networks",
    "probe_budget",
    "n_roots_final",
    "known_name_pool",
}
_POLICY_KEYS = {
    "base_p",
    "w_mutual",
    "mutual_saturation",
    "w_name",
    "w_activity",
    "profile_penalty",
    "p_voice_pass",
}
_POLICY_NAMES = tuple(p.value for p in PolicyKind)

CSV_COLUMNS = (
    "scenario",
    "policy",
    "trials",
    "successes",
    "success_rate",
    "weak_found_mean",
    "mutual_at_strike_mean",
    "seed",
)


def _require_mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(f"{where} must be a mapping")
    return value


def _check_keys(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ScenarioError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _as_float(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where} must be a number")
    return float(value)


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where} must be an integer")
    return value


def _activity_range(value: Any, where: str) -> tuple[float, float]:
    # a single number means a point range
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        lo = hi = float(value)
    elif isinstance(value, list) and len(value) == 2:
        lo = _as_float(value[0], where)
        hi = _as_float(value[1], where)
    else:
        raise ScenarioError(f"{where} must be a number or a [low, high] pair")
    if not 0.0 <= lo <= hi <= 1.0:
        raise ScenarioError(f"{where} must satisfy 0 <= low <= high <= 1")
    return lo, hi


def _name_pool(value: Any, where: str) -> tuple[str, ...]:
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 1:
            raise ScenarioError(f"{where} must be positive")
        return tuple(f"known-{i + 1}" for i in range(value))
    if isinstance(value, list) and value:
        if not all(isinstance(n, str) and n for n in value):
            raise ScenarioError(f"{where} entries must be non-empty strings")
        if len(set(value)) != len(value):
            raise ScenarioError(f"{where} entries must be distinct")
        return tuple(value)
    raise ScenarioError(f"{where} must be a count or a list of names")


def _policy_params(mapping: dict, where: str) -> dict[str, float]:
    _check_keys(mapping, _POLICY_KEYS, where)
    return {key: _as_float(val, f"{where}.{key}") for key, val in mapping.items()}


def _plan_from(mapping: dict, where: str) -> AttackPlan:
    _check_keys(mapping, _PLAN_KEYS, where)
    missing = sorted(_PLAN_KEYS - set(mapping))
    if missing:
        raise ScenarioError(f"{where} is missing: {', '.join(missing)}")
    plan = AttackPlan(
        list1_size=_as_int(mapping["list1_size"], f"{where}.list1_size"),
        n_networks=_as_int(mapping["n_networks"], f"{where}.n_networks"),
        probe_budget=_as_int(mapping["probe_budget"], f"{where}.probe_budget"),
        n_roots_final=_as_int(mapping["n_roots_final"], f"{where}.n_roots_final"),
        known_name_pool=_name_pool(
            mapping["known_name_pool"], f"{where}.known_name_pool"
        ),
    )
    try:
        plan.validate()
    except InvalidPlan as exc:
        raise ScenarioError(f"{where}: {exc}") from exc
    return plan


def _policy_list(value: Any, where: str) -> list[str]:
    if value is None:
        return list(_POLICY_NAMES)
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ScenarioError(f"{where} must be a policy name or list of them")
    for name in value:
        if name not in _POLICY_NAMES:
            raise ScenarioError(
                f"{where}: unknown policy {name!r}; expected one of "
                + ", ".join(_POLICY_NAMES)
            )
    return value


def _expand_entry(entry: Any, where: str) -> list[Scenario]:
    mapping = _require_mapping(entry, where)
    _check_keys(mapping, _SCENARIO_KEYS, where)
    name = mapping.get("name")
    if not isinstance(name, str) or not name:
        raise ScenarioError(f"{where} needs a non-empty name")
    where = f"scenario {name!r}"

    for key in ("victim_degree", "plan", "victim", "friend"):
        if key not in mapping:
            raise ScenarioError(f"{where} is missing {key!r}")

    degree = _as_int(mapping["victim_degree"], f"{where}.victim_degree")
    visibility = _as_float(
        mapping.get("visibility_fraction", 1.0), f"{where}.visibility_fraction"
    )
    plan = _plan_from(
        _require_mapping(mapping["plan"], f"{where}.plan"), f"{where}.plan"
    )
    victim_params = _policy_params(
        _require_mapping(mapping["victim"], f"{where}.victim"), f"{where}.victim"
    )
    friend_params = _policy_params(
        _require_mapping(mapping["friend"], f"{where}.friend"), f"{where}.friend"
    )
    friend_policy = VictimPolicy(policy_kind=PolicyKind.NONE, **friend_params)
    root_activity = _activity_range(
        mapping.get("root_activity", [0.7, 1.0]), f"{where}.root_activity"
    )
    fake_activity = _activity_range(
        mapping.get("fake_activity", [0.0, 0.3]), f"{where}.fake_activity"
    )

    scenarios = []
    for policy_name in _policy_list(mapping.get("policies"), f"{where}.policies"):
        scenario = Scenario(
            name=name,
            policy_name=policy_name,
            victim_degree=degree,
            visibility_fraction=visibility,
            plan=plan,
            friend_policy=friend_policy,
            victim_policy=VictimPolicy(
                policy_kind=PolicyKind(policy_name), **victim_params
            ),
            root_activity=root_activity,
            fake_activity=fake_activity,
        )
        try:
            scenario.validate()
        except (ValueError, InvalidPlan) as exc:
            raise ScenarioError(f"{where}: {exc}") from exc
        scenarios.append(scenario)
    return scenarios


def parse_scenarios(text: str) -> list[Scenario]:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or str(exc)
        if mark is not None:
            raise ScenarioError(
                f"YAML syntax error at line {mark.line + 1}, "
                f"column {mark.column + 1}: {problem}"
            ) from exc
        raise ScenarioError(f"YAML syntax error: {problem}") from exc
    if doc is None:
        raise ScenarioError("scenario file is empty")
    mapping = _require_mapping(doc, "scenario file")
    if "scenarios" in mapping:
        _check_keys(mapping, {"scenarios"}, "scenario file")
        entries = mapping["scenarios"]
        if not isinstance(entries, list) or not entries:
            raise ScenarioError("'scenarios' must be a non-empty list")
    else:
        entries = [mapping]

    out: list[Scenario] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        expanded = _expand_entry(entry, f"scenario #{i + 1}")
        if expanded[0].name in seen:
            raise ScenarioError(f"duplicate scenario name {expanded[0].name!r}")
        seen.add(expanded[0].name)
        out.extend(expanded)
    return out


def load_scenarios(path: str | Path) -> list[Scenario]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    return parse_scenarios(text)


def format_result_line(scenario: Scenario, result: SimResult) -> str:
    return (
        f"{scenario.name} {scenario.policy_name}: "
        f"success_rate={result.success_rate:.4f} "
        f"successes={result.successes}/{result.trials} "
        f"weak_found_mean={result.weak_found_mean:.4f} "
        f"mutual_at_strike_mean={result.mutual_at_strike_mean:.4f} "
        f"seed={result.seed}"
    )


def write_csv(out: TextIO, rows: Iterable[tuple[Scenario, SimResult]]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for scenario, result in rows:
        writer.writerow(
            [
                scenario.name,
                scenario.policy_name,
                result.trials,
                result.successes,
                f"{result.success_rate:.6f}",
                f"{result.weak_found_mean:.6f}",
                f"{result.mutual_at_strike_mean:.6f}",
                result.seed,
            ]
        )
