"""Reading and fingerprinting construction descriptions from JSON files.

A spec file is either *explicit* — ``{"h0": 1, "stages": [{"r": 3, "s":
[0, 1, 0]}, ...], "extension": "repeat-last"}`` — or names a built-in
*family* as its only top-level key: ``{"family": {"kind": "tq", "t": 4,
"q": 1, "positions": [1]}}``.  Parsing is strict: unknown keys, booleans
posing as integers, or a family block mixed with explicit fields are all
rejected, so a fingerprint always refers to one unambiguous construction.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .construction import (
    EXTENSION_ERROR,
    EXTENSION_REPEAT,
    RankOneSpec,
    StageSpec,
    validate_spec,
)
from .errors import IoError, SpecFileError
from .families import (
    AsymmParams,
    TQParams,
    make_asymm_construction,
    make_inf_chacon,
    make_tq,
)
from .reporting import fingerprint

__all__ = [
    "parse_spec",
    "load_spec",
    "spec_payload",
    "spec_fingerprint",
    "tq_params_of",
]

_TOP_KEYS = {"h0", "stages", "extension", "family"}
_EXTENSIONS = (EXTENSION_ERROR, EXTENSION_REPEAT)


def _plain_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecFileError(f"{where} must be an integer, got {value!r}")
    return value


def _int_or_none(value: Any, where: str) -> int | None:
    if value is None:
        return None
    return _plain_int(value, where)


def _int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list):
        raise SpecFileError(f"{where} must be an array of integers")
    return [_plain_int(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _exact_keys(block: Mapping[str, Any], required: set[str], where: str) -> None:
    if set(block) != required:
        missing = required - set(block)
        extra = set(block) - required
        parts = []
        if missing:
            parts.append(f"missing {sorted(missing)}")
        if extra:
            parts.append(f"unknown {sorted(extra)}")
        raise SpecFileError(f"{where}: " + "; ".join(parts))


def _parse_stages(raw: Any) -> list[StageSpec]:
    if not isinstance(raw, list) or not raw:
        raise SpecFileError("stages must be a nonempty array")
    out = []
    for idx, item in enumerate(raw):
        if not isinstance(item, dict):
            raise SpecFileError(f"stages[{idx}] must be an object")
        _exact_keys(item, {"r", "s"}, f"stages[{idx}]")
        r = _plain_int(item["r"], f"stages[{idx}].r")
        s = _int_list(item["s"], f"stages[{idx}].s")
        out.append(StageSpec(r=r, s=tuple(s)))
    return out


def _parse_family(block: Mapping[str, Any]) -> RankOneSpec:
    if not isinstance(block, dict):
        raise SpecFileError("family must be an object")
    kind = block.get("kind")
    if kind == "inf_chacon":
        _exact_keys(block, {"kind", "t", "q", "m1", "m0"}, "family")
        return make_inf_chacon(
            t=_plain_int(block["t"], "family.t"),
            q=_plain_int(block["q"], "family.q"),
            m1=_plain_int(block["m1"], "family.m1"),
            m0=_plain_int(block["m0"], "family.m0"),
        )
    if kind == "tq":
        _exact_keys(block, {"kind", "t", "q", "positions"}, "family")
        spec, _ = make_tq(
            t=_plain_int(block["t"], "family.t"),
            q=_plain_int(block["q"], "family.q"),
            positions=tuple(_int_list(block["positions"], "family.positions")),
        )
        return spec
    if kind == "asymm":
        _exact_keys(block, {"kind", "k", "p", "stages", "separationFactor"}, "family")
        params = AsymmParams(
            k=_plain_int(block["k"], "family.k"),
            p=_int_or_none(block["p"], "family.p"),
            prefix_stages=_plain_int(block["stages"], "family.stages"),
            separation_factor=_plain_int(
                block["separationFactor"], "family.separationFactor"
            ),
        )
        return make_asymm_construction(params)
    if kind == "explicit":
        allowed = {"kind", "stages", "h0", "extension"}
        if not set(block) <= allowed or "stages" not in block:
            raise SpecFileError(
                "family kind 'explicit' takes stages plus optional h0/extension"
            )
        return _parse_explicit(
            {k: v for k, v in block.items() if k != "kind"}
        )
    raise SpecFileError(f"unknown family kind {kind!r}")


def _parse_explicit(payload: Mapping[str, Any]) -> RankOneSpec:
    stages = _parse_stages(payload["stages"])
    h0 = _plain_int(payload.get("h0", 1), "h0")
    extension = payload.get("extension", EXTENSION_ERROR)
    if extension not in _EXTENSIONS:
        raise SpecFileError(
            f"extension must be one of {list(_EXTENSIONS)}, got {extension!r}"
        )
    return validate_spec({"stages": stages, "h0": h0, "extension": extension})


def parse_spec(payload: Any) -> RankOneSpec:
    """Build a construction from a decoded spec-file payload."""
    if not isinstance(payload, dict):
        raise SpecFileError("spec file must contain a JSON object")
    unknown = set(payload) - _TOP_KEYS
    if unknown:
        raise SpecFileError(f"unknown top-level keys {sorted(unknown)}")
    if "family" in payload:
        if set(payload) != {"family"}:
            # A family fixes its own base height and stage rule, so explicit
            # fields alongside it could silently contradict the family.
            raise SpecFileError("a family spec must have 'family' as its only key")
        return _parse_family(payload["family"])
    if "stages" not in payload:
        raise SpecFileError("spec file needs either 'stages' or 'family'")
    return _parse_explicit(payload)


def load_spec(path: str) -> RankOneSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read spec file {path}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"spec file {path} is not valid JSON: {exc}") from exc
    return parse_spec(payload)


def spec_payload(spec: RankOneSpec) -> dict[str, Any]:
    """Normalized input-form payload; round-trips through ``parse_spec``."""
    if spec.family is not None:
        block: dict[str, Any] = {"kind": spec.family.kind}
        block.update(spec.family.as_dict())
        return {"family": block}
    return {
        "h0": spec.h0,
        "stages": [{"r": st.r, "s": list(st.s)} for st in spec.explicit_stages()],
        "extension": spec.extension,
    }


def spec_fingerprint(spec: RankOneSpec) -> str:
    return fingerprint(spec_payload(spec))


def tq_params_of(spec: RankOneSpec) -> TQParams | None:
    """Recover tower-alphabet parameters when the spec came from that family."""
    if spec.family is None or spec.family.kind != "tq":
        return None
    params = spec.family.as_dict()
    return TQParams(
        t=params["t"], q=params["q"], positions=tuple(params["positions"])
    )
