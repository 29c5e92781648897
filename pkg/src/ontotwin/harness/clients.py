"""Model clients: the port, a deterministic fabricating mock and an HTTP chat-completions adapter."""

from __future__ import annotations

import json
import math
import os
import random
import urllib.error
import urllib.request
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from ..tools import TOOLS_BY_NAME
from .queries import QueryCase

DEFAULT_FABRICATION_P = 0.43
DEFAULT_MOCK_SEED = 42

# Plausible identifiers a model invents when it only sees a free-text parameter.
# None of these exist in the shipped templates (checked by the test suite).
FABRICATION_LEXICON: dict[str, dict[str, tuple[str, ...]]] = {
    "aerospace": {
        "Station": ("BOND-1", "CNC-BAY-A", "NDT-INSPECT"),
        "NcrDisposition": ("REWORK", "MRB-HOLD"),
        "RawMaterial": ("ADH-EPOXY-01", "AL-7075"),
        "Supplier": ("TITANIUM-SUPPLIER", "SUP-TI-01"),
        "Product": ("FUSELAGE-FRAME", "FF-200"),
    },
    "pharma": {
        "Station": ("TABLET-PRESS-1", "GRAN-01", "COATER-A"),
        "NcrDisposition": ("DESTROY", "REJECT"),
        "RawMaterial": ("API-001", "MCC-PH102"),
        "Supplier": ("COATING-VENDOR", "SUP-COAT"),
        "Product": ("ATORVA-20", "ATV-20MG"),
    },
    "automotive": {
        "Station": ("WELD-CELL-3", "CAST-01", "PAINT-BOOTH"),
        "NcrDisposition": ("CONCESSION", "DEVIATION"),
        "RawMaterial": ("WIRE-ER4043", "WW-01"),
        "Supplier": ("ALU-INGOT-CO", "SUP-ALU"),
        "Product": ("CYL-HEAD", "CH-V6"),
    },
    "electronics": {
        "Station": ("REFLOW-OVEN-2", "SMT-LINE-1", "AOI-01"),
        "NcrDisposition": ("RMA", "RETURN"),
        "RawMaterial": ("BGA-CPU", "U1-PROC"),
        "Supplier": ("PCB-FAB", "SUP-PCB"),
        "Product": ("GW-MAIN", "GATEWAY-BOARD"),
    },
    "food_beverage": {
        "Station": ("FILLER-1", "LABELER-A", "CAPPER-02"),
        "NcrDisposition": ("REPROCESS", "REWORK-BATCH"),
        "RawMaterial": ("SUGAR-LIQ", "HFCS-55"),
        "Supplier": ("PREFORM-SUPPLIER", "SUP-PET"),
        "Product": ("GINGER-ALE", "GA-355"),
    },
    "warehousing": {
        "Station": ("PICK-ZONE-A", "SORTER-1", "DOCK-3"),
        "NcrDisposition": ("ACCEPT", "WAIVE"),
        "RawMaterial": ("CARTON-M", "BOX-12X12"),
        "Supplier": ("PALLET-VENDOR", "SUP-PAL"),
        "Product": ("RETURNS", "RMA-FLOW"),
    },
}


class ClientError(Exception):
    """The client produced no usable tool call."""


@dataclass(frozen=True)
class ProposedCall:
    name: str
    args: dict[str, Any]


class ModelClientPort(ABC):
    """Given a query and the served tool schemas, return one tool call."""

    name: str = "client"

    @abstractmethod
    def propose(self, query: QueryCase, tools: Sequence[Mapping[str, Any]]) -> ProposedCall:
        ...


def _param_schema(tools: Sequence[Mapping[str, Any]], tool: str, param: str) -> Mapping[str, Any]:
    for t in tools:
        if t["name"] == tool:
            props = t["inputSchema"]["properties"]
            if param in props:
                return props[param]
            raise ClientError(f"tool {tool} has no parameter {param}")
    raise ClientError(f"tool {tool} not offered")


def _entity_kind(tool: str, param: str) -> str:
    spec = TOOLS_BY_NAME.get(tool)
    kind = spec.param(param).entity_kind if spec else None
    return kind.value if kind else ""


def fabrication_flags(n: int, p: float, seed: int = DEFAULT_MOCK_SEED, sampling: str = "systematic") -> list[bool]:
    """Which of n consecutive queries the mock fabricates on. Mirrors MockFabricator's decision stream."""
    mock = MockFabricator(p, seed, sampling=sampling)
    return [mock._decide() for _ in range(n)]


@dataclass
class MockFabricator(ModelClientPort):
    """Deterministic stand-in for a function-calling model.

    With an enum in the schema it always picks the member matching the
    query's target. With a free-text parameter it fabricates with marginal
    probability p. ``systematic`` sampling (default) draws one random phase
    so that n queries carry floor(n*p) or ceil(n*p) fabrications; ``bernoulli``
    draws independently per query.
    """

    p: float = DEFAULT_FABRICATION_P
    seed: int = DEFAULT_MOCK_SEED
    lexicon: Mapping[str, Mapping[str, Sequence[str]]] = field(default_factory=lambda: FABRICATION_LEXICON)
    sampling: str = "systematic"
    name: str = "mock"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if self.sampling not in ("systematic", "bernoulli"):
            raise ValueError(f"unknown sampling {self.sampling!r}")
        self.reset()

    def reset(self) -> None:
        self._decisions = random.Random(self.seed)
        self._choices = random.Random(self.seed + 1)
        self._phase = self._decisions.random()
        self._index = 0

    def _decide(self) -> bool:
        i = self._index
        self._index += 1
        if self.sampling == "bernoulli":
            return self._decisions.random() < self.p
        return math.floor((i + 1) * self.p + self._phase) > math.floor(i * self.p + self._phase)

    def propose(self, query: QueryCase, tools: Sequence[Mapping[str, Any]]) -> ProposedCall:
        fabricate = self._decide()  # consumed in every mode so the stream stays aligned with the query order
        schema = _param_schema(tools, query.tool_name, query.param)
        enum = schema.get("enum")
        if enum is not None:
            if query.expected_entity not in enum:
                raise ClientError(f"{query.expected_entity} not among offered values")
            value = query.expected_entity
        elif fabricate:
            kind = _entity_kind(query.tool_name, query.param)
            pool = self.lexicon.get(query.template_id, {}).get(kind)
            if not pool:
                raise ClientError(f"no fabrication lexicon for {query.template_id}/{kind}")
            value = self._choices.choice(list(pool))
        else:
            value = query.expected_entity
        return ProposedCall(query.tool_name, {query.param: value})


SYSTEM_PROMPT = (
    "You answer manufacturing analytics questions by calling exactly one tool. "
    "Choose the tool and arguments that answer the user's question."
)


@dataclass
class LiveChatClient(ModelClientPort):
    """OpenAI-style /chat/completions adapter for optional real-model runs."""

    base_url: str
    model: str
    api_key: Optional[str] = None
    timeout_s: float = 60.0
    temperature: float = 0.0
    name: str = "live"

    @classmethod
    def from_env(cls) -> "LiveChatClient":
        url = os.environ.get("ONTOTWIN_LLM_URL")
        model = os.environ.get("ONTOTWIN_LLM_MODEL")
        if not url or not model:
            raise ClientError("set ONTOTWIN_LLM_URL and ONTOTWIN_LLM_MODEL for live runs")
        return cls(url, model, os.environ.get("ONTOTWIN_LLM_API_KEY"))

    def request_body(self, query: QueryCase, tools: Sequence[Mapping[str, Any]]) -> dict[str, Any]:
        return {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [{"role": "system", "content": SYSTEM_PROMPT}, {"role": "user", "content": query.text}],
            "tools": [{"type": "function", "function": {"name": t["name"], "description": t["description"],
                                                        "parameters": t["inputSchema"]}} for t in tools],
            "tool_choice": "auto",
        }

    @staticmethod
    def parse_response(body: Mapping[str, Any]) -> ProposedCall:
        try:
            message = body["choices"][0]["message"]
            call = message["tool_calls"][0]["function"]
            args = call.get("arguments") or "{}"
            args = json.loads(args) if isinstance(args, str) else dict(args)
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise ClientError(f"no parsable tool call in response: {exc!r}") from exc
        if not isinstance(args, dict):
            raise ClientError("tool arguments are not an object")
        return ProposedCall(str(call["name"]), args)

    def propose(self, query: QueryCase, tools: Sequence[Mapping[str, Any]]) -> ProposedCall:
        data = json.dumps(self.request_body(query, tools)).encode("utf-8")
        req = urllib.request.Request(self.base_url.rstrip("/") + "/chat/completions", data=data, method="POST",
                                     headers={"Content-Type": "application/json"})
        if self.api_key:
            req.add_header("Authorization", f"Bearer {self.api_key}")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, TimeoutError, json.JSONDecodeError) as exc:
            raise ClientError(f"model request failed: {exc}") from exc
        return self.parse_response(body)
