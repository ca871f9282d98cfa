"""Request shapes for the HTTP app.  Nested mathematical payloads stay
as raw objects here; the JSON decoders validate them and report precise
witnesses, which a structural schema could not."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ClassifyRequest(_Request):
    map: dict


class LiftRequest(_Request):
    square: dict


class FactorRequest(_Request):
    map: dict
    side: Literal["z", "x"]


class HomologyRequest(_Request):
    complex: dict


class VerifyRequest(_Request):
    cert: dict


class DiagramClassifyRequest(_Request):
    nat: dict


class DiagramFactorRequest(_Request):
    nat: dict


class DiagramGenRequest(_Request):
    gen_kind: Literal["tensor", "pitchfork"]
    map: dict
    shape: dict
    at: str


class ReedyValidateRequest(_Request):
    reedy: dict


class ReedyClassifyRequest(_Request):
    reedy: dict
    nat: dict


class ReedyObjectRequest(_Request):
    reedy: dict
    diagram: dict
    at: str


class ReedyGenRequest(_Request):
    reedy: dict
    nat: dict
    at: str
    side: Literal["z", "x"]


class ReedyTowerRequest(_Request):
    reedy: dict
    nat: dict
    side: Literal["z", "x"]


class SelftestRequest(_Request):
    field: str = "prime:101"
    seed: int
    count: int = 10
