"""Claim-list reports shared by the verifier modules."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Claim:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tail}"

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass(frozen=True)
class Report:
    claims: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.claims)

    def first_failure(self):
        return next((c for c in self.claims if not c.ok), None)

    def lines(self):
        return [c.line() for c in self.claims]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "claims": [c.to_dict() for c in self.claims]}
