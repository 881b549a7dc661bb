"""Certificate and proof-report records shared by the certification layers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = "1.0"


@dataclass
class Certificate:
    """Outcome of one exact check.

    A certificate passes iff its list of violations is empty, so a failing
    certificate always carries the evidence (negative monomials, offending
    Routh entries, negative slack) that made it fail.
    """

    lemma_id: str
    method: str
    case: str | None = None
    violations: list[Any] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def witness(self) -> Any:
        return self.violations if self.violations else self.info.get("witness")

    def to_dict(self, volatile: bool = True) -> dict[str, Any]:
        out = {
            "lemma_id": self.lemma_id,
            "case": self.case,
            "method": self.method,
            "status": self.status,
            "witness": _jsonable(self.witness),
            "info": _jsonable({k: v for k, v in self.info.items() if k != "witness"}),
        }
        if volatile:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class ProofReport:
    """Ordered certificates for one case plus the lemma dependency graph."""

    case: str
    certificates: list[Certificate] = field(default_factory=list)
    dependencies: dict[str, list[str]] = field(default_factory=dict)
    manifest: tuple[str, ...] = ()
    case_spec: dict[str, Any] = field(default_factory=dict)

    def add(self, cert: Certificate, depends_on: list[str] | None = None) -> Certificate:
        if any(c.lemma_id == cert.lemma_id for c in self.certificates):
            raise ValueError(f"certificate {cert.lemma_id!r} already emitted")
        self.certificates.append(cert)
        self.dependencies[cert.lemma_id] = list(depends_on or [])
        return cert

    @property
    def missing(self) -> list[str]:
        have = {c.lemma_id for c in self.certificates}
        return [lemma for lemma in self.manifest if lemma not in have]

    @property
    def passed(self) -> bool:
        have = [c.lemma_id for c in self.certificates]
        return (
            bool(self.certificates)
            and all(c.passed for c in self.certificates)
            and sorted(have) == sorted(self.manifest)
        )

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def get(self, lemma_id: str) -> Certificate:
        for c in self.certificates:
            if c.lemma_id == lemma_id:
                return c
        raise KeyError(lemma_id)

    def to_dict(self, volatile: bool = True) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "case": self.case,
            "case_spec": _jsonable(self.case_spec),
            "certificates": [c.to_dict(volatile=False) for c in self.certificates],
            "dependencies": self.dependencies,
            "missing": self.missing,
            "verdict": self.verdict,
        }
        if volatile:
            out["volatile"] = {
                "wall_time": {c.lemma_id: round(c.wall_time, 6) for c in self.certificates}
            }
        return out

    def to_json(self, volatile: bool = True) -> str:
        return json.dumps(self.to_dict(volatile=volatile), indent=2, sort_keys=True)

    def to_markdown(self) -> str:
        lines = [f"# Proof report: case `{self.case}`", ""]
        for key, val in self.case_spec.items():
            lines.append(f"- **{key}**: `{_jsonable(val)}`")
        lines += ["", f"**Verdict: {self.verdict.upper()}**", ""]
        for c in self.certificates:
            lines.append(f"## {c.lemma_id}")
            lines.append("")
            lines.append(f"- method: `{c.method}`")
            lines.append(f"- status: **{c.status}**")
            deps = self.dependencies.get(c.lemma_id)
            if deps:
                lines.append(f"- depends on: {', '.join(deps)}")
            for key, val in c.info.items():
                if key == "witness":
                    continue
                lines.append(f"- {key}: `{_short(val)}`")
            if c.violations:
                lines.append("- violations:")
                for v in c.violations[:50]:
                    lines.append(f"  - `{_short(v)}`")
                if len(c.violations) > 50:
                    lines.append(f"  - ... {len(c.violations) - 50} more")
            lines.append("")
        if self.missing:
            lines.append("## Missing certificates")
            lines += [f"- {m}" for m in self.missing]
        return "\n".join(lines) + "\n"


def _short(val: Any, limit: int = 300) -> str:
    s = str(_jsonable(val))
    return s if len(s) <= limit else s[: limit - 3] + "..."


def _jsonable(obj: Any) -> Any:
    from fractions import Fraction

    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return str(obj)
