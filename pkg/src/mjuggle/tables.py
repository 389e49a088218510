"""Regenerate the periodic and primitive count tables and diff them against fixtures."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .series import (IntPolynomial, expand, periodic_gf, periodic_sequence,
                     primitive_transform)
from .states import State

KINDS = ("periodic", "primitive")


@dataclass
class RowResult:
    kind: str
    state: str
    m: int
    expected_terms: list[int]
    got_terms: list[int]
    expected_gf: tuple[list[int], list[int]]
    got_gf: tuple[list[int], list[int]]

    @property
    def terms_ok(self) -> bool:
        return self.expected_terms == self.got_terms

    @property
    def gf_ok(self) -> bool:
        return self.expected_gf == self.got_gf

    @property
    def ok(self) -> bool:
        return self.terms_ok and self.gf_ok

    @property
    def label(self) -> str:
        return f"{self.kind} <{self.state}> m={self.m}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "state": self.state,
            "m": self.m,
            "ok": self.ok,
            "terms": {"expected": self.expected_terms, "got": self.got_terms},
            "numerator": {"expected": self.expected_gf[0], "got": self.got_gf[0]},
            "denominator": {"expected": self.expected_gf[1], "got": self.got_gf[1]},
        }


def load_fixtures() -> dict[str, list[dict]]:
    text = resources.files("mjuggle").joinpath("data/tables.json").read_text()
    return json.loads(text)


def parse_row_selector(text: str) -> tuple[str, int]:
    """``"2,1:3"`` -> (``"2,1"``, 3)."""
    state, sep, m = text.rpartition(":")
    if not sep:
        raise ValueError(f"row selector must look like STATE:M, got {text!r}")
    return state.strip(), int(m)


def check_row(kind: str, row: dict) -> RowResult:
    origin = State.parse(row["state"], row["m"])
    count = len(row["terms"])
    F = periodic_gf(origin)
    if kind == "periodic":
        gf = F
        got = list(periodic_sequence(origin, count).terms)
    else:
        gf = primitive_transform(F)
        got = expand(gf, count)
    return RowResult(
        kind=kind,
        state=str(origin),
        m=origin.m,
        expected_terms=list(row["terms"]),
        got_terms=got,
        expected_gf=(list(IntPolynomial(row["numerator"]).coeffs),
                     list(IntPolynomial(row["denominator"]).coeffs)),
        got_gf=(list(gf.numerator.coeffs), list(gf.denominator.coeffs)),
    )


def reproduce(selector: tuple[str, int] | None = None) -> list[RowResult]:
    fixtures = load_fixtures()
    results = []
    for kind in KINDS:
        for row in fixtures[kind]:
            if selector is not None:
                wanted = State.parse(selector[0], selector[1])
                if (str(State.parse(row["state"], row["m"])), row["m"]) != (str(wanted), wanted.m):
                    continue
            results.append(check_row(kind, row))
    return results
