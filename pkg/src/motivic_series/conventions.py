"""
Sign and substitution conventions left open by the underlying identities.

Every ambiguous choice is a small pydantic model; the set of all candidates forms the
convention table.  ``selftest`` resolves each choice by direct computation and writes
a ``ConventionRecord`` that later commands read back.  The record carries a hash of
the table so that a record written by an older table is refused.
"""

import hashlib
import itertools
import json
import logging
from pathlib import Path
from typing import Literal, Self

from pydantic import BaseModel, Field, ValidationError

from .errors import ConventionError

logger = logging.getLogger(__name__)

DEFAULT_RECORD_PATH = Path(".motivic") / "conventions.json"

Sign = Literal[1, -1]
HallAction = Literal["twisted", "twisted_inverse", "plain"]
HALL_ACTIONS: tuple[HallAction, ...] = ("twisted", "twisted_inverse", "plain")


class FunceqVariant(BaseModel):
    """
    One reading of the numerator functional equation.

    The right-hand side is ``(-1)**length(w) * L**grade(y) * t**y * N'`` where
    ``y = prefactor_sign * (1 + 2g) * eta(w)`` and ``N'`` replaces every monomial
    ``t**x`` of ``N`` by ``L**(twist_sign * (grade(u x) - grade(x))) * t**(u x)`` with
    ``u = w`` or ``u = w^-1``.
    """

    model_config = {"extra": "forbid", "frozen": True}

    substitution: Literal["w", "w_inverse"] = "w"
    twist_sign: Sign = 1
    prefactor_sign: Sign = -1

    @classmethod
    def all(cls) -> list[Self]:
        return [
            cls(substitution=u, twist_sign=t, prefactor_sign=p)
            for u, t, p in itertools.product(("w", "w_inverse"), (1, -1), (1, -1))
        ]

    @property
    def key(self) -> str:
        return f"{self.substitution}/{self.twist_sign:+d}/{self.prefactor_sign:+d}"


LITERAL_FUNCEQ = FunceqVariant(substitution="w_inverse", twist_sign=-1, prefactor_sign=1)


class Rank2Variant(BaseModel):
    """Prefactor ``L**(l_sign*e*(2-2g)) * x**(-e*(2-2g))`` with ``e = exponent_sign`` in the rank-2 equation."""

    model_config = {"extra": "forbid", "frozen": True}

    l_sign: Sign = -1
    exponent_sign: Sign = 1

    @classmethod
    def all(cls) -> list[Self]:
        return [cls(l_sign=a, exponent_sign=b) for a, b in itertools.product((1, -1), (1, -1))]

    @property
    def key(self) -> str:
        return f"{self.l_sign:+d}/{self.exponent_sign:+d}"


LITERAL_RANK2 = Rank2Variant(l_sign=1, exponent_sign=1)


class CharacterCombination(BaseModel):
    """How the L = 0 Hall polynomial is compared with a Weyl-Kac character."""

    model_config = {"extra": "forbid", "frozen": True}

    rendering: Literal["inverse", "direct"] = "inverse"
    imaginary: bool = False

    @classmethod
    def all(cls) -> list[Self]:
        return [cls(rendering=r, imaginary=i) for r, i in itertools.product(("inverse", "direct"), (True, False))]

    @property
    def key(self) -> str:
        return f"{self.rendering}/{'imaginary' if self.imaginary else 'real'}"


def convention_table() -> dict:
    return {
        "funceq": [v.model_dump() for v in FunceqVariant.all()],
        "rank2": [v.model_dump() for v in Rank2Variant.all()],
        "character": [v.model_dump() for v in CharacterCombination.all()],
        "hall_action": list(HALL_ACTIONS),
        "defaults": {
            "funceq": FunceqVariant().model_dump(),
            "rank2": Rank2Variant().model_dump(),
            "character": CharacterCombination().model_dump(),
            "hall_action": "twisted",
        },
    }


def table_hash() -> str:
    payload = json.dumps(convention_table(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


class ConventionRecord(BaseModel):
    model_config = {"extra": "forbid"}

    table_hash: str = Field(default_factory=table_hash)
    funceq: FunceqVariant = Field(default_factory=FunceqVariant)
    rank2: Rank2Variant = Field(default_factory=Rank2Variant)
    character: CharacterCombination = Field(default_factory=CharacterCombination)
    hall_action: HallAction = "twisted"
    hall_forms_agree: bool | None = None
    vanishing: dict[str, list[str]] = Field(default_factory=dict)

    def save(self, path: str | Path = DEFAULT_RECORD_PATH) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n")
        logger.info("wrote convention record to %s", path)
        return path

    @classmethod
    def load(cls, path: str | Path = DEFAULT_RECORD_PATH) -> Self:
        """Read a record; a missing file yields the built-in defaults, a stale one is refused."""
        path = Path(path)
        if not path.exists():
            logger.warning("no convention record at %s, using built-in defaults (run 'motivic selftest')", path)
            return cls()
        try:
            record = cls.model_validate_json(path.read_text())
        except ValidationError as e:
            raise ConventionError(f"unreadable convention record {path}: {e.error_count()} validation errors") from e
        if record.table_hash != table_hash():
            raise ConventionError(
                f"convention record {path} was written for a different convention table; rerun 'motivic selftest'"
            )
        return record
