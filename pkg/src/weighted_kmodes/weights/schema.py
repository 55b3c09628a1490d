"""
Attribute value weighting schemas.
"""

from __future__ import annotations

from enum import Enum

from ..errors import ConfigError


class WeightingSchema(Enum):
    """
    The five attribute value weighting schemas.

    Enum values are the short algorithm names used on the command line.
    """
    UNIT = "kmodes"
    WF1 = "df"
    WF2 = "sf"
    WF3 = "hcf"
    WF4 = "hsf"

    @classmethod
    def from_name(cls, name: str) -> "WeightingSchema":
        """Accept a CLI name ("hsf"), a label ("hsf-k-modes") or a tag ("WF4")."""
        key = name.strip()
        for schema in cls:
            if key.lower() in (schema.value, schema.label.lower()) or key.upper() == schema.name:
                return schema
        choices = ", ".join(s.value for s in cls)
        raise ConfigError(f"unknown weighting schema {name!r} (expected one of: {choices})")

    @property
    def label(self) -> str:
        return "k-modes" if self is WeightingSchema.UNIT else f"{self.value}-k-modes"

    @property
    def is_dynamic(self) -> bool:
        """Weights depend on the evolving partition."""
        return self in (WeightingSchema.WF1, WeightingSchema.WF3, WeightingSchema.WF4)

    @property
    def needs_static_table(self) -> bool:
        return self in (WeightingSchema.WF2, WeightingSchema.WF3)

    @property
    def needs_frequencies(self) -> bool:
        return self in (WeightingSchema.WF2, WeightingSchema.WF3, WeightingSchema.WF4)


ALL_SCHEMAS = tuple(WeightingSchema)
