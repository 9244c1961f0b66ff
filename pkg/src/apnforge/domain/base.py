"""Shared pydantic base for domain objects."""

from pydantic import BaseModel, ConfigDict


class ForgeBaseModel(BaseModel):
    """Immutable base model for domain values and reports."""

    model_config = ConfigDict(frozen=True, extra="forbid")
