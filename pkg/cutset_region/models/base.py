"""Base report models shared by every command."""

from typing import Any

from pydantic import BaseModel


class BaseReport(BaseModel):
    """Base report with common fields.

    Reports carry no timestamp: identical inputs serialize to identical bytes.
    """

    success: bool = True
    message: str = "Operation completed successfully"


class ErrorReport(BaseReport):
    """Error report emitted for input errors."""

    success: bool = False
    error_code: str | None = None
    details: dict[str, Any] | None = None
