from typing import Dict, List, Optional

from pydantic import BaseModel

SCHEMA_VERSION = 1


class CheckItem(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class NumericValue(BaseModel):
    """A high precision number rendered as decimal strings."""

    re: str
    im: str = "0"
    prec: int
    error_bound: Optional[str] = None


class RunRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    params: Dict[str, str] = {}
    exact: Dict[str, str] = {}
    numeric: Dict[str, NumericValue] = {}
    checks: List[CheckItem] = []
    passed: bool = True
    error: Optional[str] = None
    wall_time: Optional[float] = None

    def add_check(self, item: CheckItem):
        self.checks.append(item)
        if not item.passed:
            self.passed = False

    def to_json(self, timing: bool = False) -> str:
        exclude = None if timing else {"wall_time"}
        return self.model_dump_json(indent=2, exclude=exclude)
