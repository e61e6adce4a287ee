from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class MetricResult(BaseModel):
    """
    A named discrimination measurement.

    `value` is None when the measurement is undefined (for example a zero
    normalization constant); the reason is then listed in `caveats`.
    Field names are part of the stable report contract.
    """

    name: str
    value: Optional[float] = None
    components: Dict[str, float] = Field(default_factory=dict)
    group_sizes: Tuple[int, int] = (0, 0)
    caveats: List[str] = Field(default_factory=list)

    @property
    def n_protected(self) -> int:
        return self.group_sizes[0]

    @property
    def n_favored(self) -> int:
        return self.group_sizes[1]
