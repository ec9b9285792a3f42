from __future__ import annotations

from typing import Any, Mapping, MutableMapping, Optional, Sequence

import numpy as np

from ...verify import VerificationReport
from ..interfaces import StepResult

CLOUD_CAP = 5000


def finished(
    data: MutableMapping[str, Any],
    reports: Sequence[VerificationReport],
    clouds: Optional[Mapping[str, np.ndarray]] = None,
    **extra: Any,
) -> StepResult:
    """Ok result appending to the reports and clouds gathered by earlier steps."""
    kept = {k: np.asarray(v)[:CLOUD_CAP] for k, v in (clouds or {}).items()}
    payload = {
        "reports": list(data.get("reports", [])) + list(reports),
        "clouds": {**data.get("clouds", {}), **kept},
        **extra,
    }
    return StepResult.ok(payload, passed=all(r.passed for r in reports), checks=[r.check for r in reports])
