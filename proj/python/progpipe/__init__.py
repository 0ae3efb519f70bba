"""Pipeline search for readmission and wound-recurrence prediction."""

from ._core import (
    ProgpipeError,
    __version__,
    class_report,
    experiment,
    predict,
    reg_report,
    report,
    synthgen,
    train,
)

__all__ = [
    "ProgpipeError",
    "__version__",
    "class_report",
    "experiment",
    "predict",
    "reg_report",
    "report",
    "synthgen",
    "train",
]
