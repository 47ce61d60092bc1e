from ._core import (
    PRESSURE_COLUMNS,
    BudgetExceeded,
    ConfigError,
    DomainError,
    Error,
    Model,
    NotInZ,
    __version__,
    beta_admissible,
    beta_count,
    beta_words,
    enumerate_by_weight,
    is_sturmian_word,
    run_cli,
    sturmian_word,
)
from .schema import COLUMNS, PressureTable, SchemaError, parse_pressure_csv, read_pressure_csv

__all__ = [
    "PRESSURE_COLUMNS",
    "COLUMNS",
    "BudgetExceeded",
    "ConfigError",
    "DomainError",
    "Error",
    "Model",
    "NotInZ",
    "PressureTable",
    "SchemaError",
    "__version__",
    "beta_admissible",
    "beta_count",
    "beta_words",
    "enumerate_by_weight",
    "is_sturmian_word",
    "parse_pressure_csv",
    "read_pressure_csv",
    "run_cli",
    "sturmian_word",
]
