"""Python surface of the sdcsim simulator core."""

from _sdcsim import (
    SimulationError,
    build_fat_tree,
    find_path,
    run_documents,
    run_usecase1,
    run_usecase2,
    sample,
    validate_physical,
)

__all__ = [
    "SimulationError",
    "build_fat_tree",
    "find_path",
    "run_documents",
    "run_usecase1",
    "run_usecase2",
    "sample",
    "validate_physical",
]
