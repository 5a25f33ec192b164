"""Synthetic SPARCS-like data and naive reference oracles."""

from boat.synth.generator import (
    CORRUPTION_MODES,
    HEADER,
    CohortProfile,
    GenerationLedger,
    Stratum,
    generate,
    generate_file,
    load_profile,
    reference_profile,
    write_csv,
)

__all__ = [
    "CORRUPTION_MODES", "HEADER", "CohortProfile", "GenerationLedger", "Stratum", "generate",
    "generate_file", "load_profile", "reference_profile", "write_csv",
]
