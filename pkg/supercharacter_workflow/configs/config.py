"""
Configuration for the Supercharacter Workflow

Enumeration caps, budgets and parallelism for the table builds, the oracle
scans and the verification suites. Values can be overridden from the
environment (or a .env file) with SUPERCHAR_* variables.
"""

import os
from typing import Dict, Any
from dataclasses import dataclass, fields

from dotenv import load_dotenv

load_dotenv()


@dataclass
class SupercharacterConfig:
    """Budgets and caps; every limit is a hard error when exceeded, never a truncation."""

    # Enumeration caps
    inv_cap: int = 8                        # permutations for the inversion generating function
    poset_cap: int = 10                     # largest chain length for normal-subposet enumeration
    kernel_cap: int = 6                     # largest chain length for the kernel family

    # Budgets
    lattice_budget: int = 10 ** 7           # DFS nodes for lattice-point enumeration
    oracle_budget: int = 2 ** 24            # matrices per exhaustive oracle scan
    orbit_budget: int = 2 ** 16             # largest orbit closed by BFS

    # Field
    default_q: int = 2

    # Performance settings
    max_workers: int = 4                    # threads for table rows and oracle scan prefixes

    # Output
    output_dir: str = "data/output"
    log_phase: str = "supercharacters"

    @classmethod
    def from_env(cls) -> "SupercharacterConfig":
        """Defaults overridden by SUPERCHAR_<FIELD> environment variables (integers and strings)."""
        config = cls()
        for spec in fields(cls):
            raw = os.getenv(f"SUPERCHAR_{spec.name.upper()}")
            if raw is None:
                continue
            current = getattr(config, spec.name)
            setattr(config, spec.name, int(raw) if isinstance(current, int) else raw)
        return config

    def get_summary(self) -> Dict[str, Any]:
        """Get a summary of current configuration."""
        return {
            "caps": {
                "inv_cap": self.inv_cap,
                "poset_cap": self.poset_cap,
                "kernel_cap": self.kernel_cap,
            },
            "budgets": {
                "lattice_budget": self.lattice_budget,
                "oracle_budget": self.oracle_budget,
                "orbit_budget": self.orbit_budget,
            },
            "field": {"default_q": self.default_q},
            "performance": {"max_workers": self.max_workers},
            "output": {"output_dir": self.output_dir, "log_phase": self.log_phase},
        }


# Default configuration, with environment overrides applied
default_config = SupercharacterConfig.from_env()
