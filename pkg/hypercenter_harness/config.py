"""Configuration and environment utilities for the hypercenter harness."""

import os
from typing import Dict, Any
from dataclasses import dataclass


@dataclass
class HarnessConfig:
    """Size caps and runtime settings shared by every module."""

    # Table settings
    table_cap: int = 2048
    assoc_exhaustive_cap: int = 512
    assoc_samples: int = 200000
    seed: int = 0

    # Automorphism search
    aut_cap: int = 128
    aut_member_cap: int = 50000
    aut_count_limit: int = 64

    # Subgroup enumeration and bounds
    enum_cap: int = 128
    bound_f_cap: int = 7
    bound_exact_bits: int = 8192

    # Runner settings
    max_workers: int = 4
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> 'HarnessConfig':
        """Create configuration from environment variables."""
        return cls(
            table_cap=int(os.getenv('HARNESS_TABLE_CAP', '2048')),
            assoc_exhaustive_cap=int(os.getenv('HARNESS_ASSOC_CAP', '512')),
            assoc_samples=int(os.getenv('HARNESS_ASSOC_SAMPLES', '200000')),
            seed=int(os.getenv('HARNESS_SEED', '0')),
            aut_cap=int(os.getenv('HARNESS_AUT_CAP', '128')),
            aut_member_cap=int(os.getenv('HARNESS_AUT_MEMBER_CAP', '50000')),
            aut_count_limit=int(os.getenv('HARNESS_AUT_COUNT_LIMIT', '64')),
            enum_cap=int(os.getenv('HARNESS_ENUM_CAP', '128')),
            bound_f_cap=int(os.getenv('HARNESS_BOUND_F_CAP', '7')),
            bound_exact_bits=int(os.getenv('HARNESS_BOUND_EXACT_BITS', '8192')),
            max_workers=int(os.getenv('HARNESS_MAX_WORKERS', '4')),
            log_level=os.getenv('HARNESS_LOG_LEVEL', 'INFO').upper(),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            'table_cap': self.table_cap,
            'assoc_exhaustive_cap': self.assoc_exhaustive_cap,
            'assoc_samples': self.assoc_samples,
            'seed': self.seed,
            'aut_cap': self.aut_cap,
            'aut_member_cap': self.aut_member_cap,
            'aut_count_limit': self.aut_count_limit,
            'enum_cap': self.enum_cap,
            'bound_f_cap': self.bound_f_cap,
            'bound_exact_bits': self.bound_exact_bits,
            'max_workers': self.max_workers,
            'log_level': self.log_level,
        }


# Global configuration instance
config = HarnessConfig.from_env()
