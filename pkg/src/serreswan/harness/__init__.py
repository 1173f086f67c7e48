"""Verification harness: config ingestion, suites, reporting and CSV export."""

from .config import SUITES, RunConfig, load_config, parse_config
from .suites import run_all, run_suite

__all__ = ["SUITES", "RunConfig", "load_config", "parse_config", "run_all", "run_suite"]
